#include "qgt/validate.hpp"

#include <cmath>
#include <cstring>
#include <random>
#include <sstream>

#include "qgt/errors.hpp"
#include "qgt/measure.hpp"
#include "qgt/models.hpp"
#include "qgt/qgt.hpp"
#include "qgt/topology.hpp"

namespace qgt {

namespace {

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(3);
    ss << std::scientific << v;
    return ss.str();
}

CMatrix random_unitary(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    CMatrix a(n, n);
    for (cplx& v : a.entries()) v = cplx(gauss(rng), gauss(rng));
    // Gram-Schmidt columns
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < j; ++k) {
            cplx proj = 0.0;
            for (int i = 0; i < n; ++i) proj += std::conj(a(i, k)) * a(i, j);
            for (int i = 0; i < n; ++i) a(i, j) -= proj * a(i, k);
        }
        double norm = 0.0;
        for (int i = 0; i < n; ++i) norm += std::norm(a(i, j));
        norm = std::sqrt(norm);
        for (int i = 0; i < n; ++i) a(i, j) /= norm;
    }
    return a;
}

const std::vector<ParameterPoint> kSamplePoints = {
    ParameterPoint({1.0, 0.5}, {1.0}),
    ParameterPoint({2.2, 4.1}, {1.0}),
    ParameterPoint({0.3, 5.7}, {-1.0}),
    ParameterPoint({3.9, 1.7}, {3.0}),
};

CheckResult check_hermiticity() {
    const HamiltonianFamily qwz = qwz_family();
    const HamiltonianFamily dbl = doubled_qwz_family();
    double worst = 0.0;
    for (const ParameterPoint& p : kSamplePoints) {
        const QGTensor q = qgt_point(qwz, p, Subspace{0, 1});
        for (int mu = 0; mu < 2; ++mu)
            for (int nu = 0; nu < 2; ++nu)
                worst = std::max(worst, fro_norm(q.q(nu, mu) - adjoint(q.q(mu, nu))));
        const QGTensor q4 = qgt_point(dbl, p, Subspace{0, 2});
        for (int mu = 0; mu < 2; ++mu)
            for (int nu = 0; nu < 2; ++nu)
                worst = std::max(worst, fro_norm(q4.q(nu, mu) - adjoint(q4.q(mu, nu))));
    }
    return {"hermiticity Q_numu = Q_munu^dag", worst < 1e-8, "worst residual " + fmt(worst)};
}

CheckResult check_metric_psd() {
    const HamiltonianFamily qwz = qwz_family();
    double worst = 0.0;
    for (const ParameterPoint& p : kSamplePoints) {
        const QGTensor q = qgt_point(qwz, p, Subspace{0, 1});
        const double gxx = q.tr_metric(0, 0), gyy = q.tr_metric(1, 1), gxy = q.tr_metric(0, 1);
        // eigenvalues of the 2x2 real symmetric [g]
        const double mean = 0.5 * (gxx + gyy);
        const double disc = std::sqrt(0.25 * (gxx - gyy) * (gxx - gyy) + gxy * gxy);
        worst = std::min(mean - disc, worst);
    }
    return {"metric positive semidefinite", worst > -1e-12, "smallest eigenvalue " + fmt(worst)};
}

CheckResult check_curvature_antisymmetry() {
    const HamiltonianFamily qwz = qwz_family();
    const HamiltonianFamily dbl = doubled_qwz_family();
    double worst = 0.0;
    for (const ParameterPoint& p : kSamplePoints) {
        const QGTensor q = qgt_point(qwz, p, Subspace{0, 1});
        worst = std::max(worst, fro_norm(q.curvature(0, 1) + q.curvature(1, 0)));
        worst = std::max(worst, fro_norm(q.curvature(0, 0)));
        const QGTensor q4 = qgt_point(dbl, p, Subspace{0, 2});
        worst = std::max(worst, fro_norm(q4.curvature(0, 1) + q4.curvature(1, 0)));
    }
    return {"curvature antisymmetry F_numu = -F_munu", worst < 1e-8, "worst residual " + fmt(worst)};
}

CheckResult check_projector_idempotency() {
    const HamiltonianFamily dbl = doubled_qwz_family();
    double worst = 0.0;
    for (const ParameterPoint& p : kSamplePoints) {
        const Frame f = eigenframe(dbl, p, Subspace{0, 2});
        const CMatrix pr = projector(f);
        worst = std::max(worst, fro_norm(matmul(pr, pr) - pr));
        worst = std::max(worst, std::abs(trace(pr) - cplx(2.0, 0.0)));
    }
    return {"projector idempotency", worst < 1e-12, "worst residual " + fmt(worst)};
}

CheckResult check_wilson_unitarity() {
    const HamiltonianFamily qwz = qwz_family();
    std::vector<ParameterPoint> circle;
    const int segs = 400;
    for (int s = 0; s < segs; ++s)
        circle.push_back(ParameterPoint({kTwoPi * s / segs, 0.9}, {1.0}));
    const Holonomy w = wilson_loop(qwz, circle, Subspace{0, 1});
    const double defect = fro_norm(matmul(adjoint(w.unitary), w.unitary) -
                                   CMatrix::identity(w.unitary.rows()));
    return {"wilson loop unitarity", defect < 1e-8, "unitarity defect " + fmt(defect)};
}

CheckResult check_gauge_covariance() {
    const HamiltonianFamily dbl = doubled_qwz_family();
    const Subspace sub{0, 2};
    std::mt19937_64 rng(20240517);
    double worst = 0.0;
    for (const ParameterPoint& p : kSamplePoints) {
        const QGTensor q = qgt_point(dbl, p, sub);
        const CMatrix w = random_unitary(2, rng);
        // recompute with the center frame rotated by w
        const Frame center = eigenframe(dbl, p, sub);
        const Frame rotated{matmul(center.vectors, w), p};
        const CMatrix one_minus_p = CMatrix::identity(4) - projector(rotated);
        const double h = kDefaultFdStep;
        std::vector<CMatrix> df;
        for (int mu = 0; mu < 2; ++mu) {
            const Direction dir = Direction::periodic(mu);
            const Frame fp = aligned_frame(dbl, displaced(p, dir, +h), rotated, sub);
            const Frame fm = aligned_frame(dbl, displaced(p, dir, -h), rotated, sub);
            CMatrix d = fp.vectors - fm.vectors;
            d *= cplx(1.0 / (2.0 * h), 0.0);
            df.push_back(d);
        }
        for (int mu = 0; mu < 2; ++mu)
            for (int nu = 0; nu < 2; ++nu) {
                const CMatrix qrot = matmul(adjoint(df[mu]), matmul(one_minus_p, df[nu]));
                const CMatrix expected = matmul(adjoint(w), matmul(q.q(mu, nu), w));
                worst = std::max(worst, fro_norm(qrot - expected));
            }
    }
    return {"gauge covariance Q -> W^dag Q W", worst < 1e-6, "worst residual " + fmt(worst)};
}

CheckResult check_analytic_numeric() {
    const HamiltonianFamily qwz = qwz_family();
    GridSpec spec{16, 16, GridOffset::center};
    double worst = 0.0;
    for (int i = 0; i < spec.nx; ++i)
        for (int j = 0; j < spec.ny; ++j) {
            const ParameterPoint p({spec.kx(i), spec.ky(j)}, {1.0});
            QGTensor qa;
            try {
                qa = qwz_analytic_qgt(p);
            } catch (const ChartPoleError&) {
                continue;
            }
            const QGTensor qn = qgt_point(qwz, p, Subspace{0, 1});
            for (int mu = 0; mu < 2; ++mu)
                for (int nu = 0; nu < 2; ++nu)
                    worst = std::max(worst, std::abs(qn.q(mu, nu)(0, 0) - qa.q(mu, nu)(0, 0)));
        }
    return {"analytic/numeric QGT agreement", worst < 1e-5, "max deviation " + fmt(worst)};
}

CheckResult check_phase_diagram_spots() {
    const HamiltonianFamily qwz = qwz_family();
    const Subspace sub{0, 1};
    bool ok = true;
    std::string detail;
    const double ms[3] = {-1.0, 1.0, 3.0};
    const long expected[3] = {1, -1, 0};
    for (int t = 0; t < 3; ++t) {
        const ChernResult r = chern_lattice(frames_grid(qwz, 24, 24, {ms[t]}, sub));
        if (r.rounded != expected[t]) ok = false;
        detail += "m=" + std::to_string(ms[t]).substr(0, 4) + " -> C=" +
                  std::to_string(r.rounded) + " ";
    }
    return {"two-band phase diagram spot checks", ok, detail};
}

CheckResult check_determinism() {
    const HamiltonianFamily qwz = qwz_family();
    const GridSpec spec{16, 16, GridOffset::center};
    const QGTField a = qgt_grid(qwz, spec, {1.0}, Subspace{0, 1}, kDefaultFdStep, 1);
    const QGTField b = qgt_grid(qwz, spec, {1.0}, Subspace{0, 1}, kDefaultFdStep, 4);
    bool identical = a.field.singular == b.field.singular;
    for (int c = 0; identical && c < spec.nx * spec.ny; ++c)
        for (int mu = 0; identical && mu < 2; ++mu)
            for (int nu = 0; identical && nu < 2; ++nu) {
                const CMatrix &qa = a.field.values[c].q(mu, nu), &qb = b.field.values[c].q(mu, nu);
                identical = std::memcmp(qa.entries().data(), qb.entries().data(),
                                        qa.entries().size() * sizeof(cplx)) == 0;
            }
    return {"determinism under parallelism (1 vs 4 workers)", identical,
            identical ? "bit-identical" : "payload differs"};
}

} // namespace

std::vector<CheckResult> run_validation_suite() {
    return {
        check_hermiticity(),
        check_metric_psd(),
        check_curvature_antisymmetry(),
        check_projector_idempotency(),
        check_wilson_unitarity(),
        check_gauge_covariance(),
        check_analytic_numeric(),
        check_phase_diagram_spots(),
        check_determinism(),
    };
}

bool all_passed(const std::vector<CheckResult>& results) {
    for (const CheckResult& r : results)
        if (!r.passed) return false;
    return true;
}

} // namespace qgt
