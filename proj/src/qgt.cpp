#include "qgt/qgt.hpp"

#include <cmath>
#include <string>

#include "qgt/errors.hpp"

namespace qgt {

QGTensor::QGTensor(int n, std::vector<Direction> directions)
    : n_(n), directions_(std::move(directions)),
      q_(directions_.size() * directions_.size(), CMatrix(n, n)) {}

CMatrix QGTensor::metric(int mu, int nu) const {
    return 0.5 * (q(mu, nu) + adjoint(q(mu, nu)));
}

CMatrix QGTensor::curvature(int mu, int nu) const {
    return cplx(0.0, 1.0) * (q(mu, nu) - adjoint(q(mu, nu)));
}

double QGTensor::tr_metric(int mu, int nu) const { return trace(metric(mu, nu)).real(); }

double QGTensor::tr_curvature(int mu, int nu) const { return trace(curvature(mu, nu)).real(); }

namespace {

std::string point_str(const ParameterPoint& p) {
    std::string s = "(k=";
    for (size_t i = 0; i < p.k.size(); ++i) s += (i ? "," : "") + std::to_string(p.k[i]);
    s += "; ext=";
    for (size_t i = 0; i < p.external.size(); ++i) s += (i ? "," : "") + std::to_string(p.external[i]);
    return s + ")";
}

std::vector<double> point_coords(const ParameterPoint& p) {
    std::vector<double> c = p.k;
    c.insert(c.end(), p.external.begin(), p.external.end());
    return c;
}

} // namespace

Frame eigenframe(const HamiltonianFamily& family, const ParameterPoint& p, const Subspace& sub) {
    if (sub.first < 0 || sub.count < 1 || sub.first + sub.count > family.dim)
        throw DimensionError("eigenframe: band range [" + std::to_string(sub.first) + ".." +
                             std::to_string(sub.first + sub.count) + ") outside spectrum of dim " +
                             std::to_string(family.dim));
    const HermEig e = eig_hermitian(family.evaluate(p));
    // boundary gaps classify singular points
    if (sub.first > 0) {
        const double gap = e.values[sub.first] - e.values[sub.first - 1];
        if (gap < sub.gap_tol)
            throw SingularPointError("eigenframe: gap " + std::to_string(gap) +
                                     " below subspace at " + point_str(p), point_coords(p), gap);
    }
    if (sub.first + sub.count < family.dim) {
        const double gap = e.values[sub.first + sub.count] - e.values[sub.first + sub.count - 1];
        if (gap < sub.gap_tol)
            throw SingularPointError("eigenframe: gap " + std::to_string(gap) +
                                     " above subspace at " + point_str(p), point_coords(p), gap);
    }
    if (sub.count > 1) {
        const double spread = e.values[sub.first + sub.count - 1] - e.values[sub.first];
        if (spread > sub.gap_tol)
            throw SingularPointError("eigenframe: declared-degenerate subspace has spread " +
                                     std::to_string(spread) + " at " + point_str(p),
                                     point_coords(p), spread);
    }
    return Frame{e.vectors.cols_range(sub.first, sub.first + sub.count), p};
}

CMatrix projector(const Frame& frame) {
    return matmul(frame.vectors, adjoint(frame.vectors));
}

Frame aligned_frame(const HamiltonianFamily& family, const ParameterPoint& p,
                    const Frame& reference, const Subspace& sub) {
    const Frame raw = eigenframe(family, p, sub);
    const CMatrix overlap = matmul(adjoint(reference.vectors), raw.vectors);
    CMatrix u;
    try {
        u = unitary_align(overlap);
    } catch (const SingularMatrixError& e) {
        throw SingularMatrixError(
            "aligned_frame: overlap with reference nearly singular at " + point_str(p) +
            " (step too large or band crossing; sigma_min " +
            std::to_string(e.smallest_singular_value) + ")", e.smallest_singular_value);
    }
    return Frame{matmul(raw.vectors, adjoint(u)), p};
}

CMatrix frame_derivative(const HamiltonianFamily& family, const ParameterPoint& p,
                         const Direction& dir, double h, const Subspace& sub) {
    const Frame center = eigenframe(family, p, sub);
    const Frame fp = aligned_frame(family, displaced(p, dir, +h), center, sub);
    const Frame fm = aligned_frame(family, displaced(p, dir, -h), center, sub);
    CMatrix d = fp.vectors - fm.vectors;
    d *= cplx(1.0 / (2.0 * h), 0.0);
    return d;
}

std::vector<Direction> periodic_directions(const HamiltonianFamily& family) {
    std::vector<Direction> dirs;
    for (int i = 0; i < family.n_periodic; ++i) dirs.push_back(Direction::periodic(i));
    return dirs;
}

std::vector<Direction> all_directions(const HamiltonianFamily& family) {
    std::vector<Direction> dirs = periodic_directions(family);
    for (int i = 0; i < family.n_external; ++i) dirs.push_back(Direction::external(i));
    return dirs;
}

QGTensor qgt_point(const HamiltonianFamily& family, const ParameterPoint& p,
                   const Subspace& sub, double h, std::vector<Direction> directions) {
    if (directions.empty()) directions = periodic_directions(family);
    const Frame center = eigenframe(family, p, sub);
    const CMatrix one_minus_p = CMatrix::identity(family.dim) - projector(center);

    const int D = static_cast<int>(directions.size());
    std::vector<CMatrix> dframe(D);
    for (int mu = 0; mu < D; ++mu) {
        const Frame fp = aligned_frame(family, displaced(p, directions[mu], +h), center, sub);
        const Frame fm = aligned_frame(family, displaced(p, directions[mu], -h), center, sub);
        CMatrix d = fp.vectors - fm.vectors;
        d *= cplx(1.0 / (2.0 * h), 0.0);
        dframe[mu] = std::move(d);
    }

    QGTensor out(sub.count, directions);
    std::vector<CMatrix> proj_d(D);
    for (int nu = 0; nu < D; ++nu) proj_d[nu] = matmul(one_minus_p, dframe[nu]);
    for (int mu = 0; mu < D; ++mu)
        for (int nu = 0; nu < D; ++nu)
            out.q(mu, nu) = matmul(adjoint(dframe[mu]), proj_d[nu]);
    return out;
}

QGTensor qgt_analytic_twoband(const DVector& d, const double grad_d[2][3], double tau_gap) {
    const double r = d.norm();
    if (r <= tau_gap)
        throw SingularPointError("qgt_analytic_twoband: gap closing (|d| = " + std::to_string(r) + ")",
                                 {d.d1, d.d2, d.d3}, 2.0 * r);
    const double rho2 = d.d1 * d.d1 + d.d2 * d.d2;
    if (rho2 <= tau_gap * tau_gap)
        throw ChartPoleError("qgt_analytic_twoband: chart pole (d1 = d2 = 0); use the projector path");
    const double rho = std::sqrt(rho2);
    const double r2 = r * r;

    // chain rule through theta = arccos(d3/|d|), phi = atan2(d2, d1)
    const double dth_dd[3] = {d.d3 * d.d1 / (r2 * rho), d.d3 * d.d2 / (r2 * rho),
                              (d.d3 * d.d3 - r2) / (r2 * rho)};
    const double dph_dd[3] = {-d.d2 / rho2, d.d1 / rho2, 0.0};
    double th_g[2], ph_g[2];
    for (int mu = 0; mu < 2; ++mu) {
        th_g[mu] = ph_g[mu] = 0.0;
        for (int a = 0; a < 3; ++a) {
            th_g[mu] += dth_dd[a] * grad_d[mu][a];
            ph_g[mu] += dph_dd[a] * grad_d[mu][a];
        }
    }
    const double sth = rho / r;

    QGTensor out(1, {Direction::periodic(0), Direction::periodic(1)});
    for (int mu = 0; mu < 2; ++mu)
        for (int nu = 0; nu < 2; ++nu)
            out.q(mu, nu)(0, 0) =
                cplx(0.25 * (th_g[mu] * th_g[nu] + sth * sth * ph_g[mu] * ph_g[nu]),
                     0.25 * sth * (ph_g[mu] * th_g[nu] - ph_g[nu] * th_g[mu]));
    return out;
}

QGTensor qgt_analytic_point(const HamiltonianFamily& family, const ParameterPoint& p,
                            double tau_gap) {
    if (!family.dvector)
        throw Error("qgt_analytic_point: family '" + family.name +
                    "' exposes no d-vector field; use the projector path");
    double grad[2][3];
    family.dvector->grad_d(p, grad);
    return qgt_analytic_twoband(family.dvector->d(p), grad, tau_gap);
}

QGTensor qwz_analytic_qgt(const ParameterPoint& p, double tau_gap) {
    const DVector d = qwz_d_vector(p);
    const double kx = p.k[0], ky = p.k[1];
    const double grad[2][3] = {{std::cos(kx), 0.0, -std::sin(kx)},
                               {0.0, std::cos(ky), -std::sin(ky)}};
    return qgt_analytic_twoband(d, grad, tau_gap);
}

QGTField qgt_grid(const HamiltonianFamily& family, const GridSpec& spec,
                  const std::vector<double>& external, const Subspace& sub,
                  double h, int workers) {
    if (spec.nx < 4 || spec.ny < 4) throw DimensionError("qgt_grid: grid sizes must be >= 4");
    if (static_cast<int>(external.size()) != family.n_external)
        throw DimensionError("qgt_grid: expected " + std::to_string(family.n_external) +
                             " external parameter values");
    QGTField out;
    out.field = FieldGrid<QGTensor>(spec);
    const int ncells = spec.nx * spec.ny;
    parallel_for(ncells, workers, [&](int c) {
        const int i = c / spec.ny, j = c % spec.ny;
        ParameterPoint p({spec.kx(i), spec.ky(j)}, external);
        try {
            out.field.values[c] = qgt_point(family, p, sub, h);
        } catch (const SingularPointError&) {
            out.field.singular[c] = 1;
        } catch (const SingularMatrixError&) {
            out.field.singular[c] = 1; // stencil straddles a band crossing
        }
    });
    out.singular_cells = out.field.singular_count();
    if (out.singular_cells * 10 > ncells)
        out.warnings.push_back("more than 10% of cells singular (" +
                               std::to_string(out.singular_cells) + "/" + std::to_string(ncells) +
                               "): model likely at criticality");
    return out;
}

} // namespace qgt
