#include "qgt/models.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "qgt/errors.hpp"
#include "qgt/linalg.hpp"

namespace qgt {

double DVector::norm() const { return std::sqrt(d1 * d1 + d2 * d2 + d3 * d3); }

CMatrix HamiltonianFamily::evaluate(const ParameterPoint& p) const {
    if (static_cast<int>(p.k.size()) != n_periodic ||
        static_cast<int>(p.external.size()) != n_external)
        throw DimensionError("family '" + name + "': point arity (" +
                             std::to_string(p.k.size()) + " periodic, " +
                             std::to_string(p.external.size()) + " external), expected (" +
                             std::to_string(n_periodic) + ", " + std::to_string(n_external) + ")");
    return evaluate_fn(p);
}

DVector qwz_d_vector(const ParameterPoint& p) {
    if (p.k.size() != 2 || p.external.size() != 1)
        throw DimensionError("qwz_d_vector: expected 2 periodic coords and 1 external (m)");
    const double kx = p.k[0], ky = p.k[1], m = p.external[0];
    return {std::sin(kx), std::sin(ky), m + std::cos(kx) + std::cos(ky), 0.0};
}

CMatrix dvector_hamiltonian(const DVector& d) {
    const cplx b(d.d1, -d.d2);
    return CMatrix(2, 2, {d.eps + d.d3, b, std::conj(b), d.eps - d.d3});
}

HamiltonianFamily qwz_family() {
    HamiltonianFamily f;
    f.name = "qwz";
    f.dim = 2;
    f.n_periodic = 2;
    f.n_external = 1;
    f.evaluate_fn = [](const ParameterPoint& p) { return dvector_hamiltonian(qwz_d_vector(p)); };
    auto field = std::make_shared<DVectorField>();
    field->d = qwz_d_vector;
    field->grad_d = [](const ParameterPoint& p, double (&grad)[2][3]) {
        grad[0][0] = std::cos(p.k[0]); grad[0][1] = 0.0; grad[0][2] = -std::sin(p.k[0]);
        grad[1][0] = 0.0; grad[1][1] = std::cos(p.k[1]); grad[1][2] = -std::sin(p.k[1]);
    };
    f.dvector = field;
    return f;
}

BlochAngles analytic_angles(const DVector& d, double tau_gap) {
    const double r = d.norm();
    if (r <= tau_gap)
        throw SingularPointError("analytic_angles: |d| = " + std::to_string(r) +
                                 " at a gap closing", {d.d1, d.d2, d.d3}, 2.0 * r);
    BlochAngles a;
    a.theta = std::acos(std::clamp(d.d3 / r, -1.0, 1.0));
    const double rho = std::hypot(d.d1, d.d2);
    if (rho <= tau_gap) {
        a.phi = 0.0;
        a.phi_defined = false; // pole of the chart
    } else {
        a.phi = std::atan2(d.d2, d.d1);
    }
    return a;
}

TwoBandVectors analytic_eigenvectors(double theta, double phi) {
    const cplx eip = std::polar(1.0, phi);
    const double ch = std::cos(0.5 * theta), sh = std::sin(0.5 * theta);
    TwoBandVectors v;
    v.psi_plus = CMatrix(2, 1, {ch, eip * sh});
    v.psi_minus = CMatrix(2, 1, {-sh, eip * ch});
    return v;
}

CMatrix default_doubled_mix(const ParameterPoint& p) {
    // V = I + (e^{i kx} - 1) |v><v|, v = (1,1,1,-1)/2
    static const double v[4] = {0.5, 0.5, 0.5, -0.5};
    const cplx w = std::polar(1.0, p.k[0]) - 1.0;
    CMatrix V = CMatrix::identity(4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) V(i, j) += w * v[i] * v[j];
    return V;
}

HamiltonianFamily doubled_qwz_family(std::function<CMatrix(const ParameterPoint&)> mix) {
    if (!mix) mix = default_doubled_mix;
    HamiltonianFamily f;
    f.name = "qwz-doubled";
    f.dim = 4;
    f.n_periodic = 2;
    f.n_external = 1;
    f.evaluate_fn = [mix](const ParameterPoint& p) {
        const CMatrix h2 = dvector_hamiltonian(qwz_d_vector(p));
        CMatrix h4(4, 4);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                h4(i, j) = h2(i, j);
                h4(i + 2, j + 2) = h2(i, j);
            }
        const CMatrix V = mix(p);
        if (V.rows() != 4 || V.cols() != 4)
            throw DimensionError("doubled_qwz_family: mix must be 4x4");
        const double unit_defect = fro_norm(matmul(adjoint(V), V) - CMatrix::identity(4));
        if (unit_defect > 1e-10)
            throw Error("doubled_qwz_family: mix not unitary (defect " +
                        std::to_string(unit_defect) + ")");
        return matmul(matmul(V, h4), adjoint(V));
    };
    return f;
}

HamiltonianFamily constant_family(const CMatrix& h0, int n_periodic, int n_external) {
    if (!h0.is_square()) throw DimensionError("constant_family: non-square matrix");
    HamiltonianFamily f;
    f.name = "constant";
    f.dim = h0.rows();
    f.n_periodic = n_periodic;
    f.n_external = n_external;
    f.evaluate_fn = [h0](const ParameterPoint&) { return h0; };
    return f;
}

namespace {

// Tabulated d-vector fields with trigonometric interpolation: smooth on the
// torus and exact at the tabulated nodes. Nyquist modes enter through the
// real part (cosine interpolant).
struct TrigTable {
    int nx = 0, ny = 0;
    // DFT coefficients per field, indexed [gx*ny + gy]
    std::vector<std::vector<cplx>> coef; // 4 fields: d1 d2 d3 eps

    // value and, when grad is non-null, the (d/dkx, d/dky) gradient of the
    // real trig interpolant
    double eval(int field, double kx, double ky, double* grad = nullptr) const {
        std::vector<cplx> ex(nx), ey(ny);
        std::vector<int> fx(nx), fy(ny);
        for (int g = 0; g < nx; ++g) {
            fx[g] = (g <= nx / 2) ? g : g - nx;
            ex[g] = std::polar(1.0, fx[g] * kx);
        }
        for (int g = 0; g < ny; ++g) {
            fy[g] = (g <= ny / 2) ? g : g - ny;
            ey[g] = std::polar(1.0, fy[g] * ky);
        }
        cplx acc = 0.0, dx = 0.0, dy = 0.0;
        const std::vector<cplx>& c = coef[field];
        for (int gx = 0; gx < nx; ++gx) {
            cplx row = 0.0, row_dy = 0.0;
            for (int gy = 0; gy < ny; ++gy) {
                const cplx term = c[static_cast<size_t>(gx) * ny + gy] * ey[gy];
                row += term;
                if (grad) row_dy += term * cplx(0.0, fy[gy]);
            }
            acc += row * ex[gx];
            if (grad) {
                dx += row * ex[gx] * cplx(0.0, fx[gx]);
                dy += row_dy * ex[gx];
            }
        }
        if (grad) {
            grad[0] = dx.real();
            grad[1] = dy.real();
        }
        return acc.real();
    }
};

} // namespace

HamiltonianFamily tabulated_family_from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("tabulated model: cannot open '" + path + "'");

    struct Row { int i, j; double d1, d2, d3, eps; };
    std::vector<Row> rows;
    int nx = 0, ny = 0;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (first) { first = false; // header
            if (line.find("kx_index") != std::string::npos) continue;
        }
        std::stringstream ss(line);
        Row r{};
        char comma;
        if (!(ss >> r.i >> comma >> r.j >> comma >> r.d1 >> comma >> r.d2 >> comma >> r.d3 >> comma >> r.eps))
            throw UsageError("tabulated model: bad row '" + line + "'");
        nx = std::max(nx, r.i + 1);
        ny = std::max(ny, r.j + 1);
        rows.push_back(r);
    }
    if (nx < 2 || ny < 2) throw UsageError("tabulated model: grid too small");
    if (static_cast<int>(rows.size()) != nx * ny)
        throw UsageError("tabulated model: expected " + std::to_string(nx * ny) +
                         " rows for a " + std::to_string(nx) + "x" + std::to_string(ny) +
                         " grid, got " + std::to_string(rows.size()));

    std::vector<std::vector<double>> fields(4, std::vector<double>(static_cast<size_t>(nx) * ny));
    for (const Row& r : rows) {
        const size_t idx = static_cast<size_t>(r.i) * ny + r.j;
        fields[0][idx] = r.d1;
        fields[1][idx] = r.d2;
        fields[2][idx] = r.d3;
        fields[3][idx] = r.eps;
    }

    auto table = std::make_shared<TrigTable>();
    table->nx = nx;
    table->ny = ny;
    table->coef.assign(4, std::vector<cplx>(static_cast<size_t>(nx) * ny));
    for (int f = 0; f < 4; ++f)
        for (int gx = 0; gx < nx; ++gx)
            for (int gy = 0; gy < ny; ++gy) {
                cplx acc = 0.0;
                for (int i = 0; i < nx; ++i)
                    for (int j = 0; j < ny; ++j)
                        acc += fields[f][static_cast<size_t>(i) * ny + j] *
                               std::polar(1.0, -kTwoPi * (double(gx) * i / nx + double(gy) * j / ny));
                table->coef[f][static_cast<size_t>(gx) * ny + gy] = acc / double(nx * ny);
            }

    HamiltonianFamily fam;
    fam.name = "table";
    fam.dim = 2;
    fam.n_periodic = 2;
    fam.n_external = 0;
    auto table_d = [table](const ParameterPoint& p) {
        DVector d;
        d.d1 = table->eval(0, p.k[0], p.k[1]);
        d.d2 = table->eval(1, p.k[0], p.k[1]);
        d.d3 = table->eval(2, p.k[0], p.k[1]);
        d.eps = table->eval(3, p.k[0], p.k[1]);
        return d;
    };
    fam.evaluate_fn = [table_d](const ParameterPoint& p) {
        return dvector_hamiltonian(table_d(p));
    };
    auto field = std::make_shared<DVectorField>();
    field->d = table_d;
    field->grad_d = [table](const ParameterPoint& p, double (&grad)[2][3]) {
        for (int a = 0; a < 3; ++a) {
            double g[2];
            table->eval(a, p.k[0], p.k[1], g);
            grad[0][a] = g[0];
            grad[1][a] = g[1];
        }
    };
    fam.dvector = field;
    return fam;
}

double energy_gap(const HamiltonianFamily& family, const ParameterPoint& p, int subspace_size) {
    if (subspace_size < 1 || subspace_size >= family.dim)
        throw DimensionError("energy_gap: subspace_size must be in [1, dim)");
    const HermEig e = eig_hermitian(family.evaluate(p));
    return e.values[subspace_size] - e.values[subspace_size - 1];
}

} // namespace qgt
