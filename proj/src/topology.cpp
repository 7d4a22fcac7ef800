#include "qgt/topology.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qgt/errors.hpp"

namespace qgt {

namespace {

constexpr double kPi = std::numbers::pi;

cplx link_between(const CMatrix& a, const CMatrix& b) {
    const cplx d = det(matmul(adjoint(a), b));
    const double mag = std::abs(d);
    if (mag < 1e-12)
        throw SingularMatrixError(
            "link_variable: vanishing overlap determinant (grid too coarse at near-degeneracy)", mag);
    return d / mag;
}

// One parallel-transport step: gauge the raw eigenframe at the next point
// against the current frame.
CMatrix transport_step(const HamiltonianFamily& family, const CMatrix& current,
                       const ParameterPoint& next, const Subspace& sub) {
    const Frame raw = eigenframe(family, next, sub);
    const CMatrix u = unitary_align(matmul(adjoint(current), raw.vectors));
    return matmul(raw.vectors, adjoint(u));
}

bool same_point(const ParameterPoint& a, const ParameterPoint& b) {
    if (a.k.size() != b.k.size() || a.external.size() != b.external.size()) return false;
    for (size_t i = 0; i < a.k.size(); ++i)
        if (std::abs(a.k[i] - b.k[i]) > 1e-15) return false;
    for (size_t i = 0; i < a.external.size(); ++i)
        if (std::abs(a.external[i] - b.external[i]) > 1e-15) return false;
    return true;
}

} // namespace

cplx link_variable(const Frame& frame_a, const Frame& frame_b) {
    if (frame_a.vectors.cols() != frame_b.vectors.cols() ||
        frame_a.vectors.rows() != frame_b.vectors.rows())
        throw DimensionError("link_variable: frame shape mismatch");
    return link_between(frame_a.vectors, frame_b.vectors);
}

FieldGrid<Frame> frames_grid(const HamiltonianFamily& family, int nx, int ny,
                             const std::vector<double>& external, const Subspace& sub,
                             int workers) {
    GridSpec spec{nx, ny, GridOffset::node};
    FieldGrid<Frame> out(spec);
    parallel_for(nx * ny, workers, [&](int c) {
        const int i = c / ny, j = c % ny;
        ParameterPoint p({spec.kx(i), spec.ky(j)}, external);
        try {
            out.values[c] = eigenframe(family, p, sub);
        } catch (const SingularPointError&) {
            out.singular[c] = 1;
        }
    });
    return out;
}

ChernResult chern_lattice(const FieldGrid<Frame>& frames) {
    const int nx = frames.spec.nx, ny = frames.spec.ny;
    const int nsing = frames.singular_count();
    if (nsing > 0)
        throw CriticalRegionError("chern_lattice: " + std::to_string(nsing) +
                                  " singular cells on the frame grid (gap closing on a node)",
                                  nsing, nx * ny);
    double total = 0.0;
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            const int ip = (i + 1) % nx, jp = (j + 1) % ny;
            const cplx ux = link_between(frames.at(i, j).vectors, frames.at(ip, j).vectors);
            const cplx uy = link_between(frames.at(ip, j).vectors, frames.at(ip, jp).vectors);
            const cplx ux_up = link_between(frames.at(i, jp).vectors, frames.at(ip, jp).vectors);
            const cplx uy_left = link_between(frames.at(i, j).vectors, frames.at(i, jp).vectors);
            const double phase = std::arg(ux * uy * std::conj(ux_up) * std::conj(uy_left));
            if (std::abs(phase) >= kPi * (1.0 - 1e-9))
                throw Error("chern_lattice: plaquette phase at the principal-branch boundary "
                            "(|phase| = " + std::to_string(std::abs(phase)) +
                            "); refine the grid");
            total += phase;
        }
    }
    // Orientation pinned to dkx ^ dky with the lower band: the counter-
    // clockwise plaquette Berry phase is minus the Arg of the link product.
    const double value = -total / kTwoPi;
    ChernResult r;
    r.method = "lattice";
    r.rounded = std::lround(value);
    r.integer_deviation = std::abs(value - static_cast<double>(r.rounded));
    if (r.integer_deviation > 1e-6)
        throw Error("chern_lattice: plaquette sum not an integer (deviation " +
                    std::to_string(r.integer_deviation) + ")");
    r.value = static_cast<double>(r.rounded);
    r.nx = nx;
    r.ny = ny;
    r.singular_cells = 0;
    return r;
}

ChernResult chern_direct(const QGTField& field) {
    const GridSpec& spec = field.field.spec;
    const int ncells = spec.nx * spec.ny;
    if (field.singular_cells * 10 >= ncells)
        throw CriticalRegionError("chern_direct: singular fraction >= 10%",
                                  field.singular_cells, ncells);
    cplx total = 0.0;
    for (int c = 0; c < ncells; ++c) {
        if (field.field.singular[c]) continue;
        total += trace(field.field.values[c].curvature(0, 1));
    }
    total *= spec.cell_area();
    if (std::abs(total.imag()) > 1e-10)
        throw Error("chern_direct: curvature trace has imaginary residue " +
                    std::to_string(total.imag()));
    ChernResult r;
    r.method = "direct";
    r.value = total.real() / kTwoPi;
    r.rounded = std::lround(r.value);
    r.integer_deviation = std::abs(r.value - static_cast<double>(r.rounded));
    r.nx = spec.nx;
    r.ny = spec.ny;
    r.singular_cells = field.singular_cells;
    return r;
}

Holonomy wilson_loop(const HamiltonianFamily& family, const std::vector<ParameterPoint>& path,
                     const Subspace& sub) {
    if (path.size() < 3) throw DimensionError("wilson_loop: need at least 3 path points");
    const Frame start = eigenframe(family, path.front(), sub);
    CMatrix current = start.vectors;
    for (size_t i = 1; i < path.size(); ++i)
        current = transport_step(family, current, path[i], sub);
    if (!same_point(path.front(), path.back()))
        current = transport_step(family, current, path.front(), sub);
    Holonomy h;
    h.unitary = matmul(adjoint(start.vectors), current);
    h.path = path;
    h.closed = true;
    return h;
}

double small_loop_check(const HamiltonianFamily& family, const ParameterPoint& center,
                        const Subspace& sub, double sigma, const Direction& mu,
                        const Direction& nu, double h, int segments_per_side) {
    if (sigma <= 0.0) throw DimensionError("small_loop_check: loop area must be positive");
    const double side = std::sqrt(sigma);

    const QGTensor qt = qgt_point(family, center, sub, h, {mu, nu});
    const CMatrix f = qt.curvature(0, 1);

    // square corners around the center, counter-clockwise in the (mu, nu) plane
    auto corner = [&](double smu, double snu) {
        return displaced(displaced(center, mu, smu * side / 2.0), nu, snu * side / 2.0);
    };
    const ParameterPoint corners[4] = {corner(-1, -1), corner(+1, -1), corner(+1, +1), corner(-1, +1)};

    // Base the holonomy at the center: lead-in and lead-out legs enclose no
    // area, but keep the result in the same gauge as f.
    std::vector<ParameterPoint> path;
    path.push_back(center);
    for (int edge = 0; edge < 4; ++edge) {
        const ParameterPoint& a = corners[edge];
        const ParameterPoint& b = corners[(edge + 1) % 4];
        for (int s = 0; s < segments_per_side; ++s) {
            const double t = static_cast<double>(s) / segments_per_side;
            ParameterPoint q = a;
            for (size_t d = 0; d < q.k.size(); ++d) {
                double delta = b.k[d] - a.k[d];
                if (delta > kPi) delta -= kTwoPi;      // shortest arc across the seam
                if (delta < -kPi) delta += kTwoPi;
                q.k[d] = wrap_2pi(a.k[d] + t * delta);
            }
            for (size_t d = 0; d < q.external.size(); ++d)
                q.external[d] = a.external[d] + t * (b.external[d] - a.external[d]);
            path.push_back(q);
        }
    }
    path.push_back(corners[0]);
    path.push_back(center);

    const Holonomy w = wilson_loop(family, path, sub);
    CMatrix resid = w.unitary - CMatrix::identity(w.unitary.rows());
    resid *= cplx(1.0 / sigma, 0.0);
    resid -= cplx(0.0, 1.0) * f;
    return fro_norm(resid);
}

} // namespace qgt
