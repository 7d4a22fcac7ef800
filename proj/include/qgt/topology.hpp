#ifndef QGT_TOPOLOGY_HPP
#define QGT_TOPOLOGY_HPP

#include <string>
#include <vector>

#include "qgt/cmatrix.hpp"
#include "qgt/grid.hpp"
#include "qgt/qgt.hpp"

namespace qgt {

// Net unitary acquired by path-ordered parallel transport.
struct Holonomy {
    CMatrix unitary; // n x n
    std::vector<ParameterPoint> path;
    bool closed = false;
};

struct ChernResult {
    std::string method;       // "lattice" or "direct"
    double value = 0.0;       // lattice: the exact integer; direct: the raw integral
    long rounded = 0;
    double integer_deviation = 0.0; // |value - rounded|, quality metric
    int nx = 0, ny = 0;
    int singular_cells = 0;
};

// Unimodular link det(a^dag b)/|det(a^dag b)| between same-size frames.
cplx link_variable(const Frame& frame_a, const Frame& frame_b);

// Raw eigenframes on a node-sampled periodic grid (the lattice gauge-theory
// discretization); cells at gap closings are flagged singular.
FieldGrid<Frame> frames_grid(const HamiltonianFamily& family, int nx, int ny,
                             const std::vector<double>& external, const Subspace& sub,
                             int workers = 1);

// Gauge-invariant lattice Chern number from plaquette link products.
// Integer-valued by construction; orientation pinned so the QWZ lower band
// gives +1 for -2 < m < 0. Throws if any cell is singular, any link
// vanishes, or a plaquette phase reaches the principal-branch boundary.
ChernResult chern_lattice(const FieldGrid<Frame>& frames);

// Direct curvature integration (1/2pi) sum Tr F_xy dkx dky over
// non-singular cells. Throws CriticalRegionError when >= 10% of cells are
// singular.
ChernResult chern_direct(const QGTField& field);

// Path-ordered transport around `path` (closed back to the first point when
// the endpoints differ); the holonomy is expressed in the gauge of the
// frame at the first point.
Holonomy wilson_loop(const HamiltonianFamily& family, const std::vector<ParameterPoint>& path,
                     const Subspace& sub);

// || (W - I)/sigma - i F_munu(center) ||_F for a square loop of area sigma
// around `center` in the (mu, nu) plane. The loop is based at the center
// (lead-in/lead-out transport legs) so the comparison is made in the gauge
// the curvature is expressed in.
double small_loop_check(const HamiltonianFamily& family, const ParameterPoint& center,
                        const Subspace& sub, double sigma, const Direction& mu,
                        const Direction& nu, double h = kDefaultFdStep,
                        int segments_per_side = 1);

} // namespace qgt

#endif
