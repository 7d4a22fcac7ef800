#ifndef QGT_QGT_HPP
#define QGT_QGT_HPP

#include <string>
#include <vector>

#include "qgt/cmatrix.hpp"
#include "qgt/grid.hpp"
#include "qgt/linalg.hpp"
#include "qgt/models.hpp"
#include "qgt/point.hpp"

namespace qgt {

inline constexpr double kDefaultFdStep = 1e-4;

// A contiguous band range [first, first + count) tracked through the
// spectrum. gap_tol classifies gap closings (singular points) and, for
// count > 1, bounds the admissible within-subspace spread.
struct Subspace {
    int first = 0;
    int count = 1;
    double gap_tol = kDefaultGapTol;
};

// Column-orthonormal eigenvectors of the tracked subspace at a point.
struct Frame {
    CMatrix vectors; // N x n
    ParameterPoint point;
};

// The quantum geometric tensor at a point: for each ordered direction pair
// (mu, nu) an n x n block Q_munu, with the metric g = (Q + Q^dag)/2 and
// curvature F = i (Q - Q^dag) derived per pair.
class QGTensor {
public:
    QGTensor() = default;
    QGTensor(int n, std::vector<Direction> directions);

    int n() const { return n_; }
    int dims() const { return static_cast<int>(directions_.size()); }
    const std::vector<Direction>& directions() const { return directions_; }

    const CMatrix& q(int mu, int nu) const { return q_[static_cast<size_t>(mu) * dims() + nu]; }
    CMatrix& q(int mu, int nu) { return q_[static_cast<size_t>(mu) * dims() + nu]; }

    CMatrix metric(int mu, int nu) const;    // (Q_munu + Q_munu^dag) / 2
    CMatrix curvature(int mu, int nu) const; // i (Q_munu - Q_munu^dag)
    double tr_metric(int mu, int nu) const;
    double tr_curvature(int mu, int nu) const;

private:
    int n_ = 0;
    std::vector<Direction> directions_;
    std::vector<CMatrix> q_;
};

// Eigendecompose at p and take the subspace columns. Throws
// SingularPointError when a boundary gap (or the within-subspace spread,
// for declared-degenerate subspaces) violates gap_tol.
Frame eigenframe(const HamiltonianFamily& family, const ParameterPoint& p, const Subspace& sub);

// P = V V^dag.
CMatrix projector(const Frame& frame);

// Eigenframe at p gauged by the unitary polar factor of the overlap with
// `reference` (parallel-transport gauge: the overlap of the result with the
// reference is positive definite Hermitian).
Frame aligned_frame(const HamiltonianFamily& family, const ParameterPoint& p,
                    const Frame& reference, const Subspace& sub);

// Central difference of the aligned frame along `dir`, both stencil frames
// gauged against the frame at p.
CMatrix frame_derivative(const HamiltonianFamily& family, const ParameterPoint& p,
                         const Direction& dir, double h, const Subspace& sub);

std::vector<Direction> periodic_directions(const HamiltonianFamily& family);
std::vector<Direction> all_directions(const HamiltonianFamily& family);

// Projector-based finite-difference QGT at a point, over the given
// directions (default: the periodic pair).
QGTensor qgt_point(const HamiltonianFamily& family, const ParameterPoint& p,
                   const Subspace& sub, double h = kDefaultFdStep,
                   std::vector<Direction> directions = {});

// Closed-form two-band QGT (lower band) from a d-vector and its gradient
// grad_d[mu][alpha] = d d_alpha / d lambda^mu (2 x 3). Throws
// SingularPointError at gap closings and ChartPoleError where the (theta,
// phi) chart degenerates.
QGTensor qgt_analytic_twoband(const DVector& d, const double grad_d[2][3],
                              double tau_gap = kDefaultGapTol);

// Closed-form QGT of any two-band family exposing a d-vector field.
// Throws when the family has none.
QGTensor qgt_analytic_point(const HamiltonianFamily& family, const ParameterPoint& p,
                            double tau_gap = kDefaultGapTol);

// Convenience: analytic QGT of the QWZ model at a point.
QGTensor qwz_analytic_qgt(const ParameterPoint& p, double tau_gap = kDefaultGapTol);

struct QGTField {
    FieldGrid<QGTensor> field;
    int singular_cells = 0;
    std::vector<std::string> warnings;
};

// QGT per grid cell, with the external parameters held fixed; cells whose
// finite-difference stencil hits a gap closing are flagged singular and
// excluded. Deterministic for any worker count.
QGTField qgt_grid(const HamiltonianFamily& family, const GridSpec& spec,
                  const std::vector<double>& external, const Subspace& sub,
                  double h = kDefaultFdStep, int workers = 1);

} // namespace qgt

#endif
