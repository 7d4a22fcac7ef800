#ifndef QGT_MEASURE_HPP
#define QGT_MEASURE_HPP

#include <string>
#include <vector>

#include "qgt/grid.hpp"
#include "qgt/qgt.hpp"
#include "qgt/topology.hpp"

namespace qgt {

// One scalar observable swept over an external parameter. Undefined entries
// (transitions, per-point failures) hold NaN and a note.
struct SweepResult {
    std::string kind;                 // "integrated_metric" | "chern_lattice" | "chern_direct" | ...
    std::vector<double> parameter;    // strictly increasing
    std::vector<double> observable;   // NaN where undefined
    std::vector<int> singular_cells;
    std::vector<std::string> notes;   // empty string where defined
    GridSpec grid;
    double step = 0.0;
};

struct CriticalPointEstimate {
    double location = 0.0;
    double peak_value = 0.0; // for plateau change points: the jump magnitude
    double resolution = 0.0; // sweep step
};

struct SweepSpec {
    double start = 0.0;
    double stop = 0.0;
    double step = 0.0;

    std::vector<double> values() const;
};

// Metric contracted along a unit direction u spanning (k..., external...):
// chi = sum_{mu,nu} u^mu u^nu Tr g_munu >= 0.
double fidelity_susceptibility(const HamiltonianFamily& family, const ParameterPoint& p,
                               const std::vector<double>& direction, const Subspace& sub,
                               double h = kDefaultFdStep);

// Per sweep value of m: sum over non-singular cells of (Tr g_xx + Tr g_yy)
// times the cell area.
SweepResult integrated_metric_sweep(const HamiltonianFamily& family, const SweepSpec& sweep,
                                    const GridSpec& grid, const Subspace& sub,
                                    double h = kDefaultFdStep, int workers = 1);

enum class ChernMethod { lattice, direct };

// Minimum boundary gap of the tracked subspace over the node-sampled grid.
// The gap closings of the lattice models sit at high-symmetry points, which
// node grids contain, so this detects exact transitions.
double min_gap_on_grid(const HamiltonianFamily& family, const GridSpec& grid,
                       const std::vector<double>& external, const Subspace& sub);

// Chern number per sweep value. Exact transition points (gap closing on the
// node grid) are flagged undefined.
SweepResult chern_sweep(const HamiltonianFamily& family, const SweepSpec& sweep,
                        const GridSpec& grid, const Subspace& sub, ChernMethod method,
                        double h = kDefaultFdStep, int workers = 1);

// Strict local maxima with topographic prominence >= 0.05 * IQR, refined by
// 3-point parabolic interpolation when the fitted vertex stays within a
// quarter step of the argmax. Integer (Chern) sweeps report plateau change
// points instead.
std::vector<CriticalPointEstimate> detect_critical_points(const SweepResult& sweep);

} // namespace qgt

#endif
