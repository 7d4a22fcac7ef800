#include "qgt/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qgt/errors.hpp"

namespace qgt {

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

double quantile(std::vector<double> v, double q) {
    if (v.empty()) return kNaN;
    std::sort(v.begin(), v.end());
    const double pos = q * (v.size() - 1);
    const size_t lo = static_cast<size_t>(pos);
    const size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - lo) * (v[hi] - v[lo]);
}

} // namespace

double min_gap_on_grid(const HamiltonianFamily& family, const GridSpec& grid,
                       const std::vector<double>& external, const Subspace& sub) {
    GridSpec nodes = grid;
    nodes.offset = GridOffset::node;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < nodes.nx; ++i)
        for (int j = 0; j < nodes.ny; ++j) {
            const HermEig e =
                eig_hermitian(family.evaluate(ParameterPoint({nodes.kx(i), nodes.ky(j)}, external)));
            const int b = sub.first + sub.count;
            if (b < family.dim) best = std::min(best, e.values[b] - e.values[b - 1]);
            if (sub.first > 0)
                best = std::min(best, e.values[sub.first] - e.values[sub.first - 1]);
        }
    return best;
}

std::vector<double> SweepSpec::values() const {
    if (step <= 0.0) throw UsageError("sweep: step must be positive");
    if (stop < start) throw UsageError("sweep: stop must be >= start");
    std::vector<double> out;
    const int n = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (int i = 0; i < n; ++i) out.push_back(start + i * step);
    return out;
}

double fidelity_susceptibility(const HamiltonianFamily& family, const ParameterPoint& p,
                               const std::vector<double>& direction, const Subspace& sub,
                               double h) {
    const size_t want = static_cast<size_t>(family.n_periodic + family.n_external);
    if (direction.size() != want)
        throw DimensionError("fidelity_susceptibility: direction must have " +
                             std::to_string(want) + " components");
    double norm2 = 0.0;
    for (double u : direction) norm2 += u * u;
    if (std::abs(std::sqrt(norm2) - 1.0) > 1e-8)
        throw DimensionError("fidelity_susceptibility: direction must be a unit vector");

    const QGTensor q = qgt_point(family, p, sub, h, all_directions(family));
    const int D = q.dims();
    double chi = 0.0;
    for (int mu = 0; mu < D; ++mu)
        for (int nu = 0; nu < D; ++nu)
            chi += direction[mu] * direction[nu] * q.tr_metric(mu, nu);
    return chi;
}

SweepResult integrated_metric_sweep(const HamiltonianFamily& family, const SweepSpec& sweep,
                                    const GridSpec& grid, const Subspace& sub,
                                    double h, int workers) {
    SweepResult out;
    out.kind = "integrated_metric";
    out.grid = grid;
    out.step = sweep.step;
    out.parameter = sweep.values();
    const size_t n = out.parameter.size();
    out.observable.assign(n, kNaN);
    out.singular_cells.assign(n, 0);
    out.notes.assign(n, "");
    for (size_t i = 0; i < n; ++i) {
        try {
            const QGTField f = qgt_grid(family, grid, {out.parameter[i]}, sub, h, workers);
            double total = 0.0;
            for (int c = 0; c < grid.nx * grid.ny; ++c) {
                if (f.field.singular[c]) continue;
                total += f.field.values[c].tr_metric(0, 0) + f.field.values[c].tr_metric(1, 1);
            }
            out.observable[i] = total * grid.cell_area();
            out.singular_cells[i] = f.singular_cells;
        } catch (const Error& e) {
            out.notes[i] = e.what();
        }
    }
    return out;
}

SweepResult chern_sweep(const HamiltonianFamily& family, const SweepSpec& sweep,
                        const GridSpec& grid, const Subspace& sub, ChernMethod method,
                        double h, int workers) {
    SweepResult out;
    out.kind = (method == ChernMethod::lattice) ? "chern_lattice" : "chern_direct";
    out.grid = grid;
    out.step = sweep.step;
    out.parameter = sweep.values();
    const size_t n = out.parameter.size();
    out.observable.assign(n, kNaN);
    out.singular_cells.assign(n, 0);
    out.notes.assign(n, "");
    for (size_t i = 0; i < n; ++i) {
        const std::vector<double> ext{out.parameter[i]};
        try {
            if (min_gap_on_grid(family, grid, ext, sub) < sub.gap_tol) {
                out.notes[i] = "transition point: gap closes on the grid; Chern undefined";
                continue;
            }
            if (method == ChernMethod::lattice) {
                const ChernResult r =
                    chern_lattice(frames_grid(family, grid.nx, grid.ny, ext, sub, workers));
                out.observable[i] = r.value;
            } else {
                const ChernResult r = chern_direct(qgt_grid(family, grid, ext, sub, h, workers));
                out.observable[i] = r.value;
                out.singular_cells[i] = r.singular_cells;
            }
        } catch (const Error& e) {
            out.notes[i] = e.what();
        }
    }
    return out;
}

std::vector<CriticalPointEstimate> detect_critical_points(const SweepResult& sweep) {
    std::vector<CriticalPointEstimate> out;
    const std::vector<double>& m = sweep.parameter;
    const std::vector<double>& v = sweep.observable;
    if (m.size() < 5) return out;

    const bool integer_sweep = sweep.kind.rfind("chern", 0) == 0;
    if (integer_sweep) {
        // plateau change points between consecutive defined values (undefined
        // transition entries sit between plateaus and are skipped over)
        std::vector<size_t> defined;
        for (size_t i = 0; i < m.size(); ++i)
            if (!std::isnan(v[i])) defined.push_back(i);
        for (size_t t = 0; t + 1 < defined.size(); ++t) {
            const size_t i = defined[t], j = defined[t + 1];
            const long a = std::lround(v[i]), b = std::lround(v[j]);
            if (a != b)
                out.push_back({0.5 * (m[i] + m[j]), static_cast<double>(std::labs(b - a)),
                               sweep.step});
        }
        return out;
    }

    std::vector<double> finite;
    for (double x : v)
        if (!std::isnan(x)) finite.push_back(x);
    if (finite.size() < 5) return out;
    const double iqr = quantile(finite, 0.75) - quantile(finite, 0.25);
    const double prominence_floor = std::max(1e-12, 0.05 * iqr);

    const size_t n = m.size();
    for (size_t i = 1; i + 1 < n; ++i) {
        if (std::isnan(v[i - 1]) || std::isnan(v[i]) || std::isnan(v[i + 1])) continue;
        if (!(v[i] > v[i - 1] && v[i] >= v[i + 1])) continue;

        // topographic prominence: drop to the key saddle toward higher terrain
        double left_min = v[i], right_min = v[i];
        bool left_higher = false, right_higher = false;
        for (size_t j = i; j-- > 0;) {
            if (std::isnan(v[j])) break;
            if (v[j] > v[i]) { left_higher = true; break; }
            left_min = std::min(left_min, v[j]);
        }
        for (size_t j = i + 1; j < n; ++j) {
            if (std::isnan(v[j])) break;
            if (v[j] > v[i]) { right_higher = true; break; }
            right_min = std::min(right_min, v[j]);
        }
        double prominence;
        if (left_higher && right_higher)
            prominence = v[i] - std::max(left_min, right_min);
        else if (left_higher)
            prominence = v[i] - left_min;
        else if (right_higher)
            prominence = v[i] - right_min;
        else
            prominence = v[i] - std::min(left_min, right_min); // global maximum
        if (prominence < prominence_floor) continue;

        // sub-step parabolic refinement, gated on near-symmetric peaks
        double loc = m[i];
        const double denom = v[i - 1] - 2.0 * v[i] + v[i + 1];
        if (denom < 0.0) {
            const double dx = 0.5 * (v[i - 1] - v[i + 1]) / denom;
            if (std::abs(dx) <= 0.25) loc += dx * sweep.step;
        }
        out.push_back({loc, v[i], sweep.step});
    }
    return out;
}

} // namespace qgt
