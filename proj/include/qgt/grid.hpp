#ifndef QGT_GRID_HPP
#define QGT_GRID_HPP

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

#include "qgt/point.hpp"

namespace qgt {

// Sampling offset of a uniform periodic grid over the momentum torus.
// Cell-center sampling never hits the high-symmetry gap closings and is the
// default for field evaluation; node sampling (k = 2*pi*i/N) is what the
// lattice link-variable construction uses.
enum class GridOffset { center, node };

struct GridSpec {
    int nx = 32;
    int ny = 32;
    GridOffset offset = GridOffset::center;

    double dx() const { return kTwoPi / nx; }
    double dy() const { return kTwoPi / ny; }
    double cell_area() const { return dx() * dy(); }
    double kx(int i) const { return (i + (offset == GridOffset::center ? 0.5 : 0.0)) * dx(); }
    double ky(int j) const { return (j + (offset == GridOffset::center ? 0.5 : 0.0)) * dy(); }
};

// Values sampled on a uniform periodic grid, with per-cell singular flags.
// Flagged cells hold a default-constructed payload and are excluded from
// reductions.
template <typename T>
struct FieldGrid {
    GridSpec spec;
    std::vector<T> values;            // size nx*ny, row-major in (i, j)
    std::vector<std::uint8_t> singular;

    FieldGrid() = default;
    explicit FieldGrid(const GridSpec& s)
        : spec(s), values(static_cast<size_t>(s.nx) * s.ny),
          singular(static_cast<size_t>(s.nx) * s.ny, 0) {}

    size_t index(int i, int j) const { return static_cast<size_t>(i) * spec.ny + j; }
    T& at(int i, int j) { return values[index(i, j)]; }
    const T& at(int i, int j) const { return values[index(i, j)]; }
    bool is_singular(int i, int j) const { return singular[index(i, j)] != 0; }
    void mark_singular(int i, int j) { singular[index(i, j)] = 1; }

    int singular_count() const {
        int n = 0;
        for (std::uint8_t f : singular) n += (f != 0);
        return n;
    }
};

// Run fn(i) for i in [0, n) on `workers` threads over contiguous chunks.
// Each index writes only its own slot, so results do not depend on the
// worker count.
inline void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
    if (workers <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    const int nthreads = std::min(workers, n);
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    const int chunk = (n + nthreads - 1) / nthreads;
    for (int t = 0; t < nthreads; ++t) {
        const int lo = t * chunk;
        const int hi = std::min(n, lo + chunk);
        pool.emplace_back([lo, hi, &fn] {
            for (int i = lo; i < hi; ++i) fn(i);
        });
    }
    for (std::thread& th : pool) th.join();
}

} // namespace qgt

#endif
