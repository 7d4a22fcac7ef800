#ifndef QGT_POINT_HPP
#define QGT_POINT_HPP

#include <cmath>
#include <numbers>
#include <vector>

namespace qgt {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Reduce a periodic coordinate into [0, 2*pi).
inline double wrap_2pi(double x) {
    double y = x - kTwoPi * std::floor(x / kTwoPi);
    if (y >= kTwoPi) y -= kTwoPi; // floor rounding at the seam
    return y;
}

// A position on the parameter manifold: periodic momentum coordinates plus
// external scalar parameters (e.g. the mass m). Periodic coordinates are
// reduced mod 2*pi on construction.
struct ParameterPoint {
    ParameterPoint() = default;
    ParameterPoint(std::vector<double> k_in, std::vector<double> external_in)
        : k(std::move(k_in)), external(std::move(external_in)) {
        for (double& v : k) v = wrap_2pi(v);
    }

    std::vector<double> k;
    std::vector<double> external;
};

// A differentiation / displacement direction in parameter space.
struct Direction {
    enum class Kind { periodic, external };
    Kind kind = Kind::periodic;
    int index = 0;

    static Direction periodic(int i) { return {Kind::periodic, i}; }
    static Direction external(int i) { return {Kind::external, i}; }
};

inline ParameterPoint displaced(const ParameterPoint& p, const Direction& dir, double amount) {
    ParameterPoint q = p;
    if (dir.kind == Direction::Kind::periodic)
        q.k[dir.index] = wrap_2pi(q.k[dir.index] + amount);
    else
        q.external[dir.index] += amount;
    return q;
}

// Displace along a unit vector spanning (k..., external...).
inline ParameterPoint displaced(const ParameterPoint& p, const std::vector<double>& u, double amount) {
    ParameterPoint q = p;
    for (size_t i = 0; i < q.k.size(); ++i) q.k[i] = wrap_2pi(q.k[i] + amount * u[i]);
    for (size_t i = 0; i < q.external.size(); ++i) q.external[i] += amount * u[q.k.size() + i];
    return q;
}

} // namespace qgt

#endif
