#include <cmath>
#include <random>

#include "doctest.h"
#include "qgt/errors.hpp"
#include "qgt/models.hpp"
#include "qgt/topology.hpp"

using namespace qgt;

namespace {

const Subspace kLower{0, 1};
const Subspace kLowerPair{0, 2};

CMatrix random_unitary(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    CMatrix m(n, n);
    for (cplx& v : m.entries()) v = cplx(gauss(rng), gauss(rng));
    return unitary_align(m);
}

} // namespace

TEST_CASE("link_variable basics") {
    const HamiltonianFamily f = qwz_family();
    const Frame a = eigenframe(f, ParameterPoint({1.0, 0.5}, {1.0}), kLower);
    CHECK(std::abs(link_variable(a, a) - cplx(1.0, 0.0)) < 1e-14);

    // pure gauge: frame rotated by a unitary gives det W / |det W|
    std::mt19937_64 rng(5);
    const HamiltonianFamily dbl = doubled_qwz_family();
    const Frame fa = eigenframe(dbl, ParameterPoint({1.0, 0.5}, {1.0}), kLowerPair);
    const CMatrix w = random_unitary(2, rng);
    const Frame fb{matmul(fa.vectors, w), fa.point};
    const cplx dw = det(w);
    CHECK(std::abs(link_variable(fa, fb) - dw / std::abs(dw)) < 1e-12);

    // |link| = 1 for generic nearby frames
    const Frame c = eigenframe(f, ParameterPoint({1.1, 0.5}, {1.0}), kLower);
    CHECK(std::abs(std::abs(link_variable(a, c)) - 1.0) < 1e-14);

    // orthogonal frames have vanishing overlap
    Frame e1{CMatrix(2, 1, {1.0, 0.0}), ParameterPoint({0, 0}, {})};
    Frame e2{CMatrix(2, 1, {0.0, 1.0}), ParameterPoint({0, 0}, {})};
    CHECK_THROWS_AS(link_variable(e1, e2), SingularMatrixError);
}

TEST_CASE("lattice Chern reproduces the two-band phase diagram") {
    const HamiltonianFamily f = qwz_family();
    const double ms[4] = {-1.0, 1.0, 3.0, -3.0};
    const long expected[4] = {1, -1, 0, 0};
    for (int t = 0; t < 4; ++t) {
        const ChernResult r = chern_lattice(frames_grid(f, 24, 24, {ms[t]}, kLower));
        CHECK(r.rounded == expected[t]);
        CHECK(r.value == static_cast<double>(expected[t]));
        CHECK(r.integer_deviation < 1e-9);
    }
}

TEST_CASE("lattice Chern is gauge invariant, bit for bit") {
    const HamiltonianFamily f = qwz_family();
    FieldGrid<Frame> frames = frames_grid(f, 12, 12, {1.0}, kLower);
    const ChernResult base = chern_lattice(frames);

    std::mt19937_64 rng(9);
    for (Frame& fr : frames.values) {
        const CMatrix w = random_unitary(1, rng);
        fr.vectors = matmul(fr.vectors, w);
    }
    const ChernResult rotated = chern_lattice(frames);
    CHECK(base.rounded == rotated.rounded);
    CHECK(base.value == rotated.value);
}

TEST_CASE("lattice Chern fails cleanly at a transition") {
    const HamiltonianFamily f = qwz_family();
    // m = 2: gap closes at (pi, pi), a node of any even grid
    CHECK_THROWS_AS(chern_lattice(frames_grid(f, 12, 12, {2.0}, kLower)), CriticalRegionError);
}

TEST_CASE("direct Chern integrates the curvature") {
    const HamiltonianFamily f = qwz_family();
    const GridSpec spec{32, 32, GridOffset::center};
    const ChernResult r1 = chern_direct(qgt_grid(f, spec, {1.0}, kLower));
    CHECK(r1.value == doctest::Approx(-1.0).epsilon(0.02));
    const ChernResult r0 = chern_direct(qgt_grid(f, spec, {3.0}, kLower));
    CHECK(std::abs(r0.value) < 0.02);

    const ChernResult flat = chern_direct(qgt_grid(constant_family(pauli(3)), GridSpec{8, 8}, {}, kLower));
    CHECK(flat.value == doctest::Approx(0.0));
}

TEST_CASE("method agreement between lattice and direct Chern") {
    const HamiltonianFamily f = qwz_family();
    for (double m : {-1.0, 1.0, 3.0}) {
        const ChernResult lat = chern_lattice(frames_grid(f, 24, 24, {m}, kLower));
        const ChernResult dir = chern_direct(qgt_grid(f, GridSpec{64, 64, GridOffset::center},
                                                      {m}, kLower));
        CHECK(std::abs(lat.value - dir.value) < 0.05);
    }
}

TEST_CASE("doubled-model lattice Chern doubles the Abelian value") {
    const HamiltonianFamily dbl = doubled_qwz_family();
    const double ms[3] = {-1.0, 1.0, 3.0};
    const long expected[3] = {2, -2, 0};
    for (int t = 0; t < 3; ++t) {
        const ChernResult r = chern_lattice(frames_grid(dbl, 24, 24, {ms[t]}, kLowerPair));
        CHECK(r.rounded == expected[t]);
    }
}

TEST_CASE("wilson loop degenerate paths") {
    const HamiltonianFamily f = qwz_family();
    const ParameterPoint a({1.0, 0.5}, {1.0});
    const ParameterPoint b({1.3, 0.7}, {1.0});

    const Holonomy same = wilson_loop(f, {a, a, a}, kLower);
    CHECK(fro_norm(same.unitary - CMatrix::identity(1)) < 1e-12);

    // backtracking: transport is reversible
    const Holonomy back = wilson_loop(f, {a, b, a}, kLower);
    CHECK(fro_norm(back.unitary - CMatrix::identity(1)) < 1e-10);

    CHECK_THROWS_AS(wilson_loop(f, {a, b}, kLower), DimensionError);
}

TEST_CASE("wilson loop stays unitary over ten thousand segments") {
    const HamiltonianFamily f = qwz_family();
    std::vector<ParameterPoint> path;
    const int segs = 10000;
    for (int s = 0; s < segs; ++s) {
        const double t = kTwoPi * s / segs;
        // wind around both cycles of the torus
        path.push_back(ParameterPoint({3.0 * t, t}, {1.0}));
    }
    const Holonomy w = wilson_loop(f, path, kLower);
    CHECK(fro_norm(matmul(adjoint(w.unitary), w.unitary) - CMatrix::identity(1)) < 1e-8);
}

TEST_CASE("wilson loop unitarity and orientation reversal") {
    const HamiltonianFamily f = qwz_family();
    std::vector<ParameterPoint> path, reversed;
    const int segs = 48;
    for (int s = 0; s < segs; ++s) {
        const double t = kTwoPi * s / segs;
        path.push_back(ParameterPoint({2.0 + 0.8 * std::cos(t), 2.5 + 0.8 * std::sin(t)}, {1.0}));
    }
    reversed = path;
    std::reverse(reversed.begin() + 1, reversed.end()); // same start point, opposite orientation

    const Holonomy w = wilson_loop(f, path, kLower);
    CHECK(fro_norm(matmul(adjoint(w.unitary), w.unitary) - CMatrix::identity(1)) < 1e-8);
    const Holonomy wr = wilson_loop(f, reversed, kLower);
    CHECK(fro_norm(wr.unitary - adjoint(w.unitary)) < 1e-8);
}

TEST_CASE("wilson loop phase matches the link-variable Berry phase") {
    // full kx circle at fixed ky: the 1D Berry phase from the link product
    const HamiltonianFamily f = qwz_family();
    const int segs = 64;
    const double ky = 0.9;
    std::vector<ParameterPoint> path;
    for (int s = 0; s < segs; ++s)
        path.push_back(ParameterPoint({kTwoPi * s / segs, ky}, {1.0}));

    cplx link_product(1.0, 0.0);
    for (int s = 0; s < segs; ++s) {
        const Frame fa = eigenframe(f, path[s], kLower);
        const Frame fb = eigenframe(f, path[(s + 1) % segs], kLower);
        link_product *= link_variable(fa, fb);
    }
    const double berry_phase = -std::arg(link_product);
    const Holonomy w = wilson_loop(f, path, kLower);
    CHECK(std::arg(w.unitary(0, 0)) == doctest::Approx(berry_phase).epsilon(1e-8));
}

TEST_CASE("small loop residual vanishes for the constant family") {
    const HamiltonianFamily cf = constant_family(pauli(3) + 0.2 * pauli(1));
    const double r = small_loop_check(cf, ParameterPoint({1.0, 2.0}, {}), kLower, 1e-4,
                                      Direction::periodic(0), Direction::periodic(1));
    CHECK(r < 1e-10);
}

TEST_CASE("small loop residual converges for QWZ") {
    const HamiltonianFamily f = qwz_family();
    const ParameterPoint center({1.0, 0.5}, {1.0});
    double prev = -1.0;
    for (double side : {1e-1, 1e-2, 1e-3}) {
        const double r = small_loop_check(f, center, kLower, side * side,
                                          Direction::periodic(0), Direction::periodic(1));
        if (prev > 0.0) CHECK(r < prev * 0.2);
        prev = r;
    }
}

TEST_CASE("halving the loop side quarters the leading term of W - I") {
    const HamiltonianFamily f = qwz_family();
    const ParameterPoint center({1.0, 0.5}, {1.0});
    double prev = -1.0;
    for (double side : {0.2, 0.1, 0.05}) {
        std::vector<ParameterPoint> square;
        const double s = side / 2;
        for (auto [du, dv] : {std::pair{-s, -s}, {s, -s}, {s, s}, {-s, s}})
            square.push_back(ParameterPoint({center.k[0] + du, center.k[1] + dv}, center.external));
        const Holonomy w = wilson_loop(f, square, kLower);
        const double mag = fro_norm(w.unitary - CMatrix::identity(1));
        if (prev > 0.0) CHECK(prev / mag == doctest::Approx(4.0).epsilon(0.05));
        prev = mag;
    }
}

TEST_CASE("non-Abelian small loop converges on the doubled model") {
    const HamiltonianFamily dbl = doubled_qwz_family();
    const ParameterPoint center({1.0, 0.5}, {1.0});
    double prev = -1.0;
    for (double side : {1e-1, 1e-2}) {
        const double r = small_loop_check(dbl, center, kLowerPair, side * side,
                                          Direction::periodic(0), Direction::periodic(1));
        if (prev > 0.0) CHECK(r < prev * 0.05);
        prev = r;
    }
}

TEST_CASE("small loop at a gap closing fails with a clean error") {
    const HamiltonianFamily f = qwz_family();
    CHECK_THROWS_AS(small_loop_check(f, ParameterPoint({M_PI, M_PI}, {2.0}), kLower, 1e-4,
                                     Direction::periodic(0), Direction::periodic(1)),
                    SingularPointError);
}

TEST_CASE("reversing the grid orientation flips the Chern sign") {
    // a sign flip in the curvature data is exactly what the phase-diagram
    // checks are sensitive to
    const HamiltonianFamily f = qwz_family();
    const FieldGrid<Frame> frames = frames_grid(f, 16, 16, {1.0}, kLower);
    FieldGrid<Frame> mirrored = frames;
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) mirrored.at(i, j) = frames.at(i, 15 - j);
    const ChernResult a = chern_lattice(frames);
    const ChernResult b = chern_lattice(mirrored);
    CHECK(a.rounded == -1);
    CHECK(b.rounded == +1);
}

TEST_CASE("wilson loop reports singular path points") {
    const HamiltonianFamily f = qwz_family();
    std::vector<ParameterPoint> path = {ParameterPoint({1.0, 1.0}, {2.0}),
                                        ParameterPoint({M_PI, M_PI}, {2.0}),
                                        ParameterPoint({1.0, 2.0}, {2.0})};
    CHECK_THROWS_AS(wilson_loop(f, path, kLower), SingularPointError);
}

TEST_CASE("chern_direct rejects a critical region") {
    // m = 0 on a coarse node grid: gap closings at (pi, 0) and (0, pi)
    // make more than 10% of the cells singular
    const HamiltonianFamily f = qwz_family();
    const QGTField field = qgt_grid(f, GridSpec{4, 4, GridOffset::node}, {0.0}, kLower);
    CHECK(field.singular_cells >= 2);
    CHECK_FALSE(field.warnings.empty());
    CHECK_THROWS_AS(chern_direct(field), CriticalRegionError);
}
