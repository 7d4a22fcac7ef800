#ifndef QGT_MODELS_HPP
#define QGT_MODELS_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "qgt/cmatrix.hpp"
#include "qgt/point.hpp"

namespace qgt {

inline constexpr double kDefaultGapTol = 1e-8;

// d-vector of a two-band Bloch Hamiltonian H = eps*I + sum_a d_a sigma^a.
struct DVector {
    double d1 = 0.0, d2 = 0.0, d3 = 0.0;
    double eps = 0.0;

    double norm() const;
};

// Bloch-sphere angles of a d-vector. phi is undefined at the chart poles
// (d1 = d2 = 0); phi_defined flags that case.
struct BlochAngles {
    double theta = 0.0;
    double phi = 0.0;
    bool phi_defined = true;
};

// d-vector and its momentum gradient, for two-band families that expose a
// closed form. grad[mu][alpha] = d d_alpha / d k_mu.
struct DVectorField {
    std::function<DVector(const ParameterPoint&)> d;
    std::function<void(const ParameterPoint&, double (&grad)[2][3])> grad_d;
};

// A smooth family of Hermitian Hamiltonians over the parameter manifold.
// Immutable after construction; evaluate is pure.
struct HamiltonianFamily {
    std::string name;
    int dim = 2;
    int n_periodic = 2;
    int n_external = 0;
    std::function<CMatrix(const ParameterPoint&)> evaluate_fn;
    // set for two-band d-vector families; enables the analytic QGT path
    std::shared_ptr<const DVectorField> dvector;

    CMatrix evaluate(const ParameterPoint& p) const;
};

// Two-band Chern-insulator model on the torus:
// d = (sin kx, sin ky, m + cos kx + cos ky), eps = 0; m is the external parameter.
DVector qwz_d_vector(const ParameterPoint& p);
HamiltonianFamily qwz_family();

CMatrix dvector_hamiltonian(const DVector& d);

// theta = arccos(d3/|d|), phi = atan2(d2, d1). Throws SingularPointError at
// gap closings (|d| <= tau_gap); flags phi undefined at the chart poles.
BlochAngles analytic_angles(const DVector& d, double tau_gap = kDefaultGapTol);

// The closed-form eigenvectors (psi_plus, psi_minus), each a 2x1 column.
struct TwoBandVectors {
    CMatrix psi_plus;
    CMatrix psi_minus;
};
TwoBandVectors analytic_eigenvectors(double theta, double phi);

// Four-band family V(k) [H_qwz + H_qwz] V(k)^dag with an exactly two-fold
// degenerate lower level everywhere. mix must be unitary at every sampled
// point (checked; rejected otherwise).
HamiltonianFamily doubled_qwz_family(
    std::function<CMatrix(const ParameterPoint&)> mix = nullptr);

// The default mix generator: V(k) = exp(i kx G), G = |v><v| with
// v = (1,1,1,-1)/2. G is Hermitian with off-block entries and integer
// spectrum {1,0,0,0}, so V is smooth and 2*pi periodic:
// V = I + (e^{i kx} - 1)|v><v|.
CMatrix default_doubled_mix(const ParameterPoint& p);

// Family with H independent of the parameters (for tests and the CLI).
HamiltonianFamily constant_family(const CMatrix& h0, int n_periodic = 2, int n_external = 0);

// Two-band family from a tabulated d-vector grid (CSV columns:
// kx_index, ky_index, d1, d2, d3, eps), trig-interpolated on the torus.
HamiltonianFamily tabulated_family_from_csv(const std::string& path);

// Spectral gap above the tracked subspace: values[n] - values[n-1].
double energy_gap(const HamiltonianFamily& family, const ParameterPoint& p, int subspace_size);

} // namespace qgt

#endif
