#ifndef QGT_VALIDATE_HPP
#define QGT_VALIDATE_HPP

#include <string>
#include <vector>

namespace qgt {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

// The built-in invariant suite behind `qgt validate`: Hermiticity of Q
// across index swap, metric positive semidefiniteness, curvature
// antisymmetry, projector idempotency, Wilson-loop unitarity, gauge
// covariance on the degenerate model, analytic/numeric agreement, the
// two-band phase-diagram spot checks, and determinism under parallelism.
std::vector<CheckResult> run_validation_suite();

bool all_passed(const std::vector<CheckResult>& results);

} // namespace qgt

#endif
