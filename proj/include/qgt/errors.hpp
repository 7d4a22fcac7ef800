#ifndef QGT_ERRORS_HPP
#define QGT_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace qgt {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& msg) : Error(msg) {}
};

class NonHermitianError : public Error {
public:
    NonHermitianError(const std::string& msg, double residual)
        : Error(msg), residual(residual) {}
    double residual;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& msg, double residual)
        : Error(msg), residual(residual) {}
    double residual;
};

// Matrix singular or nearly so; carries the offending smallest singular value.
class SingularMatrixError : public Error {
public:
    SingularMatrixError(const std::string& msg, double smallest_singular_value)
        : Error(msg), smallest_singular_value(smallest_singular_value) {}
    double smallest_singular_value;
};

// Gap closing at or near a parameter point; carries the point and the gap.
class SingularPointError : public Error {
public:
    SingularPointError(const std::string& msg, std::vector<double> coords, double gap)
        : Error(msg), coords(std::move(coords)), gap(gap) {}
    std::vector<double> coords;
    double gap;
};

// The analytic two-band chart is invalid here (d1 = d2 = 0); use the projector path.
class ChartPoleError : public Error {
public:
    explicit ChartPoleError(const std::string& msg) : Error(msg) {}
};

// Too many singular cells: the model is likely at criticality.
class CriticalRegionError : public Error {
public:
    CriticalRegionError(const std::string& msg, int singular_cells, int total_cells)
        : Error(msg), singular_cells(singular_cells), total_cells(total_cells) {}
    int singular_cells;
    int total_cells;
};

// Bad user input at the CLI/config surface.
class UsageError : public Error {
public:
    explicit UsageError(const std::string& msg) : Error(msg) {}
};

} // namespace qgt

#endif
