#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

namespace thzcov::specfun {

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct QuadratureSpec {
    double relative_tolerance = 1e-12;
    // Accepts a panel whose error estimate falls below this regardless of its magnitude.
    double absolute_tolerance = 0.0;
    unsigned max_subdivisions = 30;
    // Interior split points; must be sorted. Points outside [a, b] are ignored.
    std::vector<double> breakpoints;
};

// Principal branch W0. Throws DomainError for x < -1/e.
double lambert_w0(double x);

// Exponential integral Ei(x), principal value for x > 0. Throws DomainError at 0.
double expint_ei(double x);

// Adaptive Gauss-Kronrod on each breakpoint panel. b may be +infinity.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec = {});

// Closed forms that stay accurate as decay * (b - a) -> 0. b may be +infinity when decay > 0.
double exp_integral(double decay, double a, double b);   // \int_a^b e^{-decay x} dx
double xexp_integral(double decay, double a, double b);  // \int_a^b x e^{-decay x} dx

}  // namespace thzcov::specfun
