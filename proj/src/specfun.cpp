#include "thzcov/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/lambert_w.hpp>

namespace thzcov::specfun {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// h(t)/t^2 with h(t) = 1 - e^{-t}(1 + t); the series branch avoids cancellation for small t.
double scaled_gamma2_tail(double t) {
    if (t < 0.5) {
        double sum = 0.0;
        double power = 1.0;      // t^{n-2}
        double factorial = 2.0;  // n!
        for (int n = 2; n < 40; ++n) {
            const double term = (n - 1) * power / factorial;
            sum += (n % 2 == 0) ? term : -term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
            power *= t;
            factorial *= (n + 1);
        }
        return sum;
    }
    return (1.0 - std::exp(-t) * (1.0 + t)) / (t * t);
}

void check_interval(double a, double b) {
    if (std::isnan(a) || std::isnan(b) || a > b) {
        std::ostringstream msg;
        msg << "integration interval [" << a << ", " << b << "] is not ordered";
        throw DomainError(msg.str());
    }
}

}  // namespace

double lambert_w0(double x) {
    constexpr double branch_point = -1.0 / std::numbers::e;
    if (std::isnan(x) || x < branch_point) {
        throw DomainError("lambert_w0 requires x >= -1/e");
    }
    if (x == 0.0) return 0.0;
    return boost::math::lambert_w0(x);
}

double expint_ei(double x) {
    if (x == 0.0 || std::isnan(x)) {
        throw DomainError("expint_ei is singular at x = 0");
    }
    return std::expint(x);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec) {
    check_interval(a, b);
    if (!(spec.relative_tolerance > 0.0)) {
        throw DomainError("quadrature tolerance must be positive");
    }
    if (!std::is_sorted(spec.breakpoints.begin(), spec.breakpoints.end())) {
        throw DomainError("quadrature breakpoints must be sorted");
    }
    if (a == b) return 0.0;

    std::vector<double> knots{a};
    for (double p : spec.breakpoints) {
        if (p > knots.back() && p < b) knots.push_back(p);
    }
    knots.push_back(b);

    using Rule = boost::math::quadrature::gauss_kronrod<double, 61>;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        double error = 0.0;
        double l1 = 0.0;
        const double value = Rule::integrate(f, knots[i], knots[i + 1], spec.max_subdivisions,
                                             spec.relative_tolerance, &error, &l1);
        if (!std::isfinite(value) ||
            error > std::max(spec.relative_tolerance * l1, spec.absolute_tolerance) * 10.0) {
            std::ostringstream msg;
            msg << "quadrature failed to converge on [" << knots[i] << ", " << knots[i + 1]
                << "]: error estimate " << error << " for L1 norm " << l1;
            throw ConvergenceError(msg.str());
        }
        total += value;
    }
    return total;
}

double exp_integral(double decay, double a, double b) {
    check_interval(a, b);
    if (a == b) return 0.0;
    if (decay == 0.0) return b - a;
    if (b == kInf) return std::exp(-decay * a) / decay;
    return std::exp(-decay * a) * (-std::expm1(-decay * (b - a))) / decay;
}

double xexp_integral(double decay, double a, double b) {
    check_interval(a, b);
    if (a == b) return 0.0;
    if (b == kInf) {
        if (decay <= 0.0) return kInf;
        return std::exp(-decay * a) * (a / decay + 1.0 / (decay * decay));
    }
    // Shift to s = x - a: \int_0^L (a + s) e^{-decay s} ds, all terms nonnegative.
    const double length = b - a;
    const double t = decay * length;
    return std::exp(-decay * a) *
           (a * exp_integral(decay, 0.0, length) + length * length * scaled_gamma2_tail(t));
}

}  // namespace thzcov::specfun
