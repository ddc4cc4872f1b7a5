#pragma once

#include <functional>
#include <stdexcept>
#include <string>

// Scalar special functions and 1-D numeric primitives shared by all modules.
namespace swipt::specfun {

// Parameters of a definite integral on [lower, upper].
// max_step bounds the coarsest sample spacing of the initial Simpson grid;
// rel_tol is the requested relative accuracy of the result.
struct QuadratureSpec {
    double lower = 0.0;
    double upper = 1.0;
    double max_step = 0.0;  // <= 0 selects (upper - lower) / 16
    double rel_tol = 1e-9;
};

// Thrown when the adaptive quadrature fails to converge within the refinement
// budget; carries the last (best) estimate.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double best_estimate)
        : std::runtime_error(what), best_(best_estimate) {}
    double best_estimate() const noexcept { return best_; }

private:
    double best_;
};

// Upper tail of the standard normal distribution, Pr(Z > t).
double gaussian_q(double t);

// Imaginary error function, (2/sqrt(pi)) * integral_0^t exp(u^2) du.
// Odd in t.  Throws std::overflow_error once exp(t^2) is not representable.
double erfi(double t);

// ln erfi(t) for t > 0, finite for arbitrarily large t.
double log_erfi(double t);

// E{x^2}/p_max of the exponential-quadratic density exp(-mu0 + mu1^2 x^2/p_max)
// on [0, sqrt(p_max)].  Equals exp(mu1^2)/(sqrt(pi) mu1 erfi(mu1)) - 1/(2 mu1^2),
// evaluated in a cancellation-free form that stays finite for arbitrarily large
// mu1 (where exp(mu1^2) overflows).  Increases from 1/3 (mu1 -> 0) towards 1.
double exp_quadratic_moment_ratio(double mu1);

// Adaptive composite Simpson rule with interval doubling.
double integrate(const std::function<double(double)>& f, const QuadratureSpec& spec);

// Bisection for g(x) = target on [lo, hi] for monotone g (either direction).
// Returns the midpoint of the final bracket of width <= tol.
// Throws std::invalid_argument when the target is not bracketed.
double bisect(const std::function<double(double)>& g, double lo, double hi,
              double target, double tol = 1e-3);

}  // namespace swipt::specfun
