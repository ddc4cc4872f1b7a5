#include "swipt/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace swipt::specfun {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

// Maclaurin series of erfi: (2/sqrt(pi)) sum_k t^(2k+1) / (k! (2k+1)).
// All terms positive, converges for every finite t.
double erfi_series(double t) {
    const double t2 = t * t;
    double term = t;  // k = 0 contribution before the 1/(2k+1) weight
    double sum = t;
    for (int k = 1; k < 400; ++k) {
        term *= t2 / k;
        const double contrib = term / (2.0 * k + 1.0);
        sum += contrib;
        if (contrib < sum * 1e-17) break;
    }
    return sum * 2.0 / kSqrtPi;
}

// S(t) = sqrt(pi) t exp(-t^2) erfi(t) = sum_k (2k-1)!! / (2t^2)^k, summed until
// the terms stop decreasing.  Truncation error ~ sqrt(2) exp(-t^2), negligible
// for t >= 6.
double erfi_asymptotic_factor(double t) {
    const double inv2t2 = 1.0 / (2.0 * t * t);
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double next = term * (2.0 * k - 1.0) * inv2t2;
        if (next >= term) break;
        term = next;
        sum += term;
        if (term < sum * 1e-17) break;
    }
    return sum;
}

}  // namespace

double gaussian_q(double t) {
    return 0.5 * std::erfc(t / std::sqrt(2.0));
}

double erfi(double t) {
    if (t < 0.0) return -erfi(-t);
    if (t == 0.0) return 0.0;
    if (t * t > 708.0) {
        throw std::overflow_error("erfi: exp(t^2) exceeds double range at t = " +
                                  std::to_string(t));
    }
    if (t <= 6.0) return erfi_series(t);
    return std::exp(t * t) / (kSqrtPi * t) * erfi_asymptotic_factor(t);
}

double log_erfi(double t) {
    if (!(t > 0.0)) throw std::domain_error("log_erfi: t must be positive");
    if (t <= 20.0) return std::log(erfi(t));
    return t * t + std::log(erfi_asymptotic_factor(t) / (kSqrtPi * t));
}

double exp_quadratic_moment_ratio(double mu1) {
    if (mu1 <= 0.0) return 1.0 / 3.0;
    const double m2 = mu1 * mu1;
    if (mu1 <= 20.0) {
        // Exact rewrite of exp(m^2)/(sqrt(pi) m erfi(m)) - 1/(2m^2) as
        //   [sum_{k>=1} m^(2k-2)/((k-1)!) * 2/(2k+1)] / (2 sum_{k>=0} m^(2k)/(k!(2k+1)))
        // with all-positive terms; equals exactly 1/3 at m = 0.
        double pn = 1.0;          // m^(2k-2) / (k-1)!  at k = 1
        double pd = m2;           // m^(2k) / k!        at k = 1
        double num = 2.0 / 3.0;   // k = 1 numerator term
        double den = 1.0 + m2 / 3.0;
        for (int k = 2; k < 1500; ++k) {
            pn *= m2 / (k - 1);
            pd *= m2 / k;
            const double tn = pn * 2.0 / (2.0 * k + 1.0);
            const double td = pd / (2.0 * k + 1.0);
            num += tn;
            den += td;
            if (tn < num * 1e-17 && td < den * 1e-17) break;
        }
        return num / (2.0 * den);
    }
    // 1/S(mu1) - 1/(2 mu1^2); S from the asymptotic expansion (error < 1e-170 here).
    return 1.0 / erfi_asymptotic_factor(mu1) - 1.0 / (2.0 * m2);
}

namespace {

double composite_simpson(const std::function<double(double)>& f, double a, double b,
                         long n, double* abs_integral) {
    const double h = (b - a) / static_cast<double>(n);
    double odd = 0.0, even = 0.0, odd_abs = 0.0, even_abs = 0.0;
    for (long i = 1; i < n; i += 2) {
        const double v = f(a + h * static_cast<double>(i));
        odd += v;
        odd_abs += std::abs(v);
    }
    for (long i = 2; i < n; i += 2) {
        const double v = f(a + h * static_cast<double>(i));
        even += v;
        even_abs += std::abs(v);
    }
    const double fa = f(a), fb = f(b);
    if (abs_integral) {
        *abs_integral = (std::abs(fa) + std::abs(fb) + 4.0 * odd_abs + 2.0 * even_abs) * h / 3.0;
    }
    return (fa + fb + 4.0 * odd + 2.0 * even) * h / 3.0;
}

}  // namespace

double integrate(const std::function<double(double)>& f, const QuadratureSpec& spec) {
    const double a = spec.lower, b = spec.upper;
    if (!(a < b)) throw std::invalid_argument("integrate: lower must be < upper");
    if (!(spec.rel_tol > 0.0)) throw std::invalid_argument("integrate: rel_tol must be > 0");
    const double step = spec.max_step > 0.0 ? spec.max_step : (b - a) / 16.0;

    long n = 2;
    while ((b - a) / static_cast<double>(n) > step && n < (1L << 20)) n *= 2;

    double prev_abs = 0.0;
    double prev = composite_simpson(f, a, b, n, &prev_abs);
    for (int pass = 0; pass < 22; ++pass) {
        n *= 2;
        double cur_abs = 0.0;
        const double cur = composite_simpson(f, a, b, n, &cur_abs);
        const double diff = std::abs(cur - prev);
        // Relative convergence, with an absolute escape for integrals that
        // cancel to ~0 relative to the mass of |f|.
        if (diff <= spec.rel_tol * std::abs(cur) || diff <= 1e-15 * cur_abs) {
            return cur;
        }
        prev = cur;
        prev_abs = cur_abs;
        if (n > (1L << 24)) break;
    }
    throw IntegrationError("integrate: no convergence after refinement budget", prev);
}

double bisect(const std::function<double(double)>& g, double lo, double hi,
              double target, double tol) {
    if (!(lo < hi)) throw std::invalid_argument("bisect: lo must be < hi");
    if (!(tol > 0.0)) throw std::invalid_argument("bisect: tol must be > 0");
    double flo = g(lo) - target;
    double fhi = g(hi) - target;
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0) {
        throw std::invalid_argument("bisect: target not bracketed on [lo, hi]");
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // bracket at floating-point resolution
        const double fmid = g(mid) - target;
        if (fmid == 0.0) return mid;
        if ((fmid < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace swipt::specfun
