#include "swipt/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "swipt/specfun.hpp"

namespace swipt {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310005024;
constexpr double kWindowSigmas = 8.5;  // Gaussian tail below 1e-16 of the peak

void check_noise(const NoiseModel& noise) {
    if (!(noise.sigma2 > 0.0)) throw std::invalid_argument("noise variance must be positive");
}

double noise_entropy(const NoiseModel& noise) {
    return 0.5 * std::log(2.0 * M_PI * M_E * noise.sigma2);
}

}  // namespace

double output_pdf(const DiscreteDistribution& fx, const NoiseModel& noise, double y) {
    check_noise(noise);
    const double sigma = std::sqrt(noise.sigma2);
    const auto& pts = fx.points();
    const auto& ms = fx.masses();
    const auto lo = std::lower_bound(pts.begin(), pts.end(), y - kWindowSigmas * sigma);
    const auto hi = std::upper_bound(pts.begin(), pts.end(), y + kWindowSigmas * sigma);
    double acc = 0.0;
    for (auto it = lo; it != hi; ++it) {
        const double z = (y - *it) / sigma;
        acc += ms[it - pts.begin()] * std::exp(-0.5 * z * z);
    }
    return acc / (sigma * kSqrt2Pi);
}

double output_pdf(const AnalyticPdf& fx, const NoiseModel& noise, double y) {
    check_noise(noise);
    const double sigma = std::sqrt(noise.sigma2);
    const double lo = std::max(0.0, y - kWindowSigmas * sigma);
    const double hi = std::min(support_max(fx), y + kWindowSigmas * sigma);
    if (!(lo < hi)) return 0.0;
    specfun::QuadratureSpec spec{lo, hi, sigma / 8.0, 1e-12};
    return specfun::integrate(
        [&](double x) {
            const double z = (y - x) / sigma;
            return pdf(fx, x) * std::exp(-0.5 * z * z) / (sigma * kSqrt2Pi);
        },
        spec);
}

double output_pdf_uniform(double p_max, const NoiseModel& noise, double y) {
    check_noise(noise);
    if (!(p_max > 0.0)) throw std::invalid_argument("p_max must be positive");
    const double sigma = std::sqrt(noise.sigma2);
    const double root = std::sqrt(p_max);
    return (specfun::gaussian_q((y - root) / sigma) - specfun::gaussian_q(y / sigma)) / root;
}

double output_pdf_expquad(const ExpQuadraticX& fx, const NoiseModel& noise, double y) {
    check_noise(noise);
    const double mu4_sq = 1.0 - 2.0 * fx.mu1 * fx.mu1 * noise.sigma2 / fx.p_max;
    if (!(mu4_sq > 0.0)) {
        throw std::domain_error("output_pdf_expquad: outside the closed form's validity");
    }
    const double mu4 = std::sqrt(mu4_sq);
    const double sigma = std::sqrt(noise.sigma2);
    const double root = std::sqrt(fx.p_max);
    const double q_diff = specfun::gaussian_q((y - mu4_sq * root) / (mu4 * sigma)) -
                          specfun::gaussian_q(y / (mu4 * sigma));
    return std::exp(y * y / fx.p_max * fx.mu1 * fx.mu1 / mu4_sq - fx.mu0) / mu4 * q_diff;
}

double entropy(const AnalyticPdf& fx) {
    return std::visit(
        [&fx](const auto& dist) -> double {
            using T = std::decay_t<decltype(dist)>;
            if constexpr (std::is_same_v<T, UniformX>) {
                return 0.5 * std::log(dist.p_max);
            } else if constexpr (std::is_same_v<T, ExpQuadraticX>) {
                return dist.mu0 -
                       dist.mu1 * dist.mu1 * specfun::exp_quadratic_moment_ratio(dist.mu1);
            } else if constexpr (std::is_same_v<T, PowerLawX>) {
                return (dist.alpha_cf - 1.0) / dist.alpha_cf -
                       std::log(dist.alpha_cf / std::sqrt(dist.p_max));
            } else {
                const double top = dist.a_bar;
                specfun::QuadratureSpec spec{0.0, top, top / 512.0, 1e-11};
                return specfun::integrate(
                    [&fx](double v) {
                        const double f = pdf(fx, v);
                        return f > 0.0 ? -f * std::log(f) : 0.0;
                    },
                    spec);
            }
        },
        fx);
}

double entropy(const DiscreteDistribution&) {
    return -std::numeric_limits<double>::infinity();
}

double achievable_rate(double entropy_x, const NoiseModel& noise) {
    check_noise(noise);
    if (std::isinf(entropy_x) && entropy_x < 0.0) return 0.0;
    return 0.5 * std::log1p(std::exp(2.0 * entropy_x) /
                            (2.0 * M_PI * M_E * noise.sigma2));
}

double rate_powerlaw(double p_max, double alpha_cf, const NoiseModel& noise) {
    check_noise(noise);
    if (!(alpha_cf >= 1.0)) throw std::invalid_argument("rate_powerlaw: alpha must be >= 1");
    const double num = p_max * std::exp(2.0 * (alpha_cf - 1.0) / alpha_cf);
    return 0.5 * std::log1p(num / (2.0 * M_PI * M_E * noise.sigma2 * alpha_cf * alpha_cf));
}

double mutual_information_from_output(const std::function<double(double)>& fy,
                                      double support_top, const NoiseModel& noise) {
    check_noise(noise);
    const double sigma = std::sqrt(noise.sigma2);
    specfun::QuadratureSpec spec{-6.0 * sigma, support_top + 6.0 * sigma, sigma / 10.0, 1e-9};
    const double h_y = specfun::integrate(
        [&fy](double y) {
            const double f = fy(y);
            return f > 0.0 ? -f * std::log(f) : 0.0;
        },
        spec);
    return std::max(0.0, h_y - noise_entropy(noise));
}

double mutual_information(const DiscreteDistribution& fx, const NoiseModel& noise) {
    return mutual_information_from_output(
        [&](double y) { return output_pdf(fx, noise, y); }, fx.points().back(), noise);
}

double mutual_information(const AnalyticPdf& fx, const NoiseModel& noise) {
    check_noise(noise);
    // Closed-form output densities where they exist; Eq.-(7)-style quadrature
    // convolution otherwise.
    if (const auto* uni = std::get_if<UniformX>(&fx)) {
        return mutual_information_from_output(
            [&](double y) { return output_pdf_uniform(uni->p_max, noise, y); },
            std::sqrt(uni->p_max), noise);
    }
    if (const auto* eq = std::get_if<ExpQuadraticX>(&fx)) {
        if (2.0 * eq->mu1 * eq->mu1 * noise.sigma2 < eq->p_max) {
            return mutual_information_from_output(
                [&](double y) { return output_pdf_expquad(*eq, noise, y); },
                std::sqrt(eq->p_max), noise);
        }
    }
    return mutual_information_from_output(
        [&](double y) { return output_pdf(fx, noise, y); }, support_max(fx), noise);
}

}  // namespace swipt
