#include "swipt/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "swipt/specfun.hpp"

namespace swipt {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310005024;

double standard_normal_pdf(double z) { return std::exp(-0.5 * z * z) / kSqrt2Pi; }

void check_power_law(const PowerLawX& d) {
    if (!(d.p_max > 0.0)) throw std::invalid_argument("PowerLawX: p_max must be positive");
    if (!(d.alpha_cf >= 1.0)) throw std::invalid_argument("PowerLawX: alpha must be >= 1");
}

double truncated_gaussian_norm(const TruncatedGaussianS& d) {
    // integral of N((s - a_bar/2)/sigma)/sigma over [0, a_bar]
    return 1.0 - 2.0 * specfun::gaussian_q(d.a_bar / (2.0 * d.sigma_s));
}

}  // namespace

DiscreteDistribution::DiscreteDistribution(std::vector<double> points,
                                           std::vector<double> masses)
    : points_(std::move(points)), masses_(std::move(masses)) {
    if (points_.empty() || points_.size() != masses_.size()) {
        throw std::invalid_argument("discrete distribution: size mismatch");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!(points_[i] >= 0.0)) {
            throw std::invalid_argument("discrete distribution: negative point");
        }
        if (i > 0 && !(points_[i] > points_[i - 1])) {
            throw std::invalid_argument("discrete distribution: points must increase");
        }
        if (masses_[i] < 0.0) {
            throw std::invalid_argument("discrete distribution: negative mass");
        }
        total += masses_[i];
        cumulative_.push_back(total);
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("discrete distribution: masses must sum to 1");
    }
}

DiscreteDistribution DiscreteDistribution::dirac(double location) {
    return DiscreteDistribution({location}, {1.0});
}

double DiscreteDistribution::cdf(double v) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < points_.size() && points_[i] <= v; ++i) acc += masses_[i];
    return acc;
}

double DiscreteDistribution::mean_square() const {
    double acc = 0.0;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        acc += masses_[i] * points_[i] * points_[i];
    }
    return acc;
}

double DiscreteDistribution::sample(std::mt19937_64& rng) const {
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const auto idx = std::min<std::size_t>(it - cumulative_.begin(), points_.size() - 1);
    return points_[idx];
}

ExpQuadraticX::ExpQuadraticX(double p_max_in, double mu0_in, double mu1_in)
    : p_max(p_max_in), mu0(mu0_in), mu1(mu1_in) {
    if (!(p_max > 0.0) || !(mu1 > 0.0)) {
        throw std::invalid_argument("ExpQuadraticX: p_max and mu1 must be positive");
    }
    const double expected = 0.5 * std::log(p_max * M_PI) + specfun::log_erfi(mu1) -
                            std::log(2.0 * mu1);
    if (std::abs(mu0 - expected) > 1e-9 * std::max(1.0, std::abs(expected))) {
        throw std::invalid_argument("ExpQuadraticX: mu0 violates the normalization identity");
    }
}

ExpQuadraticX ExpQuadraticX::from_mu1(double p_max, double mu1) {
    if (!(p_max > 0.0) || !(mu1 > 0.0)) {
        throw std::invalid_argument("ExpQuadraticX: p_max and mu1 must be positive");
    }
    const double mu0 =
        0.5 * std::log(p_max * M_PI) + specfun::log_erfi(mu1) - std::log(2.0 * mu1);
    return ExpQuadraticX(p_max, mu0, mu1);
}

double pdf(const AnalyticPdf& d, double v) {
    return std::visit(
        [v](const auto& dist) -> double {
            using T = std::decay_t<decltype(dist)>;
            if constexpr (std::is_same_v<T, UniformX>) {
                const double top = std::sqrt(dist.p_max);
                return (v >= 0.0 && v <= top) ? 1.0 / top : 0.0;
            } else if constexpr (std::is_same_v<T, ExpQuadraticX>) {
                const double top = std::sqrt(dist.p_max);
                if (v < 0.0 || v > top) return 0.0;
                return std::exp(-dist.mu0 + dist.mu1 * dist.mu1 * v * v / dist.p_max);
            } else if constexpr (std::is_same_v<T, PowerLawX>) {
                check_power_law(dist);
                const double top = std::sqrt(dist.p_max);
                if (v < 0.0 || v > top) return 0.0;
                return dist.alpha_cf * std::pow(dist.p_max, -0.5 * dist.alpha_cf) *
                       std::pow(v, dist.alpha_cf - 1.0);
            } else {
                if (v < 0.0 || v > dist.a_bar) return 0.0;
                const double z = (v - 0.5 * dist.a_bar) / dist.sigma_s;
                return standard_normal_pdf(z) / (dist.sigma_s * truncated_gaussian_norm(dist));
            }
        },
        d);
}

double cdf(const AnalyticPdf& d, double v) {
    return std::visit(
        [v](const auto& dist) -> double {
            using T = std::decay_t<decltype(dist)>;
            if constexpr (std::is_same_v<T, UniformX>) {
                const double top = std::sqrt(dist.p_max);
                return std::clamp(v / top, 0.0, 1.0);
            } else if constexpr (std::is_same_v<T, ExpQuadraticX>) {
                const double top = std::sqrt(dist.p_max);
                if (v <= 0.0) return 0.0;
                if (v >= top) return 1.0;
                const double t = dist.mu1 * v / top;
                return std::exp(specfun::log_erfi(t) - specfun::log_erfi(dist.mu1));
            } else if constexpr (std::is_same_v<T, PowerLawX>) {
                check_power_law(dist);
                const double top = std::sqrt(dist.p_max);
                if (v <= 0.0) return 0.0;
                if (v >= top) return 1.0;
                return std::pow(v / top, dist.alpha_cf);
            } else {
                if (v <= 0.0) return 0.0;
                if (v >= dist.a_bar) return 1.0;
                const double c = 0.5 * dist.a_bar;
                const double num = specfun::gaussian_q((c - v) / dist.sigma_s) -
                                   specfun::gaussian_q(c / dist.sigma_s);
                return std::clamp(num / truncated_gaussian_norm(dist), 0.0, 1.0);
            }
        },
        d);
}

double mean_square(const AnalyticPdf& d) {
    return std::visit(
        [&d](const auto& dist) -> double {
            using T = std::decay_t<decltype(dist)>;
            if constexpr (std::is_same_v<T, UniformX>) {
                return dist.p_max / 3.0;
            } else if constexpr (std::is_same_v<T, PowerLawX>) {
                check_power_law(dist);
                return dist.p_max * dist.alpha_cf / (dist.alpha_cf + 2.0);
            } else {
                const double top = support_max(d);
                specfun::QuadratureSpec spec{0.0, top, top / 256.0, 1e-10};
                return specfun::integrate([&d](double v) { return v * v * pdf(d, v); }, spec);
            }
        },
        d);
}

double support_max(const AnalyticPdf& d) {
    return std::visit(
        [](const auto& dist) -> double {
            using T = std::decay_t<decltype(dist)>;
            if constexpr (std::is_same_v<T, TruncatedGaussianS>) {
                return dist.a_bar;
            } else {
                return std::sqrt(dist.p_max);
            }
        },
        d);
}

double mean_square(const DiscreteDistribution& d) { return d.mean_square(); }

double sample(const AnalyticPdf& d, std::mt19937_64& rng) {
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    return std::visit(
        [&](const auto& dist) -> double {
            using T = std::decay_t<decltype(dist)>;
            if constexpr (std::is_same_v<T, UniformX>) {
                return u * std::sqrt(dist.p_max);
            } else if constexpr (std::is_same_v<T, PowerLawX>) {
                check_power_law(dist);
                return std::sqrt(dist.p_max) * std::pow(u, 1.0 / dist.alpha_cf);
            } else if constexpr (std::is_same_v<T, ExpQuadraticX>) {
                if (u <= 0.0) return 0.0;
                // invert erfi(mu1 x / sqrt(p)) = u erfi(mu1) in log space
                const double target = std::log(u) + specfun::log_erfi(dist.mu1);
                double lo = 0.0, hi = dist.mu1;
                for (int i = 0; i < 80 && hi - lo > 0.0; ++i) {
                    const double mid = 0.5 * (lo + hi);
                    if (mid <= lo || mid >= hi) break;
                    (specfun::log_erfi(mid) < target ? lo : hi) = mid;
                }
                return 0.5 * (lo + hi) / dist.mu1 * std::sqrt(dist.p_max);
            } else {
                AnalyticPdf self = dist;
                double lo = 0.0, hi = dist.a_bar;
                for (int i = 0; i < 80 && hi - lo > 0.0; ++i) {
                    const double mid = 0.5 * (lo + hi);
                    if (mid <= lo || mid >= hi) break;
                    (cdf(self, mid) < u ? lo : hi) = mid;
                }
                return 0.5 * (lo + hi);
            }
        },
        d);
}

TransformedPdf::TransformedPdf(AnalyticPdf base, MonotoneEHModel model, double h_gain)
    : base_(std::move(base)), model_(std::move(model)), h_gain_(h_gain) {
    if (!(h_gain_ > 0.0)) throw std::invalid_argument("pull_back: h_gain must be positive");
    const double x_top = swipt::support_max(base_);
    if (x_top * x_top > model_.max_value() * (1.0 + 1e-9)) {
        throw std::invalid_argument(
            "pull_back: x support exceeds the EH model's reachable power range");
    }
}

double TransformedPdf::cdf(double s) const {
    if (s <= 0.0) return 0.0;
    const double rho = h_gain_ * s * h_gain_ * s;
    for (const auto& piece : model_.pieces()) {
        if (rho < piece.rho_lo) {
            // flat across the excluded gap before this piece
            return swipt::cdf(base_, std::sqrt(piece.segment.value(piece.rho_lo)));
        }
        if (rho < piece.rho_hi || (piece.closed_right && rho <= piece.rho_hi)) {
            return swipt::cdf(base_, std::sqrt(piece.segment.value(rho)));
        }
    }
    return swipt::cdf(base_, std::sqrt(model_.max_value()));
}

double TransformedPdf::support_max() const {
    const double x_top = swipt::support_max(base_);
    const double p = std::min(x_top * x_top, model_.max_value());
    return std::sqrt(model_.invert(p)) / h_gain_;
}

double TransformedPdf::sample(std::mt19937_64& rng) const {
    const double x = swipt::sample(base_, rng);
    const double p = std::min(x * x, model_.max_value());
    return std::sqrt(model_.invert(p)) / h_gain_;
}

double TransformedPdf::harvested_power(int grid) const {
    // Stieltjes sum of psi_hat(|h s|^2) against dF_s.  Midpoints falling in an
    // excluded gap carry dF = 0; value there is clamped down to the gap floor.
    const double top = support_max() * (1.0 + 1e-12);
    auto clamped_value = [this](double rho) -> double {
        double below = 0.0;
        for (const auto& piece : model_.pieces()) {
            if (rho < piece.rho_lo) break;
            if (rho < piece.rho_hi || (piece.closed_right && rho <= piece.rho_hi)) {
                return piece.segment.value(rho);
            }
            below = piece.segment.value(piece.rho_hi);
        }
        return below;
    };
    double acc = 0.0;
    double f_prev = cdf(0.0);
    for (int i = 1; i <= grid; ++i) {
        const double s_hi = top * i / grid;
        const double f_cur = cdf(s_hi);
        const double s_mid = top * (i - 0.5) / grid;
        acc += clamped_value(h_gain_ * s_mid * h_gain_ * s_mid) * (f_cur - f_prev);
        f_prev = f_cur;
    }
    return acc;
}

DiscreteDistribution pull_back(const DiscreteDistribution& fx, const MonotoneEHModel& model,
                               double h_gain) {
    if (!(h_gain > 0.0)) throw std::invalid_argument("pull_back: h_gain must be positive");
    std::vector<double> s_points;
    s_points.reserve(fx.points().size());
    const double reach = model.max_value() * (1.0 + 1e-9);
    for (double x : fx.points()) {
        const double p = x * x;
        if (p > reach) {
            throw std::invalid_argument(
                "pull_back: x point exceeds the EH model's reachable power range");
        }
        s_points.push_back(std::sqrt(model.invert(std::min(p, model.max_value()))) / h_gain);
    }
    return DiscreteDistribution(std::move(s_points), fx.masses());
}

TransformedPdf pull_back(const AnalyticPdf& fx, const MonotoneEHModel& model, double h_gain) {
    return TransformedPdf(fx, model, h_gain);
}

double cdf(const InputDistribution& d, double v) {
    return std::visit([v](const auto& dist) { return dist.cdf(v); }, d);
}

double support_max(const InputDistribution& d) {
    return std::visit(
        [](const auto& dist) -> double {
            using T = std::decay_t<decltype(dist)>;
            if constexpr (std::is_same_v<T, DiscreteDistribution>) {
                return dist.points().back();
            } else {
                return dist.support_max();
            }
        },
        d);
}

std::string dump_csv(const AnalyticPdf& d, int grid_points) {
    std::ostringstream out;
    out.precision(12);
    out << "v_sqrtW,pdf_per_sqrtW,cdf\n";
    const double top = support_max(d);
    for (int i = 0; i <= grid_points; ++i) {
        const double v = top * i / grid_points;
        out << v << ',' << pdf(d, v) << ',' << cdf(d, v) << "\n";
    }
    return out.str();
}

std::string dump_csv(const DiscreteDistribution& d) {
    std::ostringstream out;
    out.precision(12);
    out << "point_sqrtW,mass\n";
    for (std::size_t i = 0; i < d.points().size(); ++i) {
        out << d.points()[i] << ',' << d.masses()[i] << "\n";
    }
    return out.str();
}

std::string dump_csv(const TransformedPdf& d, int grid_points) {
    std::ostringstream out;
    out.precision(12);
    out << "s_sqrtW,cdf\n";
    const double top = d.support_max();
    for (int i = 0; i <= grid_points; ++i) {
        const double s = top * i / grid_points;
        out << s << ',' << d.cdf(s) << "\n";
    }
    return out.str();
}

}  // namespace swipt
