#pragma once

#include <random>
#include <variant>
#include <vector>

#include "swipt/eh_model.hpp"

// Distributions of the non-negative transmit signal s and of the post-EH
// information signal x = sqrt(psi(|h s|^2)).
namespace swipt {

// Mass points with probabilities; also the representation of Dirac inputs
// (a single point with mass 1).
class DiscreteDistribution {
public:
    DiscreteDistribution(std::vector<double> points, std::vector<double> masses);
    static DiscreteDistribution dirac(double location);

    const std::vector<double>& points() const { return points_; }
    const std::vector<double>& masses() const { return masses_; }
    double cdf(double v) const;
    double mean_square() const;
    double sample(std::mt19937_64& rng) const;

private:
    std::vector<double> points_;
    std::vector<double> masses_;
    std::vector<double> cumulative_;
};

// pdf 1/sqrt(p_max) on [0, sqrt(p_max)].
struct UniformX {
    double p_max = 1.0;
};

// pdf exp(-mu0 + mu1^2 x^2/p_max) on [0, sqrt(p_max)].  mu0 is pinned to mu1 by
// normalization, exp(mu0) = sqrt(p_max pi) erfi(mu1)/(2 mu1); the two-argument
// constructor verifies the pair, from_mu1 derives mu0.
struct ExpQuadraticX {
    ExpQuadraticX(double p_max, double mu0, double mu1);
    static ExpQuadraticX from_mu1(double p_max, double mu1);

    double p_max;
    double mu0;
    double mu1;
};

// pdf alpha p_max^(-alpha/2) x^(alpha-1) on [0, sqrt(p_max)]; uniform at
// alpha = 1.
struct PowerLawX {
    double p_max = 1.0;
    double alpha_cf = 1.0;
};

// Gaussian centered on the middle of [0, a_bar] with scale sigma_s, truncated
// to that interval.
struct TruncatedGaussianS {
    double a_bar = 1.0;
    double sigma_s = 1.0;
};

using AnalyticPdf = std::variant<UniformX, ExpQuadraticX, PowerLawX, TruncatedGaussianS>;

double pdf(const AnalyticPdf& d, double v);
double cdf(const AnalyticPdf& d, double v);
double mean_square(const AnalyticPdf& d);
double support_max(const AnalyticPdf& d);
double sample(const AnalyticPdf& d, std::mt19937_64& rng);

// Distribution of s whose cdf is F_x(sqrt(psi_hat(|h s|^2))), constant across
// the intervals the monotone model excludes.  Kept as a cdf composition; the
// density of s can be singular at segment junctions, so consumers integrate
// against cdf differences instead.
class TransformedPdf {
public:
    TransformedPdf(AnalyticPdf base, MonotoneEHModel model, double h_gain);

    double cdf(double s) const;
    double support_max() const;  // smallest s with cdf == 1
    double sample(std::mt19937_64& rng) const;

    // E{psi_hat(|h s|^2)} by Stieltjes sum against the cdf; equals the base
    // distribution's E{x^2} by construction.
    double harvested_power(int grid = 20000) const;

    const AnalyticPdf& base() const { return base_; }
    const MonotoneEHModel& model() const { return model_; }
    double h_gain() const { return h_gain_; }

private:
    AnalyticPdf base_;
    MonotoneEHModel model_;
    double h_gain_;
};

using InputDistribution = std::variant<DiscreteDistribution, TransformedPdf>;

// x-space mass points mapped to s = sqrt(psi_hat^{-1}(x^2))/|h|, masses kept.
DiscreteDistribution pull_back(const DiscreteDistribution& fx, const MonotoneEHModel& model,
                               double h_gain);
TransformedPdf pull_back(const AnalyticPdf& fx, const MonotoneEHModel& model, double h_gain);

double cdf(const InputDistribution& d, double v);
double support_max(const InputDistribution& d);

// Grid dump helpers used by the CLI: rows of (v, pdf, cdf) for analytic
// densities, (point, mass) for discrete ones, (s, cdf) for transformed ones.
std::string dump_csv(const AnalyticPdf& d, int grid_points);
std::string dump_csv(const DiscreteDistribution& d);
std::string dump_csv(const TransformedPdf& d, int grid_points);

}  // namespace swipt
