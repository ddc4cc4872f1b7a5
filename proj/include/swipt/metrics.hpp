#pragma once

#include <functional>

#include "swipt/distributions.hpp"

// Output densities, differential entropies, mutual information and the
// entropy-power-inequality rate bound.
namespace swipt {

struct NoiseModel {
    double sigma2 = 1e-8;  // AWGN variance at the RX output, W
};

struct RateResult {
    double mutual_information = 0.0;  // nats/channel use
    double achievable_rate = 0.0;     // nats/channel use
    double entropy_x = 0.0;           // nats; -inf for discrete inputs
};

// Density of y = x + n.  The analytic overload evaluates the convolution
// integral by quadrature; the discrete overload is the exact Gaussian mixture.
double output_pdf(const DiscreteDistribution& fx, const NoiseModel& noise, double y);
double output_pdf(const AnalyticPdf& fx, const NoiseModel& noise, double y);

// Closed form for the uniform input on [0, sqrt(p_max)].
double output_pdf_uniform(double p_max, const NoiseModel& noise, double y);

// Closed form for the exp-quadratic input; valid while 2 mu1^2 sigma^2 < p_max.
// Throws std::domain_error otherwise (callers fall back to the quadrature form).
double output_pdf_expquad(const ExpQuadraticX& fx, const NoiseModel& noise, double y);

// Differential entropy of x.  Closed forms for the uniform, exp-quadratic and
// power-law families, quadrature for the truncated Gaussian; -infinity for
// discrete distributions.
double entropy(const AnalyticPdf& fx);
double entropy(const DiscreteDistribution& fx);

// EPI lower bound J = 0.5 ln(1 + e^{2 h_x} / (2 pi e sigma^2)).
double achievable_rate(double entropy_x, const NoiseModel& noise);

// Closed-form achievable rate of the power-law family.
double rate_powerlaw(double p_max, double alpha_cf, const NoiseModel& noise);

// I = h(y) - 0.5 ln(2 pi e sigma^2), h(y) by quadrature over
// [-6 sigma, sup + 6 sigma]; clamped below at zero.
double mutual_information(const DiscreteDistribution& fx, const NoiseModel& noise);
double mutual_information(const AnalyticPdf& fx, const NoiseModel& noise);

// Same entropy integral against a caller-supplied output density whose input
// signal lives on [0, support_top]; used for push-forward distributions that
// have no f_x representation.
double mutual_information_from_output(const std::function<double(double)>& fy,
                                      double support_top, const NoiseModel& noise);

}  // namespace swipt
