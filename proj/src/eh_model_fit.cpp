#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "swipt/eh_model.hpp"

namespace swipt {

namespace {

// Parameter vector of one segment fit, all unconstrained:
//   q[0] -> B through the direction-specific bound transform
//   q[1] -> ln theta, q[2] -> ln alpha, q[3] -> ln beta
// Fitting happens on normalized coordinates (rho offset scaled by the segment
// width, y scaled by the data magnitude) so that the spec'd multi-start grid
// for theta is meaningful regardless of the input power scale.
struct SegmentFitProblem {
    std::vector<double> u;  // (rho - rho_start)/width, in [0, 1]
    std::vector<double> y;  // harvested / y_scale
    double start_value;     // Phi_{n-1} / y_scale
    bool increasing;
    double bound;  // lower bound on B (increasing) or upper bound (decreasing)

    double curve(const std::array<double, 4>& q, double x) const {
        const double b = b_from(q[0]);
        const double t = std::exp(q[1]) * std::pow(x, std::exp(q[2]));
        return b + (start_value - b) * std::exp(-std::exp(q[3]) * std::log1p(t));
    }

    double b_from(double q0) const {
        if (increasing) return bound + std::exp(q0);
        return bound / (1.0 + std::exp(-q0));  // (0, bound)
    }

    double sse(const std::array<double, 4>& q) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double r = curve(q, u[i]) - y[i];
            acc += r * r;
        }
        return acc;
    }
};

// Dense 4x4 solve with partial pivoting.
bool solve4(std::array<std::array<double, 4>, 4> a, std::array<double, 4>& b) {
    for (int col = 0; col < 4; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 4; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        if (std::abs(a[pivot][col]) < 1e-300) return false;
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (int r = col + 1; r < 4; ++r) {
            const double f = a[r][col] / a[col][col];
            for (int c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    for (int col = 3; col >= 0; --col) {
        for (int r = 0; r < col; ++r) {
            b[r] -= a[r][col] / a[col][col] * b[col];
            a[r][col] = 0.0;
        }
        b[col] /= a[col][col];
    }
    return true;
}

std::array<double, 4> levenberg_marquardt(const SegmentFitProblem& prob,
                                          std::array<double, 4> q, int max_iter) {
    const std::size_t m = prob.u.size();
    double sse = prob.sse(q);
    double damping = 1e-3;
    for (int iter = 0; iter < max_iter; ++iter) {
        // Numeric Jacobian, central differences.
        std::vector<std::array<double, 4>> jac(m);
        std::vector<double> res(m);
        for (std::size_t i = 0; i < m; ++i) res[i] = prob.curve(q, prob.u[i]) - prob.y[i];
        for (int p = 0; p < 4; ++p) {
            const double h = 1e-6 * std::max(1.0, std::abs(q[p]));
            auto qp = q, qm = q;
            qp[p] += h;
            qm[p] -= h;
            for (std::size_t i = 0; i < m; ++i) {
                jac[i][p] = (prob.curve(qp, prob.u[i]) - prob.curve(qm, prob.u[i])) / (2.0 * h);
            }
        }
        std::array<std::array<double, 4>, 4> jtj{};
        std::array<double, 4> jtr{};
        for (std::size_t i = 0; i < m; ++i) {
            for (int a = 0; a < 4; ++a) {
                jtr[a] += jac[i][a] * res[i];
                for (int b = a; b < 4; ++b) jtj[a][b] += jac[i][a] * jac[i][b];
            }
        }
        for (int a = 0; a < 4; ++a) {
            for (int b = 0; b < a; ++b) jtj[a][b] = jtj[b][a];
        }

        bool stepped = false;
        for (int attempt = 0; attempt < 12; ++attempt) {
            auto lhs = jtj;
            for (int d = 0; d < 4; ++d) lhs[d][d] += damping * std::max(jtj[d][d], 1e-12);
            std::array<double, 4> delta = jtr;
            if (!solve4(lhs, delta)) {
                damping *= 10.0;
                continue;
            }
            auto trial = q;
            for (int d = 0; d < 4; ++d) trial[d] -= delta[d];
            const double trial_sse = prob.sse(trial);
            if (trial_sse < sse) {
                const double improvement = sse - trial_sse;
                q = trial;
                sse = trial_sse;
                damping = std::max(damping / 3.0, 1e-12);
                stepped = true;
                if (improvement < 1e-16 * (sse + 1e-30)) return q;
                break;
            }
            damping *= 4.0;
        }
        if (!stepped) break;
    }
    return q;
}

LogisticSegment fit_segment(const std::vector<double>& rho, const std::vector<double>& y,
                            double rho_lo, double rho_hi, double phi_start,
                            bool increasing, int max_iter) {
    SegmentFitProblem prob;
    const double width = rho_hi - rho_lo;
    double y_scale = std::abs(phi_start);
    for (std::size_t i = 0; i < rho.size(); ++i) {
        if (rho[i] < rho_lo - 1e-15 * width || rho[i] > rho_hi + 1e-15 * width) continue;
        prob.u.push_back(std::max(0.0, (rho[i] - rho_lo) / width));
        prob.y.push_back(y[i]);
        y_scale = std::max(y_scale, std::abs(y[i]));
    }
    if (prob.u.size() < 5) {
        throw FitError("fit: segment has too few samples", 0.0);
    }
    if (y_scale <= 0.0) {
        throw FitError("fit: segment data is identically zero", 0.0);
    }
    for (double& v : prob.y) v /= y_scale;
    prob.start_value = phi_start / y_scale;
    prob.increasing = increasing;
    if (increasing) {
        prob.bound = std::max(*std::max_element(prob.y.begin(), prob.y.end()),
                              prob.start_value);
    } else {
        prob.bound = *std::min_element(prob.y.begin(), prob.y.end());
        if (prob.bound <= 0.0) prob.bound = 1e-6;  // keep B in (0, bound)
    }

    std::array<double, 4> best{};
    double best_sse = std::numeric_limits<double>::infinity();
    const double b_margin = std::max(0.05 * std::abs(prob.bound), 1e-3);
    for (double theta0 : {1e2, 1e3, 1e4}) {
        for (double alpha0 : {1.0, 1.5, 2.5}) {
            for (double beta0 : {0.3, 0.7, 1.0}) {
                std::array<double, 4> q{increasing ? std::log(b_margin) : 2.0,
                                        std::log(theta0), std::log(alpha0),
                                        std::log(beta0)};
                q = levenberg_marquardt(prob, q, max_iter);
                const double s = prob.sse(q);
                if (s < best_sse) {
                    best_sse = s;
                    best = q;
                }
            }
        }
    }

    LogisticSegment seg;
    seg.asymptote = prob.b_from(best[0]) * y_scale;
    seg.start_value = phi_start;
    seg.alpha = std::exp(best[2]);
    seg.beta = std::exp(best[3]);
    // theta was fitted against (rho - rho_lo)/width.
    seg.theta = std::exp(best[1]) * std::pow(width, -seg.alpha);
    seg.rho_start = rho_lo;
    seg.rho_end = rho_hi;
    return seg;
}

std::vector<double> detect_breakpoints(const std::vector<double>& rho,
                                       const std::vector<double>& y, int wanted) {
    const std::size_t m = rho.size();
    std::vector<double> slope(m - 1);
    for (std::size_t i = 0; i + 1 < m; ++i) {
        slope[i] = (y[i + 1] - y[i]) / (rho[i + 1] - rho[i]);
    }
    // 5-point moving average.
    std::vector<double> smooth(slope.size());
    for (std::size_t i = 0; i < slope.size(); ++i) {
        const std::size_t lo = i >= 2 ? i - 2 : 0;
        const std::size_t hi = std::min(i + 2, slope.size() - 1);
        double acc = 0.0;
        for (std::size_t j = lo; j <= hi; ++j) acc += slope[j];
        smooth[i] = acc / static_cast<double>(hi - lo + 1);
    }
    std::vector<double> found;
    int sign = 0;
    for (std::size_t i = 0; i < smooth.size() && static_cast<int>(found.size()) < wanted; ++i) {
        const int s = smooth[i] > 0.0 ? 1 : (smooth[i] < 0.0 ? -1 : 0);
        if (s == 0) continue;
        if (sign == 0) {
            sign = s;
            continue;
        }
        if (s != sign) {
            // Require the new sign to persist over 3 consecutive smoothed slopes.
            bool persists = true;
            for (std::size_t j = i; j < std::min(i + 3, smooth.size()); ++j) {
                const int sj = smooth[j] > 0.0 ? 1 : (smooth[j] < 0.0 ? -1 : 0);
                if (sj != s) {
                    persists = false;
                    break;
                }
            }
            if (persists) {
                found.push_back(rho[i]);
                sign = s;
            }
        }
    }
    return found;
}

}  // namespace

PiecewiseEHModel fit(const EHSampleSet& samples, int n_segments, const FitOptions& options,
                     FitReport* report) {
    if (n_segments < 1) throw std::invalid_argument("fit: n_segments must be >= 1");
    const auto& rho = samples.rho;
    const auto& y = samples.harvested;
    if (rho.size() != y.size() || rho.size() < 8) {
        throw std::invalid_argument("fit: need >= 8 (rho, harvested) rows");
    }
    for (std::size_t i = 0; i < rho.size(); ++i) {
        if (!(rho[i] >= 0.0) || (i > 0 && !(rho[i] > rho[i - 1]))) {
            throw std::invalid_argument("fit: rho must be non-negative and strictly increasing");
        }
    }
    double y_max = 0.0;
    for (double v : y) y_max = std::max(y_max, std::abs(v));
    if (y_max <= 0.0) {
        throw FitError("fit: samples are identically zero, no positive-theta curve applies",
                       0.0);
    }

    std::vector<double> bps = samples.breakpoints;
    if (bps.empty() && n_segments > 1) {
        bps = detect_breakpoints(rho, y, n_segments - 1);
    }
    if (static_cast<int>(bps.size()) < n_segments - 1) {
        throw FitError("fit: could not locate enough slope sign changes for " +
                           std::to_string(n_segments) + " segments",
                       0.0);
    }
    bps.resize(n_segments - 1);

    std::vector<double> edges;
    edges.push_back(0.0);
    for (double b : bps) edges.push_back(b);
    edges.push_back(rho.back());

    std::vector<LogisticSegment> segs;
    double phi = 0.0;
    for (int n = 0; n < n_segments; ++n) {
        LogisticSegment seg = fit_segment(rho, y, edges[n], edges[n + 1], phi, n % 2 == 0,
                                          options.max_lm_iterations);
        phi = seg.value(seg.rho_end);
        segs.push_back(seg);
    }
    PiecewiseEHModel model(std::move(segs));

    double sse = 0.0;
    std::vector<double> seg_sse(n_segments, 0.0);
    std::vector<std::size_t> seg_count(n_segments, 0);
    for (std::size_t i = 0; i < rho.size(); ++i) {
        const double r = model.evaluate(rho[i]) - y[i];
        sse += r * r;
        int n = 0;
        while (n + 1 < n_segments && rho[i] >= edges[n + 1]) ++n;
        seg_sse[n] += r * r;
        ++seg_count[n];
    }
    const double rms = std::sqrt(sse / static_cast<double>(rho.size()));
    if (report) {
        report->rms = rms;
        report->rms_fraction = rms / y_max;
        report->segment_rms.clear();
        for (int n = 0; n < n_segments; ++n) {
            report->segment_rms.push_back(
                seg_count[n] ? std::sqrt(seg_sse[n] / static_cast<double>(seg_count[n])) : 0.0);
        }
    }
    if (rms > options.rms_ceiling_fraction * y_max) {
        throw FitError("fit: residual RMS " + std::to_string(rms) + " W exceeds ceiling", rms);
    }
    return model;
}

}  // namespace swipt
