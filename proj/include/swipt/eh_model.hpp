#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Piecewise-logistic energy-harvesting curve: received power rho (W) at the
// rectifier input -> instantaneous harvested power (W) at the load.
namespace swipt {

// One logistic piece,
//   value(rho) = asymptote + (start_value - asymptote)
//                * [1 + theta (rho - rho_start)^alpha]^(-beta).
// Starts exactly at start_value; approaches asymptote as rho grows, so the
// piece increases iff asymptote > start_value.
struct LogisticSegment {
    double asymptote = 0.0;    // B_n, W
    double start_value = 0.0;  // value at rho_start, W
    double theta = 0.0;        // 1/W^alpha
    double alpha = 0.0;
    double beta = 0.0;
    double rho_start = 0.0;  // W
    double rho_end = 0.0;    // W

    double value(double rho) const;
    bool increasing() const { return asymptote > start_value; }
};

class PiecewiseEHModel {
public:
    // Validates contiguity, continuity of the junction chain, positivity of
    // the shape parameters and the odd/even monotonicity pattern.
    explicit PiecewiseEHModel(std::vector<LogisticSegment> segments);

    // psi(rho); throws std::domain_error outside [0, rho_max] (breakdown region).
    double evaluate(double rho) const;

    double rho_max() const { return segments_.back().rho_end; }
    std::size_t segment_count() const { return segments_.size(); }
    const std::vector<LogisticSegment>& segments() const { return segments_; }

    // Junction value at the end of segment n (0-based), i.e. Phi_{n+1}.
    double junction_value(std::size_t n) const { return junctions_[n + 1]; }

private:
    std::vector<LogisticSegment> segments_;
    std::vector<double> junctions_;  // Phi_0 .. Phi_N
};

// Strictly increasing restriction of a piecewise model.  The domain is a union
// of intervals over rho; every interval except the last is half-open on the
// right, the last is closed.  Self-contained (owns copies of the retained
// segments) so it can outlive the source model.
class MonotoneEHModel {
public:
    struct Piece {
        double rho_lo = 0.0;
        double rho_hi = 0.0;
        bool closed_right = false;
        LogisticSegment segment;
    };

    explicit MonotoneEHModel(std::vector<Piece> pieces);

    bool contains(double rho) const;
    double evaluate(double rho) const;  // throws std::domain_error off-domain

    // Unique rho in the domain with evaluate(rho) == p.
    // Throws std::out_of_range for p above max_value().
    double invert(double p) const;

    double max_value() const;   // harvested power at the domain supremum
    double domain_sup() const;  // last rho_hi
    std::size_t retained_count() const { return pieces_.size(); }  // N_hat over 2, rounded up
    const std::vector<Piece>& pieces() const { return pieces_; }

private:
    std::vector<Piece> pieces_;
};

// Prop.-2-style equivalent model: keeps the increasing segments, entering each
// one at the level where it first exceeds the previous retained peak.
// Increasing segments that never recover above that peak are dropped.
MonotoneEHModel to_monotone(const PiecewiseEHModel& model);

// max over rho in [0, rho_ub] of psi(rho); candidates are rho_ub and each
// increasing-segment right endpoint below it.
double max_harvested_power(const PiecewiseEHModel& model, double rho_ub);

// ---------------------------------------------------------------------------
// Curve fitting

struct EHSampleSet {
    std::vector<double> rho;        // W, strictly increasing, non-negative
    std::vector<double> harvested;  // W
    std::vector<double> breakpoints;  // optional known junction locations (W)
};

class FitError : public std::runtime_error {
public:
    FitError(const std::string& what, double rms) : std::runtime_error(what), rms_(rms) {}
    double rms() const noexcept { return rms_; }

private:
    double rms_;
};

struct FitOptions {
    // Fit failure is reported when the residual RMS exceeds this fraction of
    // the largest sample magnitude.
    double rms_ceiling_fraction = 0.05;
    int max_lm_iterations = 200;
};

struct FitReport {
    double rms = 0.0;           // W
    double rms_fraction = 0.0;  // relative to max |harvested|
    std::vector<double> segment_rms;
};

// Per-segment nonlinear least squares with the junction chain pinned by
// continuity.  Breakpoints are taken from the sample set when present,
// otherwise detected from a smoothed finite-difference slope.
PiecewiseEHModel fit(const EHSampleSet& samples, int n_segments,
                     const FitOptions& options = {}, FitReport* report = nullptr);

// ---------------------------------------------------------------------------
// File formats

// Flat key-value model file; optional "unit" line (W, mW, uW) rescales the
// power-valued fields (rho breakpoints, B) and theta accordingly.
PiecewiseEHModel load_model(const std::string& path);
void save_model(const PiecewiseEHModel& model, const std::string& path,
                const std::string& comment = "");

// Two-column CSV (rho_W, harvested_W), '#' comments.
EHSampleSet load_samples(const std::string& path);
void save_samples(const EHSampleSet& samples, const std::string& path);

}  // namespace swipt
