#include "swipt/eh_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "swipt/specfun.hpp"

namespace swipt {

double LogisticSegment::value(double rho) const {
    const double d = rho - rho_start;
    // exp/log1p form keeps precision near the junction and underflows cleanly
    // to the asymptote deep into saturation.
    const double t = theta * std::pow(d, alpha);
    const double shrink = std::exp(-beta * std::log1p(t));
    return asymptote + (start_value - asymptote) * shrink;
}

namespace {

void validate_segment(const LogisticSegment& s, std::size_t index) {
    if (!(s.alpha > 0.0) || !(s.beta > 0.0) || !(s.theta > 0.0)) {
        throw std::invalid_argument("EH segment " + std::to_string(index) +
                                    ": alpha, beta, theta must be positive");
    }
    if (!(s.rho_start < s.rho_end)) {
        throw std::invalid_argument("EH segment " + std::to_string(index) +
                                    ": rho_start must be < rho_end");
    }
    const bool should_increase = index % 2 == 0;
    if (s.increasing() != should_increase) {
        throw std::invalid_argument("EH segment " + std::to_string(index) +
                                    ": wrong monotonicity direction for its parity");
    }
}

}  // namespace

PiecewiseEHModel::PiecewiseEHModel(std::vector<LogisticSegment> segments)
    : segments_(std::move(segments)) {
    if (segments_.empty()) throw std::invalid_argument("EH model needs >= 1 segment");
    if (segments_.front().rho_start != 0.0) {
        throw std::invalid_argument("EH model must start at rho = 0");
    }
    if (segments_.front().start_value != 0.0) {
        throw std::invalid_argument("EH model must start at harvested power 0");
    }
    junctions_.push_back(0.0);
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        validate_segment(segments_[i], i);
        if (i > 0) {
            if (segments_[i].rho_start != segments_[i - 1].rho_end) {
                throw std::invalid_argument("EH segments must be contiguous");
            }
            const double left = junctions_.back();
            const double right = segments_[i].start_value;
            const double scale = std::max({std::abs(left), std::abs(right), 1e-300});
            if (std::abs(left - right) > 1e-12 * scale) {
                throw std::invalid_argument("EH model discontinuous at junction " +
                                            std::to_string(i));
            }
        }
        junctions_.push_back(segments_[i].value(segments_[i].rho_end));
    }
    // Valley ordering Phi_0 <= Phi_2 <= ...; the peak chain is left unchecked,
    // to_monotone drops peaks that never get re-reached.
    for (std::size_t n = 0; n + 2 < junctions_.size(); n += 2) {
        if (junctions_[n] > junctions_[n + 2] * (1.0 + 1e-12) + 1e-300) {
            throw std::invalid_argument("EH model valley chain must be non-decreasing");
        }
    }
}

double PiecewiseEHModel::evaluate(double rho) const {
    if (!(rho >= 0.0) || rho > rho_max() * (1.0 + 1e-12)) {
        throw std::domain_error("EH model: rho outside [0, rho_max]");
    }
    rho = std::min(rho, rho_max());
    for (std::size_t i = 0; i + 1 < segments_.size(); ++i) {
        if (rho < segments_[i].rho_end) return segments_[i].value(rho);
    }
    return segments_.back().value(rho);
}

MonotoneEHModel::MonotoneEHModel(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
    if (pieces_.empty()) throw std::invalid_argument("monotone EH model needs >= 1 piece");
}

bool MonotoneEHModel::contains(double rho) const {
    for (const auto& p : pieces_) {
        if (rho >= p.rho_lo && (rho < p.rho_hi || (p.closed_right && rho <= p.rho_hi))) {
            return true;
        }
    }
    return false;
}

double MonotoneEHModel::evaluate(double rho) const {
    for (const auto& p : pieces_) {
        if (rho >= p.rho_lo && (rho < p.rho_hi || (p.closed_right && rho <= p.rho_hi))) {
            return p.segment.value(rho);
        }
    }
    throw std::domain_error("monotone EH model: rho outside the retained domain");
}

double MonotoneEHModel::max_value() const {
    const auto& last = pieces_.back();
    return last.segment.value(last.rho_hi);
}

double MonotoneEHModel::domain_sup() const { return pieces_.back().rho_hi; }

double MonotoneEHModel::invert(double p) const {
    if (!(p >= 0.0)) throw std::out_of_range("monotone EH model: negative power");
    const double top = max_value();
    if (p > top * (1.0 + 1e-9) + 1e-300) {
        throw std::out_of_range("monotone EH model: power above the model maximum");
    }
    p = std::min(p, top);
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const auto& piece = pieces_[i];
        const double v_lo = piece.segment.value(piece.rho_lo);
        const double v_hi = piece.segment.value(piece.rho_hi);
        const bool last = i + 1 == pieces_.size();
        // Half-open pieces do not attain their supremum; the junction level
        // belongs to the next piece.
        if (p < v_hi || (last && p <= v_hi)) {
            if (p <= v_lo) return piece.rho_lo;
            double lo = piece.rho_lo, hi = piece.rho_hi;
            for (int iter = 0; iter < 120 && hi - lo > 0.0; ++iter) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                if (piece.segment.value(mid) < p) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return 0.5 * (lo + hi);
        }
    }
    return pieces_.back().rho_hi;
}

MonotoneEHModel to_monotone(const PiecewiseEHModel& model) {
    std::vector<MonotoneEHModel::Piece> pieces;
    const auto& segs = model.segments();

    // Segment 0 always enters; later increasing segments enter where they
    // first exceed the running retained peak.
    double peak = segs[0].value(segs[0].rho_end);
    pieces.push_back({segs[0].rho_start, segs[0].rho_end, false, segs[0]});

    for (std::size_t i = 2; i < segs.size(); i += 2) {
        const LogisticSegment& seg = segs[i];
        const double top = seg.value(seg.rho_end);
        if (!(top > peak)) continue;  // never recovers above the previous peak
        double entry = seg.rho_start;
        if (seg.value(seg.rho_start) < peak) {
            entry = specfun::bisect([&seg](double rho) { return seg.value(rho); },
                                    seg.rho_start, seg.rho_end, peak, 1e-15);
        }
        pieces.push_back({entry, seg.rho_end, false, seg});
        peak = top;
    }
    pieces.back().closed_right = true;
    return MonotoneEHModel(std::move(pieces));
}

double max_harvested_power(const PiecewiseEHModel& model, double rho_ub) {
    if (!(rho_ub >= 0.0) || rho_ub > model.rho_max() * (1.0 + 1e-12)) {
        throw std::domain_error("max_harvested_power: rho_ub outside [0, rho_max]");
    }
    rho_ub = std::min(rho_ub, model.rho_max());
    double best = model.evaluate(rho_ub);
    for (const auto& seg : model.segments()) {
        if (seg.increasing() && seg.rho_end <= rho_ub) {
            best = std::max(best, seg.value(seg.rho_end));
        }
    }
    return best;
}

}  // namespace swipt
