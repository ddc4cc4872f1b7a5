#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "swipt/eh_model.hpp"

using namespace swipt;

namespace {

std::string data_path(const std::string& name) {
    return std::string(SWIPT_DATA_DIR) + "/" + name;
}

// Synthetic N=3 model whose third segment recovers above its first peak, so the
// re-entry point of the monotone restriction exists.
PiecewiseEHModel synthetic_three_segment() {
    LogisticSegment s1{1.0, 0.0, 5.0, 1.5, 1.0, 0.0, 1.0};
    LogisticSegment s2{0.2, s1.value(1.0), 4.0, 1.2, 0.8, 1.0, 1.5};
    LogisticSegment s3{2.0, s2.value(1.5), 3.0, 1.3, 0.9, 1.5, 3.0};
    return PiecewiseEHModel({s1, s2, s3});
}

// Independent bisection, sharing nothing with the library implementation.
double bisect_oracle(const std::function<double(double)>& f, double lo, double hi,
                     double target) {
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("evaluate at zero and at junctions") {
    const auto model = load_model(data_path("rtd_baseline.ehm"));
    CHECK(model.evaluate(0.0) == 0.0);
    const auto& segs = model.segments();
    // Continuity from both sides of every junction.
    for (std::size_t i = 0; i + 1 < segs.size(); ++i) {
        const double left = segs[i].value(segs[i].rho_end);
        const double right = segs[i + 1].value(segs[i + 1].rho_start);
        CHECK(std::abs(left - right) <= 1e-12 * std::max(left, right));
        CHECK(model.junction_value(i) == doctest::Approx(left).epsilon(1e-15));
    }
}

TEST_CASE("evaluate golden value on the baseline model") {
    const auto model = load_model(data_path("rtd_baseline.ehm"));
    // Single-expression evaluation of the first logistic piece at rho = 1.0 mW,
    // frozen from an independent 40-digit computation.
    CHECK(model.evaluate(1.0e-3) == doctest::Approx(7.14187700656736e-5).epsilon(1e-12));
    // Peak harvested power of this design.
    CHECK(model.junction_value(0) == doctest::Approx(7.15058283395e-5).epsilon(1e-11));
}

TEST_CASE("evaluate rejects the breakdown region") {
    const auto model = load_model(data_path("rtd_baseline.ehm"));
    CHECK_THROWS_AS(model.evaluate(-1e-6), std::domain_error);
    CHECK_THROWS_AS(model.evaluate(model.rho_max() * 1.01), std::domain_error);
}

TEST_CASE("segment parity monotonicity on a fine grid") {
    for (const char* name : {"rtd_baseline.ehm", "rtd_low_leakage.ehm", "rtd_high_breakdown.ehm"}) {
        const auto model = load_model(data_path(name));
        const double step = 1e-3 * model.rho_max();
        for (std::size_t i = 0; i < model.segment_count(); ++i) {
            const auto& seg = model.segments()[i];
            double prev = seg.value(seg.rho_start);
            for (double rho = seg.rho_start + step; rho <= seg.rho_end; rho += step) {
                const double v = seg.value(rho);
                if (i % 2 == 0) {
                    CHECK(v >= prev);
                } else {
                    CHECK(v <= prev);
                }
                prev = v;
            }
        }
    }
}

TEST_CASE("construction rejects invalid models") {
    LogisticSegment inc{1.0, 0.0, 5.0, 1.5, 1.0, 0.0, 1.0};
    // Decreasing first segment.
    LogisticSegment dec_first{0.0, 0.0, 5.0, 1.5, 1.0, 0.0, 1.0};
    CHECK_THROWS_AS(PiecewiseEHModel({dec_first}), std::invalid_argument);
    // Gap between segments.
    LogisticSegment gap{0.1, inc.value(1.0), 4.0, 1.2, 0.8, 1.2, 1.5};
    CHECK_THROWS_AS(PiecewiseEHModel({inc, gap}), std::invalid_argument);
    // Value jump at the junction.
    LogisticSegment jump{0.1, 0.5 * inc.value(1.0), 4.0, 1.2, 0.8, 1.0, 1.5};
    CHECK_THROWS_AS(PiecewiseEHModel({inc, jump}), std::invalid_argument);
    // Non-positive shape parameter.
    LogisticSegment bad{1.0, 0.0, -5.0, 1.5, 1.0, 0.0, 1.0};
    CHECK_THROWS_AS(PiecewiseEHModel({bad}), std::invalid_argument);
}

TEST_CASE("to_monotone keeps a single increasing segment unchanged") {
    LogisticSegment s{1.0, 0.0, 5.0, 1.5, 1.0, 0.0, 1.0};
    const auto mono = to_monotone(PiecewiseEHModel({s}));
    CHECK(mono.retained_count() == 1);
    CHECK(mono.pieces()[0].rho_lo == 0.0);
    CHECK(mono.pieces()[0].rho_hi == 1.0);
    CHECK(mono.evaluate(0.7) == doctest::Approx(s.value(0.7)).epsilon(1e-15));
}

TEST_CASE("to_monotone on N=2 models keeps only the rising part") {
    for (const char* name : {"rtd_baseline.ehm", "rtd_low_leakage.ehm"}) {
        const auto model = load_model(data_path(name));
        const auto mono = to_monotone(model);
        CHECK(mono.retained_count() == 1);
        CHECK(mono.domain_sup() == doctest::Approx(model.segments()[0].rho_end));
        CHECK(mono.max_value() == doctest::Approx(model.junction_value(0)).epsilon(1e-12));
        CHECK_FALSE(mono.contains(0.5 * (model.segments()[0].rho_end + model.rho_max())));
    }
}

TEST_CASE("to_monotone re-enters the recovering third segment") {
    const auto model = synthetic_three_segment();
    const auto mono = to_monotone(model);
    REQUIRE(mono.retained_count() == 2);
    const double phi1 = model.junction_value(0);
    const auto& seg3 = model.segments()[2];
    const double rho_hat = bisect_oracle([&](double r) { return seg3.value(r); }, 1.5, 3.0, phi1);
    CHECK(mono.pieces()[1].rho_lo == doctest::Approx(rho_hat).epsilon(1e-10));
    CHECK(mono.evaluate(mono.pieces()[1].rho_lo) == doctest::Approx(phi1).epsilon(1e-9));
    // psi_hat == psi pointwise on the retained domain.
    for (double rho : {0.1, 0.5, 0.93, 2.2, 2.8, 3.0}) {
        if (!mono.contains(rho)) continue;
        CHECK(mono.evaluate(rho) == doctest::Approx(model.evaluate(rho)).epsilon(1e-14));
    }
    // Strict increase across the whole (disconnected) domain.
    double prev = -1.0;
    for (double rho = 0.0; rho <= 3.0; rho += 1e-3) {
        if (!mono.contains(rho)) continue;
        const double v = mono.evaluate(rho);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("to_monotone drops a third segment that never recovers") {
    const auto model = load_model(data_path("rtd_high_breakdown.ehm"));
    // This design's third piece tops out below the first peak, so it cannot be
    // part of any increasing restriction.
    CHECK(model.junction_value(2) < model.junction_value(0));
    const auto mono = to_monotone(model);
    CHECK(mono.retained_count() == 1);
    CHECK(mono.domain_sup() == doctest::Approx(model.segments()[0].rho_end));
}

TEST_CASE("invert round trips on the retained domain") {
    const auto model = synthetic_three_segment();
    const auto mono = to_monotone(model);
    CHECK(mono.invert(0.0) == 0.0);
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> uni(0.0, 3.0);
    int tested = 0;
    while (tested < 1000) {
        const double rho = uni(rng);
        if (!mono.contains(rho)) continue;
        ++tested;
        const double back = mono.invert(mono.evaluate(rho));
        CHECK(back == doctest::Approx(rho).epsilon(1e-9));
    }
    CHECK_THROWS_AS(mono.invert(mono.max_value() * 1.01), std::out_of_range);
}

TEST_CASE("invert jumps across the excluded interval") {
    const auto model = synthetic_three_segment();
    const auto mono = to_monotone(model);
    const double phi1 = model.junction_value(0);
    const double p = phi1 * 1.02;
    const double rho = mono.invert(p);
    CHECK(rho >= mono.pieces()[1].rho_lo);
    CHECK(rho <= mono.pieces()[1].rho_hi);
    // Dense-grid preimage oracle on the forward curve.
    double best_rho = 0.0, best_err = 1e300;
    for (double r = 0.0; r <= 3.0; r += 1e-6) {
        if (!mono.contains(r)) continue;
        const double err = std::abs(mono.evaluate(r) - p);
        if (err < best_err) {
            best_err = err;
            best_rho = r;
        }
    }
    CHECK(rho == doctest::Approx(best_rho).epsilon(1e-5));
}

TEST_CASE("max_harvested_power matches a dense grid search") {
    for (const char* name : {"rtd_baseline.ehm", "rtd_low_leakage.ehm", "rtd_high_breakdown.ehm"}) {
        const auto model = load_model(data_path(name));
        for (double frac : {0.3, 0.77, 1.0}) {
            const double rho_ub = frac * model.rho_max();
            const double got = max_harvested_power(model, rho_ub);
            double grid_max = 0.0;
            for (int i = 0; i <= 100000; ++i) {
                grid_max = std::max(grid_max, model.evaluate(rho_ub * i / 100000.0));
            }
            CHECK(got >= grid_max * (1.0 - 1e-12));
            CHECK(got <= grid_max * (1.0 + 1e-6) + 1e-300);
        }
    }
}

TEST_CASE("max_harvested_power inside the first segment is the endpoint value") {
    const auto model = load_model(data_path("rtd_baseline.ehm"));
    const double rho_ub = 0.4 * model.segments()[0].rho_end;
    CHECK(max_harvested_power(model, rho_ub) ==
          doctest::Approx(model.evaluate(rho_ub)).epsilon(1e-15));
    // At rho_max of an N=2 model the peak sits at the first junction.
    CHECK(max_harvested_power(model, model.rho_max()) ==
          doctest::Approx(model.junction_value(0)).epsilon(1e-15));
}

TEST_CASE("fit recovers the baseline curve from exact samples") {
    const auto truth = load_model(data_path("rtd_baseline.ehm"));
    EHSampleSet samples;
    const int n = 500;
    for (int i = 0; i <= n; ++i) {
        const double rho = truth.rho_max() * i / n;
        samples.rho.push_back(rho);
        samples.harvested.push_back(truth.evaluate(rho));
    }
    samples.breakpoints = {truth.segments()[0].rho_end};
    FitReport report;
    const auto fitted = fit(samples, 2, {}, &report);
    double sse = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double rho = truth.rho_max() * i / n;
        const double d = fitted.evaluate(rho) - truth.evaluate(rho);
        sse += d * d;
    }
    const double rms = std::sqrt(sse / (n + 1));
    CHECK(rms <= 0.005 * truth.junction_value(0));
}

TEST_CASE("fit of single-segment synthetic data") {
    // B = 1 mW, alpha = 1.5, beta = 0.5, theta = 1000 (per-mW), Phi_0 = 0.
    LogisticSegment s{1e-3, 0.0, 1000.0 * std::pow(1e-3, -1.5), 1.5, 0.5, 0.0, 3e-3};
    EHSampleSet samples;
    for (int i = 0; i <= 400; ++i) {
        const double rho = 3e-3 * i / 400.0;
        samples.rho.push_back(rho);
        samples.harvested.push_back(s.value(rho));
    }
    const auto fitted = fit(samples, 1);
    double worst = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double rho = 3e-3 * i / 400.0;
        worst = std::max(worst, std::abs(fitted.evaluate(rho) - s.value(rho)));
    }
    CHECK(worst <= 1e-3 * s.asymptote);
}

TEST_CASE("fit detects breakpoints from the slope sign change") {
    const auto truth = load_model(data_path("rtd_baseline.ehm"));
    EHSampleSet samples;
    for (int i = 0; i <= 600; ++i) {
        const double rho = truth.rho_max() * i / 600.0;
        samples.rho.push_back(rho);
        samples.harvested.push_back(truth.evaluate(rho));
    }
    const auto fitted = fit(samples, 2);  // no breakpoints given
    CHECK(fitted.segment_count() == 2);
    CHECK(fitted.segments()[0].rho_end ==
          doctest::Approx(truth.segments()[0].rho_end).epsilon(0.05));
}

TEST_CASE("fit rejects degenerate input") {
    EHSampleSet zeros;
    for (int i = 0; i <= 50; ++i) {
        zeros.rho.push_back(i * 1e-4);
        zeros.harvested.push_back(0.0);
    }
    CHECK_THROWS_AS(fit(zeros, 1), FitError);
}

TEST_CASE("model file save/load round trip") {
    const auto model = synthetic_three_segment();
    const auto tmp = std::filesystem::temp_directory_path() / "swipt_model_roundtrip.ehm";
    save_model(model, tmp.string(), "synthetic test model");
    const auto back = load_model(tmp.string());
    REQUIRE(back.segment_count() == model.segment_count());
    for (double rho = 0.0; rho <= 3.0; rho += 0.01) {
        CHECK(back.evaluate(rho) == doctest::Approx(model.evaluate(rho)).epsilon(1e-12));
    }
    std::filesystem::remove(tmp);
}

TEST_CASE("sample CSV round trip and error handling") {
    EHSampleSet set;
    for (int i = 0; i < 20; ++i) {
        set.rho.push_back(i * 1e-4);
        set.harvested.push_back(std::sin(i * 0.1) * 1e-5 + 2e-5);
    }
    const auto tmp = std::filesystem::temp_directory_path() / "swipt_samples_roundtrip.csv";
    save_samples(set, tmp.string());
    const auto back = load_samples(tmp.string());
    REQUIRE(back.rho.size() == set.rho.size());
    for (std::size_t i = 0; i < set.rho.size(); ++i) {
        CHECK(back.harvested[i] == doctest::Approx(set.harvested[i]).epsilon(1e-15));
    }
    std::filesystem::remove(tmp);
    CHECK_THROWS(load_samples("/nonexistent/file.csv"));
}
