#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "dianet/errors.hpp"
#include "dianet/metrics.hpp"
#include "dianet/rng.hpp"
#include "oracles.hpp"

using namespace dianet;

namespace {
const std::vector<double> kProbs = {0.1, 0.4, 0.35, 0.8};
const std::vector<int> kLabels = {0, 0, 1, 1};
}  // namespace

TEST_CASE("auroc on the worked example and degenerate cases") {
    CHECK(auroc(kProbs, kLabels) == 0.75);
    CHECK(auroc(std::vector<double>{0.3, 0.3, 0.3}, std::vector<int>{1, 0, 1}) == 0.5);
    CHECK(auroc(std::vector<double>{0.9, 0.8, 0.2, 0.1}, std::vector<int>{1, 1, 0, 0}) == 1.0);
    CHECK_THROWS_AS(auroc(std::vector<double>{0.1, 0.2}, std::vector<int>{1, 1}),
                    UndefinedMetricError);
}

TEST_CASE("auroc equals the pair-counting oracle exactly, ties included") {
    Rng rng(101);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto ps = oracles::random_predset(rng, 200);
        const double fast = auroc(ps.probs, ps.labels);
        const double slow = oracles::pair_auroc(ps.probs, ps.labels);
        CHECK(fast == slow);
    }
}

TEST_CASE("auroc invariances") {
    Rng rng(102);
    for (int trial = 0; trial < 50; ++trial) {
        const auto ps = oracles::random_predset(rng, 100);
        const double base = auroc(ps.probs, ps.labels);

        // strictly increasing transform
        std::vector<double> squashed;
        for (double p : ps.probs) squashed.push_back(1.0 / (1.0 + std::exp(-(3.0 * p + 1.0))));
        CHECK(auroc(squashed, ps.labels) == doctest::Approx(base).epsilon(1e-12));

        // score flip
        std::vector<double> flipped;
        for (double p : ps.probs) flipped.push_back(1.0 - p);
        CHECK(auroc(flipped, ps.labels) == doctest::Approx(1.0 - base).epsilon(1e-12));
    }
}

TEST_CASE("auprc by step summation") {
    CHECK(auprc(std::vector<double>{0.9, 0.1}, std::vector<int>{1, 0}) == 1.0);
    CHECK(auprc(kProbs, kLabels) == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
    CHECK(auprc(std::vector<double>{0.9, 0.1}, std::vector<int>{0, 1}) == 0.5);
    CHECK_THROWS_AS(auprc(std::vector<double>{0.1}, std::vector<int>{0}), UndefinedMetricError);
}

TEST_CASE("confusion at a threshold, undefined ratios flagged") {
    SUBCASE("perfect predictions") {
        const auto c = confusion_at_threshold(std::vector<double>{0.9, 0.8, 0.2, 0.1},
                                              std::vector<int>{1, 1, 0, 0}, 0.5);
        CHECK(*c.sensitivity == 1.0);
        CHECK(*c.specificity == 1.0);
        CHECK(*c.ppv == 1.0);
        CHECK(*c.npv == 1.0);
        CHECK(*c.f1 == 1.0);
        CHECK(*c.accuracy == 1.0);
    }
    SUBCASE("no negatives present") {
        const auto c = confusion_at_threshold(std::vector<double>{0.6, 0.4},
                                              std::vector<int>{1, 1}, 0.5);
        CHECK(*c.sensitivity == 0.5);
        CHECK_FALSE(c.specificity.has_value());
        CHECK(*c.ppv == 1.0);
        CHECK(*c.npv == 0.0);
    }
    SUBCASE("worked example at t = 0.35") {
        const auto c = confusion_at_threshold(kProbs, kLabels, 0.35);
        CHECK(*c.sensitivity == 1.0);
        CHECK(*c.specificity == 0.5);
        CHECK(*c.ppv == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    }
    SUBCASE("extreme thresholds") {
        const auto low =
            confusion_at_threshold(kProbs, kLabels, -std::numeric_limits<double>::infinity());
        CHECK(*low.sensitivity == 1.0);
        const auto high =
            confusion_at_threshold(kProbs, kLabels, std::numeric_limits<double>::infinity());
        CHECK(*high.specificity == 1.0);
    }
}

TEST_CASE("youden threshold with smallest-threshold tie breaking") {
    CHECK(youden_threshold(kProbs, kLabels) == 0.35);  // J = 0.5 tie with 0.8

    // perfectly separated: smallest positive score wins
    CHECK(youden_threshold(std::vector<double>{0.9, 0.7, 0.2, 0.1},
                           std::vector<int>{1, 1, 0, 0}) == 0.7);

    // all scores equal: that value, J = 0
    CHECK(youden_threshold(std::vector<double>{0.4, 0.4, 0.4},
                           std::vector<int>{1, 0, 1}) == 0.4);

    CHECK_THROWS_AS(youden_threshold(std::vector<double>{0.5}, std::vector<int>{1}),
                    UndefinedMetricError);
}

TEST_CASE("brier score") {
    CHECK(brier(std::vector<double>{1.0, 0.0}, std::vector<int>{1, 0}) == 0.0);
    CHECK(brier(std::vector<double>{0.5, 0.5}, std::vector<int>{1, 0}) == 0.25);
    CHECK(brier(std::vector<double>{0.8, 0.3}, std::vector<int>{1, 0}) ==
          doctest::Approx(0.065).epsilon(1e-15));
}

TEST_CASE("constant predictor brier is minimized at the prevalence") {
    const std::vector<int> labels = {1, 1, 1, 0, 0, 0, 0, 0, 0, 0};  // prevalence 0.3
    double best_c = -1.0;
    double best = 1e9;
    for (int g = 0; g <= 100; ++g) {
        const double c = g / 100.0;
        const double b = brier(std::vector<double>(labels.size(), c), labels);
        if (b < best) {
            best = b;
            best_c = c;
        }
    }
    CHECK(best_c == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("calibration bins") {
    SUBCASE("all predictions in one bin") {
        const auto curve = calibration_bins(std::vector<double>{0.52, 0.54, 0.56, 0.58},
                                            std::vector<int>{1, 0, 1, 0}, 10);
        REQUIRE(curve.bins.size() == 1);
        CHECK(curve.bins[0].mean_pred == doctest::Approx(0.55).epsilon(1e-12));
        CHECK(curve.bins[0].frac_pos == 0.5);
        CHECK(curve.bins[0].count == 4);
    }
    SUBCASE("two bins with exact occupancy") {
        const auto curve =
            calibration_bins(std::vector<double>{0.1, 0.9}, std::vector<int>{0, 1}, 2);
        REQUIRE(curve.bins.size() == 2);
        CHECK(curve.bins[0].mean_pred == 0.1);
        CHECK(curve.bins[0].frac_pos == 0.0);
        CHECK(curve.bins[1].mean_pred == 0.9);
        CHECK(curve.bins[1].frac_pos == 1.0);
    }
    SUBCASE("counts sum to n and prob 1.0 lands in the last bin") {
        const auto curve = calibration_bins(std::vector<double>{0.0, 0.3, 1.0, 1.0},
                                            std::vector<int>{0, 0, 1, 1}, 10);
        std::size_t total = 0;
        for (const auto& b : curve.bins) total += b.count;
        CHECK(total == 4);
    }
    SUBCASE("calibrated labels land near the diagonal") {
        Rng rng(77);
        std::vector<double> probs;
        std::vector<int> labels;
        for (int i = 0; i < 100000; ++i) {
            const double p = rng.next_double();
            probs.push_back(p);
            labels.push_back(rng.next_bernoulli(p) ? 1 : 0);
        }
        const auto curve = calibration_bins(probs, labels, 10);
        for (const auto& b : curve.bins) {
            if (b.count >= 1000) {
                CHECK(std::abs(b.frac_pos - b.mean_pred) < 0.02);
            }
        }
    }
}

TEST_CASE("roc curve shape and agreement with auroc") {
    Rng rng(55);
    for (int trial = 0; trial < 20; ++trial) {
        const auto ps = oracles::random_predset(rng, 80);
        const auto curve = roc_curve(ps.probs, ps.labels);
        REQUIRE(curve.points.size() >= 2);
        CHECK(curve.points.front().fpr == 0.0);
        CHECK(curve.points.front().tpr == 0.0);
        CHECK(curve.points.back().fpr == 1.0);
        CHECK(curve.points.back().tpr == 1.0);
        double trapezoid = 0.0;
        for (std::size_t i = 1; i < curve.points.size(); ++i) {
            CHECK(curve.points[i].fpr >= curve.points[i - 1].fpr);
            CHECK(curve.points[i].tpr >= curve.points[i - 1].tpr);
            trapezoid += (curve.points[i].fpr - curve.points[i - 1].fpr) *
                         (curve.points[i].tpr + curve.points[i - 1].tpr) / 2.0;
        }
        CHECK(curve.auroc == doctest::Approx(trapezoid).epsilon(1e-12));
        CHECK(curve.auroc == auroc(ps.probs, ps.labels));
    }
}

TEST_CASE("pr curve ends at recall 1 and matches auprc") {
    const auto curve = pr_curve(kProbs, kLabels);
    CHECK(curve.points.back().recall == 1.0);
    CHECK(curve.auprc == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
}
