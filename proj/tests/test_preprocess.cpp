#include "doctest.h"

#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "dianet/errors.hpp"
#include "dianet/preprocess.hpp"
#include "dianet/rng.hpp"
#include "oracles.hpp"

using namespace dianet;

namespace {

MaybeMatrix column(const std::vector<std::optional<double>>& values) {
    MaybeMatrix m;
    for (const auto& v : values) m.push_back({v});
    return m;
}

constexpr auto kCont = FeatureKind::Continuous;
constexpr auto kCat = FeatureKind::Categorical;

}  // namespace

TEST_CASE("mean imputation uses present values only") {
    const auto state = fit_preprocessor(column({1.0, std::nullopt, 3.0}), {kCont});
    CHECK(state.columns[0].impute_mean == 2.0);
}

TEST_CASE("IQR fences and in-fence replacement mean on the worked column") {
    const auto state = fit_preprocessor(column({1.0, 2.0, 3.0, 4.0, 100.0}), {kCont});
    const auto& s = state.columns[0];
    // cross-checked against the independent quantile oracle
    CHECK(oracles::ref_quantile({1, 2, 3, 4, 100}, 0.25) == 2.0);
    CHECK(oracles::ref_quantile({1, 2, 3, 4, 100}, 0.75) == 4.0);
    CHECK(s.q1 == 2.0);
    CHECK(s.q3 == 4.0);
    CHECK(s.lower_fence == -1.0);
    CHECK(s.upper_fence == 7.0);
    CHECK(s.clean_mean == 2.5);  // mean of {1,2,3,4}
    CHECK(s.min == 1.0);
    CHECK(s.max == 4.0);  // 100 replaced by 2.5 before min/max
}

TEST_CASE("categorical mode imputation, ties toward the smaller value") {
    const auto state = fit_preprocessor(column({1.0, 0.0, 1.0, std::nullopt}), {kCat});
    CHECK(state.columns[0].impute_mode == 1.0);

    const auto tied = fit_preprocessor(column({1.0, 0.0}), {kCat});
    CHECK(tied.columns[0].impute_mode == 0.0);
}

TEST_CASE("min-max scaling endpoints, clipping and the constant-column rule") {
    const auto state = fit_preprocessor(column({0.0, 5.0, 10.0}), {kCont});

    SUBCASE("train endpoints map to 0 and 1") {
        const Matrix out = apply_preprocessor(state, column({0.0, 5.0, 10.0}));
        CHECK(out[0][0] == 0.0);
        CHECK(out[1][0] == 0.5);
        CHECK(out[2][0] == 1.0);
    }
    SUBCASE("value outside the trained range clips to 1") {
        const Matrix out = apply_preprocessor(state, column({12.0}));
        CHECK(out[0][0] == 1.0);
    }
    SUBCASE("constant training column maps everything to 0") {
        const auto constant = fit_preprocessor(column({7.0, 7.0, 7.0}), {kCont});
        const Matrix out = apply_preprocessor(constant, column({7.0, -3.0, 42.0}));
        CHECK(out[0][0] == 0.0);
        CHECK(out[1][0] == 0.0);
        CHECK(out[2][0] == 0.0);
    }
}

TEST_CASE("fit errors") {
    CHECK_THROWS_AS(fit_preprocessor(column({1.0}), {kCont}), FitError);  // n < 2
    CHECK_THROWS_WITH_AS(fit_preprocessor(column({std::nullopt, std::nullopt}), {kCont}),
                         doctest::Contains("column 0"), FitError);
    CHECK_THROWS_AS(fit_preprocessor(column({std::nullopt, std::nullopt}), {kCat}), FitError);
}

TEST_CASE("all outputs lie in [0,1] and apply is deterministic") {
    Rng rng(21);
    MaybeMatrix train;
    MaybeMatrix test;
    const std::vector<FeatureKind> kinds = {kCont, kCont, kCat};
    for (int r = 0; r < 60; ++r) {
        auto draw = [&rng](bool categorical) -> std::optional<double> {
            if (rng.next_bernoulli(0.1)) return std::nullopt;
            if (categorical) return rng.next_bernoulli(0.6) ? 1.0 : 0.0;
            return rng.next_normal(50.0, 20.0);
        };
        train.push_back({draw(false), draw(false), draw(true)});
        test.push_back({draw(false), draw(false), draw(true)});
    }
    const auto state = fit_preprocessor(train, kinds);
    const Matrix out1 = apply_preprocessor(state, test);
    const Matrix out2 = apply_preprocessor(state, test);
    CHECK(out1 == out2);
    for (const auto& row : out1) {
        for (double v : row) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
    // applying to the training matrix twice matches itself as well
    CHECK(apply_preprocessor(state, train) == apply_preprocessor(state, train));
}

TEST_CASE("clean data reduces the pipeline to plain min-max scaling") {
    // values kept well inside the fences, no missing cells
    Rng rng(33);
    MaybeMatrix train;
    for (int r = 0; r < 50; ++r) {
        train.push_back({50.0 + 10.0 * rng.next_double()});
    }
    const auto state = fit_preprocessor(train, {kCont});
    double lo = *train[0][0];
    double hi = lo;
    for (const auto& row : train) {
        lo = std::min(lo, *row[0]);
        hi = std::max(hi, *row[0]);
    }
    const Matrix out = apply_preprocessor(state, train);
    for (std::size_t r = 0; r < train.size(); ++r) {
        const double direct = (*train[r][0] - lo) / (hi - lo);
        CHECK(out[r][0] == doctest::Approx(direct).epsilon(1e-15));
    }
}

TEST_CASE("fitting never reads held-out rows") {
    Rng rng(44);
    MaybeMatrix train;
    MaybeMatrix test;
    for (int r = 0; r < 30; ++r) train.push_back({rng.next_normal(0, 1), rng.next_normal(5, 2)});
    for (int r = 0; r < 10; ++r) test.push_back({rng.next_normal(0, 1), rng.next_normal(5, 2)});

    const auto state = fit_preprocessor(train, {kCont, kCont});
    test[3][0] = 1e9;  // mutate a held-out row
    test[5][1].reset();
    const auto state_after = fit_preprocessor(train, {kCont, kCont});
    CHECK(preprocessor_to_json(state).dump() == preprocessor_to_json(state_after).dump());
}

TEST_CASE("state serializes to JSON and back") {
    const auto state = fit_preprocessor(
        MaybeMatrix{{1.0, 1.0}, {2.0, 0.0}, {3.0, std::nullopt}, {100.0, 1.0}}, {kCont, kCat});
    const auto j = preprocessor_to_json(state);
    const auto back = preprocessor_from_json(j);
    CHECK(preprocessor_to_json(back) == j);
    CHECK(back.columns.size() == 2);
    CHECK(back.columns[1].kind == FeatureKind::Categorical);

    // applying the deserialized state gives identical output
    const MaybeMatrix probe{{std::nullopt, std::nullopt}, {50.0, 1.0}};
    CHECK(apply_preprocessor(state, probe) == apply_preprocessor(back, probe));
}
