#include "dianet/preprocess.hpp"

#include <algorithm>
#include <map>

#include <nlohmann/json.hpp>

#include "dianet/errors.hpp"
#include "dianet/stats.hpp"

namespace dianet {

namespace {

std::vector<std::optional<double>> column_view(const MaybeMatrix& m, std::size_t c) {
    std::vector<std::optional<double>> col;
    col.reserve(m.size());
    for (const auto& row : m) col.push_back(row[c]);
    return col;
}

ColumnStats fit_continuous(const std::vector<std::optional<double>>& col, std::size_t index) {
    ColumnStats s;
    s.kind = FeatureKind::Continuous;

    std::vector<double> present;
    for (const auto& v : col) {
        if (v) present.push_back(*v);
    }
    if (present.empty()) {
        throw FitError("column " + std::to_string(index) + " has no present values");
    }
    s.impute_mean = mean(present);

    std::vector<double> imputed;
    imputed.reserve(col.size());
    for (const auto& v : col) imputed.push_back(v ? *v : s.impute_mean);

    std::vector<double> sorted = imputed;
    std::sort(sorted.begin(), sorted.end());
    s.q1 = quantile_sorted(sorted, 0.25);
    s.q3 = quantile_sorted(sorted, 0.75);
    const double iqr = s.q3 - s.q1;
    s.lower_fence = s.q1 - 1.5 * iqr;
    s.upper_fence = s.q3 + 1.5 * iqr;

    std::vector<double> in_fence;
    for (double v : imputed) {
        if (v >= s.lower_fence && v <= s.upper_fence) in_fence.push_back(v);
    }
    // quartiles lie inside their own fences, so in_fence is never empty
    s.clean_mean = mean(in_fence);

    double lo = 0.0;
    double hi = 0.0;
    for (std::size_t i = 0; i < imputed.size(); ++i) {
        const double v = imputed[i];
        const double cleaned = (v < s.lower_fence || v > s.upper_fence) ? s.clean_mean : v;
        lo = (i == 0) ? cleaned : std::min(lo, cleaned);
        hi = (i == 0) ? cleaned : std::max(hi, cleaned);
    }
    s.min = lo;
    s.max = hi;
    return s;
}

ColumnStats fit_categorical(const std::vector<std::optional<double>>& col, std::size_t index) {
    ColumnStats s;
    s.kind = FeatureKind::Categorical;

    std::map<double, std::size_t> counts;
    for (const auto& v : col) {
        if (v) ++counts[*v];
    }
    if (counts.empty()) {
        throw FitError("column " + std::to_string(index) + " has no present values");
    }
    // highest count, ties resolved toward the smallest value (map is ordered)
    double mode = counts.begin()->first;
    std::size_t best = counts.begin()->second;
    for (const auto& [value, count] : counts) {
        if (count > best) {
            best = count;
            mode = value;
        }
    }
    s.impute_mode = mode;

    double lo = counts.begin()->first;
    double hi = counts.rbegin()->first;
    // imputation cannot extend the range: the mode is an observed value
    s.min = lo;
    s.max = hi;
    return s;
}

}  // namespace

PreprocessorState fit_preprocessor(const MaybeMatrix& train,
                                   const std::vector<FeatureKind>& kinds) {
    if (train.size() < 2) throw FitError("fit_preprocessor needs at least 2 rows");
    const std::size_t d = kinds.size();
    for (const auto& row : train) {
        if (row.size() != d) throw DimensionError("fit_preprocessor: ragged matrix");
    }

    PreprocessorState state;
    state.columns.reserve(d);
    for (std::size_t c = 0; c < d; ++c) {
        const auto col = column_view(train, c);
        state.columns.push_back(kinds[c] == FeatureKind::Continuous
                                    ? fit_continuous(col, c)
                                    : fit_categorical(col, c));
    }
    return state;
}

Matrix apply_preprocessor(const PreprocessorState& state, const MaybeMatrix& matrix) {
    const std::size_t d = state.width();
    Matrix out;
    out.reserve(matrix.size());
    for (const auto& row : matrix) {
        if (row.size() != d) throw DimensionError("apply_preprocessor: width mismatch");
        std::vector<double> scaled(d);
        for (std::size_t c = 0; c < d; ++c) {
            const ColumnStats& s = state.columns[c];
            double v;
            if (s.kind == FeatureKind::Continuous) {
                v = row[c] ? *row[c] : s.impute_mean;
                if (v < s.lower_fence || v > s.upper_fence) v = s.clean_mean;
            } else {
                v = row[c] ? *row[c] : s.impute_mode;
            }
            const double range = s.max - s.min;
            double z = range > 0.0 ? (v - s.min) / range : 0.0;
            scaled[c] = std::clamp(z, 0.0, 1.0);
        }
        out.push_back(std::move(scaled));
    }
    return out;
}

nlohmann::json preprocessor_to_json(const PreprocessorState& state) {
    nlohmann::json cols = nlohmann::json::array();
    for (const auto& s : state.columns) {
        nlohmann::json j;
        if (s.kind == FeatureKind::Continuous) {
            j["kind"] = "continuous";
            j["impute_mean"] = s.impute_mean;
            j["q1"] = s.q1;
            j["q3"] = s.q3;
            j["lower_fence"] = s.lower_fence;
            j["upper_fence"] = s.upper_fence;
            j["clean_mean"] = s.clean_mean;
        } else {
            j["kind"] = "categorical";
            j["impute_mode"] = s.impute_mode;
        }
        j["min"] = s.min;
        j["max"] = s.max;
        cols.push_back(std::move(j));
    }
    return nlohmann::json{{"columns", std::move(cols)}};
}

PreprocessorState preprocessor_from_json(const nlohmann::json& j) {
    PreprocessorState state;
    for (const auto& c : j.at("columns")) {
        ColumnStats s;
        if (c.at("kind") == "continuous") {
            s.kind = FeatureKind::Continuous;
            s.impute_mean = c.at("impute_mean");
            s.q1 = c.at("q1");
            s.q3 = c.at("q3");
            s.lower_fence = c.at("lower_fence");
            s.upper_fence = c.at("upper_fence");
            s.clean_mean = c.at("clean_mean");
        } else {
            s.kind = FeatureKind::Categorical;
            s.impute_mode = c.at("impute_mode");
        }
        s.min = c.at("min");
        s.max = c.at("max");
        state.columns.push_back(s);
    }
    return state;
}

}  // namespace dianet
