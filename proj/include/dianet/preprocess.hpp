#pragma once

#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dianet/cohort.hpp"

namespace dianet {

// Per-column statistics fitted on training data. Continuous columns carry the
// full impute -> IQR-outlier-replace -> min-max pipeline; categorical columns
// carry mode imputation plus min-max bounds.
struct ColumnStats {
    FeatureKind kind = FeatureKind::Continuous;
    // continuous only
    double impute_mean = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double lower_fence = 0.0;
    double upper_fence = 0.0;
    double clean_mean = 0.0;
    // categorical only
    double impute_mode = 0.0;
    // both kinds
    double min = 0.0;
    double max = 0.0;
};

struct PreprocessorState {
    std::vector<ColumnStats> columns;

    std::size_t width() const { return columns.size(); }
};

// Fits the pipeline column by column:
//   continuous: impute mean of present values, quartiles of the imputed
//   column (linear-interpolation quantiles), fences at 1.5*IQR, mean of
//   in-fence values as the outlier replacement, then min/max of the column
//   after replacement.
//   categorical: most frequent present value (ties -> smallest), then min/max
//   of the imputed column.
// Requires n >= 2 rows and at least one present value per column.
PreprocessorState fit_preprocessor(const MaybeMatrix& train,
                                   const std::vector<FeatureKind>& kinds);

// Applies a fitted state: impute, replace out-of-fence values (continuous),
// scale to (x - min) / (max - min) and clip into [0, 1]. Constant columns
// (max == min) map to 0.
Matrix apply_preprocessor(const PreprocessorState& state, const MaybeMatrix& matrix);

nlohmann::json preprocessor_to_json(const PreprocessorState& state);
PreprocessorState preprocessor_from_json(const nlohmann::json& j);

}  // namespace dianet
