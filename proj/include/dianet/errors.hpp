#pragma once

#include <stdexcept>
#include <string>

namespace dianet {

// Error taxonomy used across the library. The CLI maps these to exit codes:
// usage/config -> 2, input/parse -> 3, leakage -> 4, analysis precondition -> 5.

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LabelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TrainingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UndefinedMetricError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BootstrapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateVarianceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LeakageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StratificationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace dianet
