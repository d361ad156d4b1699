#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dianet/cohort.hpp"
#include "dianet/rng.hpp"

namespace dianet {

// Architecture descriptor for the three model configurations. Unimodal models
// have one branch and no fusion stack; the multimodal model runs two branch
// stacks, concatenates their outputs and applies fusion layers. Hidden layers
// are affine -> ReLU -> dropout; the output is a single sigmoid unit.
struct ArchSpec {
    std::vector<int> input_dims;                  // per-branch input widths
    std::vector<std::vector<int>> branch_hidden;  // per-branch hidden widths
    std::vector<int> fusion_hidden;               // empty for unimodal models
    double dropout_rate = 0.2;

    void validate() const;
    std::size_t n_branches() const { return input_dims.size(); }
    // width of the vector feeding the output layer
    int head_input_width() const;
    // number of affine layers including the output layer
    std::size_t n_layers() const;
    // (in, out) of every affine layer in canonical order:
    // branch 0 stack, branch 1 stack, fusion stack, output layer
    std::vector<std::pair<int, int>> layer_dims() const;
};

// Default desk-scale architectures: two ReLU hidden layers per branch
// (32 -> 16) plus the sigmoid output; the fused model concatenates the two
// 16-wide branch outputs and adds one 16-wide fusion layer.
ArchSpec arch_unimodal(int input_dim, double dropout_rate = 0.2, int first_width = 32);
ArchSpec arch_fused(int crf_dim, int ecg_dim, double dropout_rate = 0.2, int first_width = 32);

struct LayerParams {
    Matrix w;                // out x in
    std::vector<double> b;   // out
};

struct ModelParams {
    ArchSpec arch;
    std::vector<LayerParams> layers;  // canonical order
};

struct TrainConfig {
    double learning_rate = 5e-4;
    double weight_decay = 5e-6;
    int epochs = 20;
    int batch_size = 16;
    double dropout_rate = 0.2;  // consumed by the arch factories
    std::uint64_t seed = 0;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    double prob_clip_eps = 1e-7;

    void validate() const;  // throws ConfigError
};

struct AdamState {
    std::vector<LayerParams> m;  // first moments, shaped like the params
    std::vector<LayerParams> v;  // second moments
    long t = 0;

    static AdamState zeros_like(const ModelParams& params);
};

enum class RunMode { Train, Eval };

struct ForwardCache {
    std::vector<std::vector<double>> inputs;   // per layer: input vector
    std::vector<std::vector<double>> preacts;  // per layer: z
    std::vector<std::vector<double>> masks;    // per layer: dropout scale, empty if none
    double prob = 0.0;
};

// Glorot-uniform weights (bound sqrt(6/(fan_in+fan_out))) drawn in canonical
// layer order, row-major; zero biases. Deterministic per seed.
ModelParams init_params(const ArchSpec& arch, std::uint64_t seed);

// Runs one sample through the network. Train mode draws inverted-dropout
// masks from `rng` (required when dropout_rate > 0).
ForwardCache forward(const ModelParams& params,
                     std::span<const std::vector<double>> inputs, RunMode mode,
                     Rng* rng = nullptr);

// Binary cross-entropy with the probability clipped into
// [clip_eps, 1 - clip_eps].
double bce_loss(double prob, int label, double clip_eps = 1e-7);

// Analytic gradients of bce_loss for the sample recorded in `cache`.
std::vector<LayerParams> backward(const ModelParams& params, const ForwardCache& cache,
                                  int label);

// Adam with L2 weight decay folded into the weight gradients (not biases):
// g' = g + wd*theta, moment updates, bias correction with t incremented
// first, theta -= lr * m_hat / (sqrt(v_hat) + eps).
void adam_step(ModelParams& params, const std::vector<LayerParams>& grads, AdamState& state,
               const TrainConfig& config);

// Mini-batch training: epoch shuffles and dropout masks come from a stream
// derived from config.seed, so results are bit-reproducible.
ModelParams train(std::span<const Matrix> branch_matrices, std::span<const int> labels,
                  const ArchSpec& arch, const TrainConfig& config);

// Eval-mode forward for every row.
std::vector<double> predict(const ModelParams& params,
                            std::span<const Matrix> branch_matrices);

nlohmann::json params_to_json(const ModelParams& params);
ModelParams params_from_json(const nlohmann::json& j);
nlohmann::json arch_to_json(const ArchSpec& arch);
ArchSpec arch_from_json(const nlohmann::json& j);

}  // namespace dianet
