#include "dianet/net.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "dianet/errors.hpp"

namespace dianet {

void ArchSpec::validate() const {
    const std::size_t branches = input_dims.size();
    if (branches != 1 && branches != 2) {
        throw ConfigError("arch must have 1 or 2 branches");
    }
    if (branch_hidden.size() != branches) {
        throw ConfigError("branch_hidden must match input_dims");
    }
    if (branches == 1 && !fusion_hidden.empty()) {
        throw ConfigError("unimodal arch must have no fusion layers");
    }
    if (branches == 2 && fusion_hidden.empty()) {
        throw ConfigError("multimodal arch needs at least one fusion layer");
    }
    for (int d : input_dims) {
        if (d < 1) throw ConfigError("input width must be >= 1");
    }
    for (const auto& stack : branch_hidden) {
        for (int w : stack) {
            if (w < 1) throw ConfigError("hidden width must be >= 1");
        }
    }
    for (int w : fusion_hidden) {
        if (w < 1) throw ConfigError("fusion width must be >= 1");
    }
    if (dropout_rate < 0.0 || dropout_rate >= 1.0) {
        throw ConfigError("dropout_rate must be in [0, 1)");
    }
}

int ArchSpec::head_input_width() const {
    if (!fusion_hidden.empty()) return fusion_hidden.back();
    int concat = 0;
    for (std::size_t b = 0; b < input_dims.size(); ++b) {
        concat += branch_hidden[b].empty() ? input_dims[b] : branch_hidden[b].back();
    }
    return concat;
}

std::size_t ArchSpec::n_layers() const {
    std::size_t n = fusion_hidden.size() + 1;
    for (const auto& stack : branch_hidden) n += stack.size();
    return n;
}

std::vector<std::pair<int, int>> ArchSpec::layer_dims() const {
    std::vector<std::pair<int, int>> dims;
    int concat = 0;
    for (std::size_t b = 0; b < input_dims.size(); ++b) {
        int in = input_dims[b];
        for (int w : branch_hidden[b]) {
            dims.emplace_back(in, w);
            in = w;
        }
        concat += in;
    }
    int in = concat;
    for (int w : fusion_hidden) {
        dims.emplace_back(in, w);
        in = w;
    }
    dims.emplace_back(in, 1);  // sigmoid output
    return dims;
}

ArchSpec arch_unimodal(int input_dim, double dropout_rate, int first_width) {
    ArchSpec a;
    a.input_dims = {input_dim};
    a.branch_hidden = {{first_width, first_width / 2}};
    a.fusion_hidden = {};
    a.dropout_rate = dropout_rate;
    a.validate();
    return a;
}

ArchSpec arch_fused(int crf_dim, int ecg_dim, double dropout_rate, int first_width) {
    ArchSpec a;
    a.input_dims = {crf_dim, ecg_dim};
    a.branch_hidden = {{first_width, first_width / 2}, {first_width, first_width / 2}};
    a.fusion_hidden = {first_width / 2};
    a.dropout_rate = dropout_rate;
    a.validate();
    return a;
}

void TrainConfig::validate() const {
    if (learning_rate <= 0.0) throw ConfigError("learning_rate must be > 0");
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (dropout_rate < 0.0 || dropout_rate >= 1.0) {
        throw ConfigError("dropout_rate must be in [0, 1)");
    }
    if (weight_decay < 0.0) throw ConfigError("weight_decay must be >= 0");
}

AdamState AdamState::zeros_like(const ModelParams& params) {
    AdamState state;
    for (const auto& layer : params.layers) {
        LayerParams zero;
        zero.w.assign(layer.w.size(), std::vector<double>(layer.w[0].size(), 0.0));
        zero.b.assign(layer.b.size(), 0.0);
        state.m.push_back(zero);
        state.v.push_back(std::move(zero));
    }
    state.t = 0;
    return state;
}

ModelParams init_params(const ArchSpec& arch, std::uint64_t seed) {
    arch.validate();
    Rng rng(seed);
    ModelParams params;
    params.arch = arch;
    for (const auto& [in, out] : arch.layer_dims()) {
        LayerParams layer;
        const double bound = std::sqrt(6.0 / static_cast<double>(in + out));
        layer.w.assign(out, std::vector<double>(in));
        for (int r = 0; r < out; ++r) {
            for (int c = 0; c < in; ++c) {
                layer.w[r][c] = rng.next_uniform(-bound, bound);
            }
        }
        layer.b.assign(out, 0.0);
        params.layers.push_back(std::move(layer));
    }
    return params;
}

namespace {

double sigmoid(double z) {
    return 1.0 / (1.0 + std::exp(-z));
}

std::vector<double> affine(const LayerParams& layer, const std::vector<double>& x) {
    if (!layer.w.empty() && layer.w[0].size() != x.size()) {
        throw DimensionError("layer input width mismatch");
    }
    std::vector<double> z(layer.b);
    for (std::size_t r = 0; r < layer.w.size(); ++r) {
        const auto& row = layer.w[r];
        double acc = z[r];
        for (std::size_t c = 0; c < row.size(); ++c) acc += row[c] * x[c];
        z[r] = acc;
    }
    return z;
}

// affine -> ReLU -> optional inverted dropout, recording the cache slot
std::vector<double> hidden_layer(const LayerParams& layer, const std::vector<double>& x,
                                 double dropout_rate, Rng* rng, ForwardCache& cache) {
    std::vector<double> z = affine(layer, x);
    cache.inputs.push_back(x);
    cache.preacts.push_back(z);
    std::vector<double> a(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) a[i] = std::max(z[i], 0.0);
    if (rng != nullptr && dropout_rate > 0.0) {
        const double keep_scale = 1.0 / (1.0 - dropout_rate);
        std::vector<double> mask(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            mask[i] = rng->next_bernoulli(dropout_rate) ? 0.0 : keep_scale;
            a[i] *= mask[i];
        }
        cache.masks.push_back(std::move(mask));
    } else {
        cache.masks.emplace_back();
    }
    return a;
}

}  // namespace

ForwardCache forward(const ModelParams& params, std::span<const std::vector<double>> inputs,
                     RunMode mode, Rng* rng) {
    const ArchSpec& arch = params.arch;
    if (inputs.size() != arch.n_branches()) {
        throw DimensionError("forward: branch count mismatch");
    }
    for (std::size_t b = 0; b < inputs.size(); ++b) {
        if (static_cast<int>(inputs[b].size()) != arch.input_dims[b]) {
            throw DimensionError("forward: input width mismatch on branch " + std::to_string(b));
        }
    }
    const bool train = (mode == RunMode::Train);
    if (train && arch.dropout_rate > 0.0 && rng == nullptr) {
        throw ConfigError("train-mode forward with dropout needs an rng");
    }
    Rng* dropout_rng = train ? rng : nullptr;

    ForwardCache cache;
    std::size_t layer = 0;

    std::vector<double> concat;
    for (std::size_t b = 0; b < inputs.size(); ++b) {
        std::vector<double> a = inputs[b];
        for (std::size_t l = 0; l < arch.branch_hidden[b].size(); ++l) {
            a = hidden_layer(params.layers[layer++], a, arch.dropout_rate, dropout_rng, cache);
        }
        concat.insert(concat.end(), a.begin(), a.end());
    }
    std::vector<double> a = std::move(concat);
    for (std::size_t l = 0; l < arch.fusion_hidden.size(); ++l) {
        a = hidden_layer(params.layers[layer++], a, arch.dropout_rate, dropout_rng, cache);
    }

    const std::vector<double> z = affine(params.layers[layer], a);
    cache.inputs.push_back(std::move(a));
    cache.preacts.push_back(z);
    cache.masks.emplace_back();
    cache.prob = sigmoid(z[0]);
    return cache;
}

double bce_loss(double prob, int label, double clip_eps) {
    const double p = std::clamp(prob, clip_eps, 1.0 - clip_eps);
    return label == 1 ? -std::log(p) : -std::log(1.0 - p);
}

std::vector<LayerParams> backward(const ModelParams& params, const ForwardCache& cache,
                                  int label) {
    const std::size_t n_layers = params.layers.size();
    if (cache.inputs.size() != n_layers || cache.preacts.size() != n_layers) {
        throw DimensionError("backward: cache does not match params");
    }

    std::vector<LayerParams> grads(n_layers);

    // output unit: d(bce o sigmoid)/dz = p - y
    std::vector<double> delta = {cache.prob - static_cast<double>(label)};

    const ArchSpec& arch = params.arch;
    const std::size_t fusion_count = arch.fusion_hidden.size();
    std::vector<std::size_t> branch_sizes;
    for (const auto& stack : arch.branch_hidden) branch_sizes.push_back(stack.size());

    // walk layers in reverse canonical order, carrying delta = dL/d(output)
    auto layer_backward = [&](std::size_t l, bool is_hidden) {
        const LayerParams& layer = params.layers[l];
        std::vector<double> dz = delta;
        if (is_hidden) {
            const auto& mask = cache.masks[l];
            const auto& z = cache.preacts[l];
            for (std::size_t i = 0; i < dz.size(); ++i) {
                if (!mask.empty()) dz[i] *= mask[i];
                if (z[i] <= 0.0) dz[i] = 0.0;
            }
        }
        const auto& x = cache.inputs[l];
        LayerParams& g = grads[l];
        g.w.assign(dz.size(), std::vector<double>(x.size()));
        g.b = dz;
        for (std::size_t r = 0; r < dz.size(); ++r) {
            for (std::size_t c = 0; c < x.size(); ++c) {
                g.w[r][c] = dz[r] * x[c];
            }
        }
        std::vector<double> prev(x.size(), 0.0);
        for (std::size_t r = 0; r < dz.size(); ++r) {
            const auto& row = layer.w[r];
            for (std::size_t c = 0; c < row.size(); ++c) prev[c] += row[c] * dz[r];
        }
        delta = std::move(prev);
    };

    std::size_t l = n_layers - 1;
    layer_backward(l, /*is_hidden=*/false);  // output layer

    for (std::size_t f = 0; f < fusion_count; ++f) {
        layer_backward(--l, /*is_hidden=*/true);
    }

    // delta now spans the concatenated branch outputs; split right-to-left
    std::vector<double> concat_delta = delta;
    std::size_t offset = concat_delta.size();
    for (std::size_t b = arch.n_branches(); b-- > 0;) {
        const std::size_t width = branch_sizes[b] > 0
                                      ? static_cast<std::size_t>(arch.branch_hidden[b].back())
                                      : static_cast<std::size_t>(arch.input_dims[b]);
        offset -= width;
        delta.assign(concat_delta.begin() + static_cast<std::ptrdiff_t>(offset),
                     concat_delta.begin() + static_cast<std::ptrdiff_t>(offset + width));
        for (std::size_t s = 0; s < branch_sizes[b]; ++s) {
            layer_backward(--l, /*is_hidden=*/true);
        }
    }
    return grads;
}

void adam_step(ModelParams& params, const std::vector<LayerParams>& grads, AdamState& state,
               const TrainConfig& config) {
    if (grads.size() != params.layers.size()) {
        throw DimensionError("adam_step: gradient shape mismatch");
    }
    state.t += 1;
    const double bc1 = 1.0 - std::pow(config.adam_beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(config.adam_beta2, static_cast<double>(state.t));

    auto update = [&](double& theta, double g, double& m, double& v) {
        m = config.adam_beta1 * m + (1.0 - config.adam_beta1) * g;
        v = config.adam_beta2 * v + (1.0 - config.adam_beta2) * g * g;
        const double m_hat = m / bc1;
        const double v_hat = v / bc2;
        theta -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.adam_eps);
    };

    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        LayerParams& layer = params.layers[l];
        const LayerParams& g = grads[l];
        for (std::size_t r = 0; r < layer.w.size(); ++r) {
            for (std::size_t c = 0; c < layer.w[r].size(); ++c) {
                const double decayed = g.w[r][c] + config.weight_decay * layer.w[r][c];
                update(layer.w[r][c], decayed, state.m[l].w[r][c], state.v[l].w[r][c]);
            }
        }
        for (std::size_t r = 0; r < layer.b.size(); ++r) {
            update(layer.b[r], g.b[r], state.m[l].b[r], state.v[l].b[r]);
        }
    }
}

namespace {

void accumulate(std::vector<LayerParams>& acc, const std::vector<LayerParams>& grads) {
    if (acc.empty()) {
        acc = grads;
        return;
    }
    for (std::size_t l = 0; l < grads.size(); ++l) {
        for (std::size_t r = 0; r < grads[l].w.size(); ++r) {
            for (std::size_t c = 0; c < grads[l].w[r].size(); ++c) {
                acc[l].w[r][c] += grads[l].w[r][c];
            }
        }
        for (std::size_t r = 0; r < grads[l].b.size(); ++r) acc[l].b[r] += grads[l].b[r];
    }
}

void scale(std::vector<LayerParams>& grads, double factor) {
    for (auto& layer : grads) {
        for (auto& row : layer.w) {
            for (double& v : row) v *= factor;
        }
        for (double& v : layer.b) v *= factor;
    }
}

}  // namespace

ModelParams train(std::span<const Matrix> branch_matrices, std::span<const int> labels,
                  const ArchSpec& arch, const TrainConfig& config) {
    arch.validate();
    config.validate();
    if (branch_matrices.size() != arch.n_branches()) {
        throw DimensionError("train: branch count mismatch");
    }
    const std::size_t n = labels.size();
    if (n == 0) throw TrainingError("train: empty dataset");
    for (const auto& m : branch_matrices) {
        if (m.size() != n) throw DimensionError("train: row count mismatch across branches");
    }

    ModelParams params = init_params(arch, derive_seed(config.seed, 0));
    AdamState state = AdamState::zeros_like(params);
    Rng rng(derive_seed(config.seed, 1));  // epoch shuffles + dropout masks

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    std::vector<std::vector<double>> sample(arch.n_branches());
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t start = 0; start < n; start += config.batch_size) {
            const std::size_t stop = std::min(n, start + config.batch_size);
            std::vector<LayerParams> batch_grads;
            for (std::size_t k = start; k < stop; ++k) {
                const std::size_t row = order[k];
                for (std::size_t b = 0; b < branch_matrices.size(); ++b) {
                    sample[b] = branch_matrices[b][row];
                }
                const ForwardCache cache = forward(params, sample, RunMode::Train, &rng);
                accumulate(batch_grads, backward(params, cache, labels[row]));
            }
            scale(batch_grads, 1.0 / static_cast<double>(stop - start));
            adam_step(params, batch_grads, state, config);
        }
    }
    return params;
}

std::vector<double> predict(const ModelParams& params,
                            std::span<const Matrix> branch_matrices) {
    if (branch_matrices.size() != params.arch.n_branches()) {
        throw DimensionError("predict: branch count mismatch");
    }
    const std::size_t n = branch_matrices[0].size();
    for (const auto& m : branch_matrices) {
        if (m.size() != n) throw DimensionError("predict: row count mismatch across branches");
    }
    std::vector<double> probs(n);
    std::vector<std::vector<double>> sample(params.arch.n_branches());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t b = 0; b < branch_matrices.size(); ++b) {
            sample[b] = branch_matrices[b][i];
        }
        probs[i] = forward(params, sample, RunMode::Eval).prob;
    }
    return probs;
}

nlohmann::json arch_to_json(const ArchSpec& arch) {
    return nlohmann::json{{"input_dims", arch.input_dims},
                          {"branch_hidden", arch.branch_hidden},
                          {"fusion_hidden", arch.fusion_hidden},
                          {"dropout_rate", arch.dropout_rate}};
}

ArchSpec arch_from_json(const nlohmann::json& j) {
    ArchSpec arch;
    arch.input_dims = j.at("input_dims").get<std::vector<int>>();
    arch.branch_hidden = j.at("branch_hidden").get<std::vector<std::vector<int>>>();
    arch.fusion_hidden = j.at("fusion_hidden").get<std::vector<int>>();
    arch.dropout_rate = j.at("dropout_rate");
    arch.validate();
    return arch;
}

nlohmann::json params_to_json(const ModelParams& params) {
    nlohmann::json layers = nlohmann::json::array();
    for (const auto& layer : params.layers) {
        layers.push_back(nlohmann::json{{"w", layer.w}, {"b", layer.b}});
    }
    return nlohmann::json{{"arch", arch_to_json(params.arch)}, {"layers", std::move(layers)}};
}

ModelParams params_from_json(const nlohmann::json& j) {
    ModelParams params;
    params.arch = arch_from_json(j.at("arch"));
    for (const auto& layer_json : j.at("layers")) {
        LayerParams layer;
        layer.w = layer_json.at("w").get<Matrix>();
        layer.b = layer_json.at("b").get<std::vector<double>>();
        params.layers.push_back(std::move(layer));
    }
    const auto dims = params.arch.layer_dims();
    if (dims.size() != params.layers.size()) {
        throw DimensionError("params JSON: layer count does not match arch");
    }
    for (std::size_t l = 0; l < dims.size(); ++l) {
        const auto& [in, out] = dims[l];
        if (params.layers[l].w.size() != static_cast<std::size_t>(out) ||
            params.layers[l].b.size() != static_cast<std::size_t>(out) ||
            (out > 0 && params.layers[l].w[0].size() != static_cast<std::size_t>(in))) {
            throw DimensionError("params JSON: layer " + std::to_string(l) + " shape mismatch");
        }
    }
    return params;
}

}  // namespace dianet
