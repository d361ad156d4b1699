#pragma once

// Independent reference implementations used to pin expected values.
// Everything here is deliberately brute-force and kept separate from the
// library code paths it checks.

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "dianet/net.hpp"
#include "dianet/rng.hpp"

namespace oracles {

// AUROC by counting all (positive, negative) pairs, ties credited 0.5.
inline double pair_auroc(std::span<const double> probs, std::span<const int> labels) {
    std::vector<double> pos;
    std::vector<double> neg;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        (labels[i] == 1 ? pos : neg).push_back(probs[i]);
    }
    if (pos.empty() || neg.empty()) throw std::invalid_argument("need both classes");
    double s = 0.0;
    for (double x : pos) {
        for (double y : neg) {
            if (x > y) s += 1.0;
            else if (x == y) s += 0.5;
        }
    }
    return s / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

// Linear-interpolation quantile at p*(n-1), written independently of
// dianet::quantile_sorted.
inline double ref_quantile(std::vector<double> values, double p) {
    std::sort(values.begin(), values.end());
    const double h = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

// Loss of a single sample as a function of the flattened parameter vector;
// used for central finite differences.
struct FlatParams {
    static std::vector<double> flatten(const dianet::ModelParams& params) {
        std::vector<double> flat;
        for (const auto& layer : params.layers) {
            for (const auto& row : layer.w) flat.insert(flat.end(), row.begin(), row.end());
            flat.insert(flat.end(), layer.b.begin(), layer.b.end());
        }
        return flat;
    }

    static void unflatten(std::span<const double> flat, dianet::ModelParams& params) {
        std::size_t k = 0;
        for (auto& layer : params.layers) {
            for (auto& row : layer.w) {
                for (double& v : row) v = flat[k++];
            }
            for (double& v : layer.b) v = flat[k++];
        }
    }
};

// Central finite differences of bce_loss(forward(params)) in eval mode.
inline std::vector<double> fd_gradient(const dianet::ModelParams& params,
                                       std::span<const std::vector<double>> inputs, int label,
                                       double h = 1e-5) {
    std::vector<double> flat = FlatParams::flatten(params);
    dianet::ModelParams scratch = params;
    std::vector<double> grad(flat.size());
    for (std::size_t k = 0; k < flat.size(); ++k) {
        const double keep = flat[k];
        flat[k] = keep + h;
        FlatParams::unflatten(flat, scratch);
        const double up =
            dianet::bce_loss(dianet::forward(scratch, inputs, dianet::RunMode::Eval).prob, label);
        flat[k] = keep - h;
        FlatParams::unflatten(flat, scratch);
        const double down =
            dianet::bce_loss(dianet::forward(scratch, inputs, dianet::RunMode::Eval).prob, label);
        flat[k] = keep;
        grad[k] = (up - down) / (2.0 * h);
    }
    FlatParams::unflatten(flat, scratch);
    return grad;
}

// max relative error between analytic and finite-difference gradients,
// ignoring entries where both are essentially zero
inline double max_rel_error(std::span<const double> analytic, std::span<const double> numeric,
                            double floor = 1e-7) {
    if (analytic.size() != numeric.size()) throw std::invalid_argument("size mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        const double scale = std::max(std::abs(analytic[i]), std::abs(numeric[i]));
        if (scale < floor) continue;
        worst = std::max(worst, std::abs(analytic[i] - numeric[i]) / scale);
    }
    return worst;
}

// random prediction sets with ties (probs drawn from a coarse grid)
struct RandomPredset {
    std::vector<double> probs;
    std::vector<int> labels;
};

inline RandomPredset random_predset(dianet::Rng& rng, std::size_t max_n, int grid = 20) {
    for (;;) {
        const std::size_t n = 2 + rng.next_index(max_n - 1);
        RandomPredset out;
        bool has_pos = false;
        bool has_neg = false;
        for (std::size_t i = 0; i < n; ++i) {
            out.probs.push_back(
                static_cast<double>(rng.next_index(static_cast<std::size_t>(grid) + 1)) / grid);
            out.labels.push_back(rng.next_bernoulli(0.5) ? 1 : 0);
            has_pos |= out.labels.back() == 1;
            has_neg |= out.labels.back() == 0;
        }
        if (has_pos && has_neg) return out;
    }
}

}  // namespace oracles
