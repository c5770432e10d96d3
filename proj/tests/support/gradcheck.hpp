#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "ddecc/model.hpp"
#include "ddecc/rng.hpp"
#include "ddecc/train.hpp"

namespace ddecc::oracle {

// Mean BCE of the model on a batch, evaluated with a plain loop over forward() logits.
inline double reference_bce(const nn::DenoiserModel& model, const TrainingBatch& batch) {
    const auto logits = model.forward_batch(batch.features, batch.parity_errors);
    double total = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        const double p = 1.0 / (1.0 + std::exp(-logits[i]));
        total -= batch.targets[i] * std::log(p) + (1.0 - batch.targets[i]) * std::log1p(-p);
    }
    return total / static_cast<double>(logits.size());
}

// Random features, parity counts and targets for a model's input shape.
inline TrainingBatch random_batch(const nn::DenoiserModel& model, std::size_t size, Rng& rng) {
    TrainingBatch b;
    b.size = size;
    const std::size_t n = model.n();
    const std::size_t m = n - model.k();
    for (std::size_t s = 0; s < size; ++s) {
        for (std::size_t i = 0; i < n; ++i) b.features.push_back(std::abs(1.0 + 0.6 * rng.normal()));
        for (std::size_t r = 0; r < m; ++r) b.features.push_back(rng.bit() ? 1.0 : 0.0);
        b.parity_errors.push_back(rng.below(m + 1));
        b.steps.push_back(1);
        for (std::size_t i = 0; i < n; ++i) b.targets.push_back(rng.bit() ? 1.0 : 0.0);
    }
    return b;
}

struct GradCheckResult {
    double max_rel_error = 0.0;
    std::size_t coordinates = 0;
};

// Compares reverse-mode gradients with central differences on `per_tensor` random
// coordinates of every parameter tensor. Relative error is |a - f| / max(|a|, |f|, floor).
inline GradCheckResult gradient_check(nn::DenoiserModel& model, const TrainingBatch& batch, std::size_t per_tensor,
                                      Rng& rng, double step = 1e-5, double floor = 1e-6) {
    const auto analytic = loss_and_gradients(model, batch, 1);
    GradCheckResult out;
    auto& params = model.parameters();
    for (std::size_t p = 0; p < params.size(); ++p) {
        auto& values = params[p].tensor.values;
        const std::size_t picks = std::min(per_tensor, values.size());
        for (std::size_t c = 0; c < picks; ++c) {
            const std::size_t j = picks == values.size() ? c : rng.below(values.size());
            const double saved = values[j];
            values[j] = saved + step;
            const double up = reference_bce(model, batch);
            values[j] = saved - step;
            const double down = reference_bce(model, batch);
            values[j] = saved;
            const double numeric = (up - down) / (2.0 * step);
            const double a = analytic.grads[p][j];
            const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), floor});
            out.max_rel_error = std::max(out.max_rel_error, rel);
            ++out.coordinates;
        }
    }
    return out;
}

}  // namespace ddecc::oracle
