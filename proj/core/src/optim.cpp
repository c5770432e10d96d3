#include "ddecc/optim.hpp"

#include <cmath>
#include <numbers>

#include "ddecc/error.hpp"

namespace ddecc::nn {

void adam_step(std::span<Tensor* const> params, AdamState& state, double lr, const AdamConfig& cfg) {
    if (state.m.empty()) {
        state.m.resize(params.size());
        state.v.resize(params.size());
        for (std::size_t i = 0; i < params.size(); ++i) {
            state.m[i].assign(params[i]->size(), 0.0);
            state.v[i].assign(params[i]->size(), 0.0);
        }
    }
    if (state.m.size() != params.size()) throw ShapeError("adam_step: optimizer state tracks a different parameter set");
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (state.m[i].size() != params[i]->size()) throw ShapeError("adam_step: parameter shape changed");
        if (!params[i]->grad.empty() && params[i]->grad.size() != params[i]->size())
            throw ShapeError("adam_step: gradient shape mismatch");
    }

    ++state.step;
    const double t = static_cast<double>(state.step);
    const double bc1 = 1.0 - std::pow(cfg.beta1, t);
    const double bc2 = 1.0 - std::pow(cfg.beta2, t);
    for (std::size_t i = 0; i < params.size(); ++i) {
        Tensor& p = *params[i];
        if (p.grad.empty()) continue;
        auto& m = state.m[i];
        auto& v = state.v[i];
        for (std::size_t j = 0; j < p.size(); ++j) {
            const double g = p.grad[j];
            m[j] = cfg.beta1 * m[j] + (1.0 - cfg.beta1) * g;
            v[j] = cfg.beta2 * v[j] + (1.0 - cfg.beta2) * g * g;
            const double m_hat = m[j] / bc1;
            const double v_hat = v[j] / bc2;
            p.values[j] -= lr * m_hat / (std::sqrt(v_hat) + cfg.eps);
        }
    }
}

double cosine_lr(std::size_t epoch, std::size_t total, double lr0, double lr_min) {
    if (total == 0) return lr0;
    if (epoch > total) throw RangeError("cosine_lr: epoch beyond schedule length");
    const double frac = static_cast<double>(epoch) / static_cast<double>(total);
    return lr_min + 0.5 * (lr0 - lr_min) * (1.0 + std::cos(std::numbers::pi * frac));
}

}  // namespace ddecc::nn
