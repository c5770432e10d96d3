#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ddecc/autograd.hpp"

namespace ddecc::nn {

struct AdamConfig {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct AdamState {
    std::vector<std::vector<double>> m;
    std::vector<std::vector<double>> v;
    std::size_t step = 0;
};

// One bias-corrected Adam update using each tensor's grad buffer.
// Tensors with an empty grad are treated as having zero gradient.
void adam_step(std::span<Tensor* const> params, AdamState& state, double lr, const AdamConfig& cfg = {});

// lr_min + 0.5 (lr0 - lr_min)(1 + cos(pi * epoch / total)).
double cosine_lr(std::size_t epoch, std::size_t total, double lr0, double lr_min);

}  // namespace ddecc::nn
