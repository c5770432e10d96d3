#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ddecc/diffusion.hpp"
#include "ddecc/gf2.hpp"
#include "ddecc/model.hpp"
#include "ddecc/rng.hpp"

namespace ddecc {

struct TrainConfig {
    std::size_t epochs = 200;
    std::size_t batches_per_epoch = 100;
    std::size_t batch_size = 128;
    double lr0 = 1e-4;
    double lr_min = 5e-6;
    std::uint64_t seed = 0;
    std::string schedule;  // empty: constant beta = 0.01 with T = n - k
    nn::ArchConfig arch;
    std::size_t workers = 1;

    NoiseSchedule resolve_schedule(const ParityCheckMatrix& h) const;
};

struct TrainReport {
    std::vector<double> epoch_loss;
    std::vector<double> step_loss;
    double final_loss = 0.0;
    double wall_seconds = 0.0;
    std::uint64_t seed = 0;
};

/// One minibatch of (x_t features, e_t, bin(eps_tilde)) built from the all-zero codeword.
struct TrainingBatch {
    std::size_t size = 0;
    std::vector<std::size_t> steps;         // t per sample
    std::vector<double> features;           // [B, 2n-k]
    std::vector<std::size_t> parity_errors;  // e_t per sample
    std::vector<double> targets;            // [B, n]
};

TrainingBatch sample_training_batch(const ParityCheckMatrix& h, const NoiseSchedule& schedule,
                                    std::size_t batch_size, Rng& rng);

// Deterministic variant: caller provides t per sample and the [B, n] Gaussian draws.
TrainingBatch make_training_batch(const ParityCheckMatrix& h, const NoiseSchedule& schedule,
                                  std::span<const std::size_t> steps, std::span<const double> noise);

struct StepResult {
    double loss = 0.0;
    std::vector<std::vector<double>> grads;  // aligned with model.parameters()
};

// Batch-mean BCE and its gradient; shards the batch over `workers` threads.
StepResult loss_and_gradients(const nn::DenoiserModel& model, const TrainingBatch& batch, std::size_t workers = 1);

StepResult training_step(const nn::DenoiserModel& model, const ParityCheckMatrix& h, const NoiseSchedule& schedule,
                         std::size_t batch_size, Rng& rng, std::size_t workers = 1);

struct TrainResult {
    nn::DenoiserModel model;
    TrainReport report;
};

using EpochCallback = std::function<void(std::size_t epoch, double mean_loss, double lr)>;

TrainResult train(const ParityCheckMatrix& h, const TrainConfig& config, const EpochCallback& on_epoch = {});

}  // namespace ddecc
