#include "ddecc/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <thread>

#include "ddecc/channel.hpp"
#include "ddecc/error.hpp"
#include "ddecc/optim.hpp"

namespace ddecc {

NoiseSchedule TrainConfig::resolve_schedule(const ParityCheckMatrix& h) const {
    return schedule.empty() ? NoiseSchedule::for_code(h) : NoiseSchedule::parse(schedule);
}

TrainingBatch make_training_batch(const ParityCheckMatrix& h, const NoiseSchedule& schedule,
                                  std::span<const std::size_t> steps, std::span<const double> noise) {
    const std::size_t n = h.n();
    const std::size_t batch = steps.size();
    if (noise.size() != batch * n) throw ShapeError("training batch: noise must be [B, n]");
    TrainingBatch out;
    out.size = batch;
    out.steps.assign(steps.begin(), steps.end());
    out.features.reserve(batch * (2 * n - h.k()));
    out.parity_errors.reserve(batch);
    out.targets.reserve(batch * n);

    const std::vector<double> x0(n, 1.0);  // bpsk of the all-zero codeword
    for (std::size_t b = 0; b < batch; ++b) {
        auto sample = forward_sample_with_noise(x0, noise.subspan(b * n, n), steps[b], schedule);
        sanitize_zeros(sample.x_t);
        const auto pre = nn::preprocess(sample.x_t, h);
        out.features.insert(out.features.end(), pre.features.begin(), pre.features.end());
        out.parity_errors.push_back(pre.parity_errors);
        // bin(x0 * x_t) with x0 = +1
        for (double v : sample.x_t) out.targets.push_back(static_cast<double>(hard_bit(v)));
    }
    return out;
}

TrainingBatch sample_training_batch(const ParityCheckMatrix& h, const NoiseSchedule& schedule,
                                    std::size_t batch_size, Rng& rng) {
    std::vector<std::size_t> steps(batch_size);
    std::vector<double> noise(batch_size * h.n());
    for (std::size_t b = 0; b < batch_size; ++b) {
        steps[b] = 1 + static_cast<std::size_t>(rng.below(schedule.steps()));
        for (std::size_t i = 0; i < h.n(); ++i) noise[b * h.n() + i] = rng.normal();
    }
    return make_training_batch(h, schedule, steps, noise);
}

namespace {

struct ShardResult {
    double loss_sum = 0.0;  // loss * shard size
    std::vector<std::vector<double>> grads;
};

ShardResult run_shard(const nn::DenoiserModel& model, const TrainingBatch& batch, std::size_t begin,
                      std::size_t end) {
    const std::size_t count = end - begin;
    const std::size_t in_dim = model.input_dim();
    const std::size_t n = model.n();
    ShardResult out;
    out.grads.resize(model.parameters().size());
    for (std::size_t i = 0; i < out.grads.size(); ++i) out.grads[i].assign(model.parameters()[i].tensor.size(), 0.0);
    if (count == 0) return out;

    nn::Tape tape;
    nn::Var features = tape.constant(count, in_dim,
                                     std::vector<double>(batch.features.begin() + begin * in_dim,
                                                         batch.features.begin() + end * in_dim));
    auto graph = model.build(tape, features, std::span(batch.parity_errors).subspan(begin, count));
    nn::Var loss = nn::bce_with_logits(graph.logits, std::span(batch.targets).subspan(begin * n, count * n));
    tape.backward(loss);
    const double weight = static_cast<double>(count);
    out.loss_sum = loss.scalar() * weight;
    for (std::size_t i = 0; i < graph.params.size(); ++i) {
        tape.accumulate_grad(graph.params[i], out.grads[i]);
        for (auto& g : out.grads[i]) g *= weight;
    }
    return out;
}

}  // namespace

StepResult loss_and_gradients(const nn::DenoiserModel& model, const TrainingBatch& batch, std::size_t workers) {
    if (batch.size == 0) throw RangeError("empty training batch");
    workers = std::max<std::size_t>(1, std::min(workers, batch.size));
    std::vector<ShardResult> shards(workers);
    const std::size_t per = (batch.size + workers - 1) / workers;
    if (workers == 1) {
        shards[0] = run_shard(model, batch, 0, batch.size);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = std::min(batch.size, w * per);
            const std::size_t end = std::min(batch.size, begin + per);
            pool.emplace_back([&, w, begin, end] { shards[w] = run_shard(model, batch, begin, end); });
        }
        for (auto& t : pool) t.join();
    }

    // Fixed-order reduction keeps results deterministic for a given worker count.
    StepResult out;
    out.grads = std::move(shards[0].grads);
    double loss_sum = shards[0].loss_sum;
    for (std::size_t w = 1; w < workers; ++w) {
        loss_sum += shards[w].loss_sum;
        for (std::size_t i = 0; i < out.grads.size(); ++i)
            for (std::size_t j = 0; j < out.grads[i].size(); ++j) out.grads[i][j] += shards[w].grads[i][j];
    }
    const double inv = 1.0 / static_cast<double>(batch.size);
    out.loss = loss_sum * inv;
    for (auto& g : out.grads)
        for (auto& v : g) v *= inv;
    return out;
}

StepResult training_step(const nn::DenoiserModel& model, const ParityCheckMatrix& h, const NoiseSchedule& schedule,
                         std::size_t batch_size, Rng& rng, std::size_t workers) {
    return loss_and_gradients(model, sample_training_batch(h, schedule, batch_size, rng), workers);
}

TrainResult train(const ParityCheckMatrix& h, const TrainConfig& config, const EpochCallback& on_epoch) {
    if (config.batch_size == 0 || config.batches_per_epoch == 0)
        throw RangeError("batch size and batches per epoch must be positive");
    const auto schedule = config.resolve_schedule(h);
    if (schedule.steps() < h.checks())
        throw RangeError("schedule has fewer steps than the maximum parity error count n-k");

    const auto start = std::chrono::steady_clock::now();
    TrainResult result{nn::DenoiserModel(h, config.arch, derive_seed(config.seed, 1)), {}};
    result.report.seed = config.seed;
    auto& model = result.model;

    Rng rng(derive_seed(config.seed, 2));
    nn::AdamState adam;
    std::vector<nn::Tensor*> params;
    for (auto& p : model.parameters()) params.push_back(&p.tensor);

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        const double lr = nn::cosine_lr(epoch, config.epochs, config.lr0, config.lr_min);
        double epoch_sum = 0.0;
        for (std::size_t b = 0; b < config.batches_per_epoch; ++b) {
            auto step = training_step(model, h, schedule, config.batch_size, rng, config.workers);
            if (!std::isfinite(step.loss))
                throw DivergenceError("training diverged (non-finite loss) at epoch " + std::to_string(epoch));
            for (std::size_t i = 0; i < params.size(); ++i) params[i]->grad = std::move(step.grads[i]);
            nn::adam_step(params, adam, lr);
            epoch_sum += step.loss;
            result.report.step_loss.push_back(step.loss);
        }
        const double mean = epoch_sum / static_cast<double>(config.batches_per_epoch);
        result.report.epoch_loss.push_back(mean);
        if (on_epoch) on_epoch(epoch, mean, lr);
    }
    for (auto* p : params) p->grad.clear();
    if (!result.report.epoch_loss.empty()) result.report.final_loss = result.report.epoch_loss.back();
    result.report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace ddecc
