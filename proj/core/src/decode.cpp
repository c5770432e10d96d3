#include "ddecc/decode.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "ddecc/error.hpp"

namespace ddecc {

std::vector<double> LineSearchGrid::points() const {
    validate();
    std::vector<double> out(count);
    if (count == 1) {
        out[0] = lo;
        return out;
    }
    for (std::size_t i = 0; i < count; ++i)
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    return out;
}

void LineSearchGrid::validate() const {
    if (!(lo > 0.0)) throw RangeError("line-search grid must start above zero");
    if (hi < lo) throw RangeError("line-search grid upper bound below lower bound");
    if (count == 0) throw RangeError("line-search grid needs at least one point");
}

std::size_t DecodeConfig::iteration_budget(const ParityCheckMatrix& h) const {
    std::size_t budget = max_iters ? max_iters : h.checks();
    if (few_iter_cap) budget = std::min(budget, *few_iter_cap);
    return budget;
}

std::vector<double> ModelPredictor::logits(std::span<const double>, const nn::Preprocessed& input) const {
    return model_->forward(input.features, input.parity_errors);
}

std::vector<double> ExactNoiseOracle::logits(std::span<const double> y, const nn::Preprocessed&) const {
    if (y.size() != truth_.size()) throw ShapeError("oracle: word length mismatch");
    std::vector<double> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        const bool sent_negative = truth_[i] != 0;
        const bool received_negative = y[i] < 0.0;
        out[i] = sent_negative != received_negative ? 30.0 : -30.0;
    }
    return out;
}

std::vector<double> eps_tilde_from_logits(std::span<const double> logits) {
    std::vector<double> out(logits.size());
    for (std::size_t i = 0; i < logits.size(); ++i) out[i] = -std::tanh(0.5 * logits[i]);
    return out;
}

namespace {

std::size_t weight_after_step(const ParityCheckMatrix& h, std::span<const double> y, std::span<const double> eps_hat,
                              double step, PackedRow& scratch) {
    for (std::size_t i = 0; i < y.size(); ++i) scratch.set(i, (y[i] - step * eps_hat[i]) < 0.0);
    return h.syndrome_weight(scratch);
}

}  // namespace

double line_search(const ParityCheckMatrix& h, std::span<const double> y, std::span<const double> eps_hat,
                   std::size_t gamma, const NoiseSchedule& schedule, const LineSearchGrid& grid) {
    if (gamma < 1) throw RangeError("line search needs a non-zero parity error count");
    const double coeff = posterior_coefficients(gamma, schedule).mean_noise_coeff;
    const auto candidates = grid.points();
    PackedRow scratch(y.size());
    double best_lambda = candidates.front();
    std::size_t best_weight = weight_after_step(h, y, eps_hat, best_lambda * coeff, scratch);
    for (std::size_t i = 1; i < candidates.size() && best_weight > 0; ++i) {
        const std::size_t w = weight_after_step(h, y, eps_hat, candidates[i] * coeff, scratch);
        if (w < best_weight) {
            best_weight = w;
            best_lambda = candidates[i];
        }
    }
    return best_lambda;
}

DecodeOutcome decode(const NoisePredictor& predictor, const ParityCheckMatrix& h, const NoiseSchedule& schedule,
                     std::span<const double> y_in, const DecodeConfig& config) {
    if (y_in.size() != h.n()) throw ShapeError("decode: word length mismatch");
    if (schedule.steps() < h.checks())
        throw RangeError("decode: schedule shorter than the maximum parity error count n-k");
    if (config.mode == DecodeMode::line_search) config.grid.validate();

    std::vector<double> y(y_in.begin(), y_in.end());
    const std::size_t budget = config.iteration_budget(h);
    DecodeOutcome out;

    for (std::size_t it = 0; it < budget; ++it) {
        const auto input = nn::preprocess(y, h);
        const std::size_t gamma = input.parity_errors;
        if (gamma == 0) {
            out.bits = hard_decision(y);
            out.converged = true;
            out.iters_used = it;
            return out;
        }
        const auto eps_tilde = eps_tilde_from_logits(predictor.logits(y, input));
        const auto eps_hat = mul_to_add_noise(y, eps_tilde);
        const double lambda = config.mode == DecodeMode::line_search
                                  ? line_search(h, y, eps_hat, gamma, schedule, config.grid)
                                  : 1.0;
        const double step = lambda * posterior_coefficients(gamma, schedule).mean_noise_coeff;
        for (std::size_t i = 0; i < y.size(); ++i) y[i] -= step * eps_hat[i];
        out.trace.push_back(TraceEntry{gamma, lambda, h.syndrome_weight(hard_decision_packed(y))});
    }
    out.bits = hard_decision(y);
    out.iters_used = budget;
    out.converged = h.syndrome_of_bits(out.bits).weight == 0;
    return out;
}

BatchDecodeResult decode_batch(const NoisePredictor& predictor, const ParityCheckMatrix& h,
                               const NoiseSchedule& schedule, const std::vector<std::vector<double>>& words,
                               const DecodeConfig& config, std::size_t workers) {
    BatchDecodeResult result;
    result.outcomes.resize(words.size());
    workers = std::max<std::size_t>(1, std::min(workers, words.size()));
    auto run = [&](std::size_t w) {
        for (std::size_t i = w; i < words.size(); i += workers)
            result.outcomes[i] = decode(predictor, h, schedule, words[i], config);
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
        for (auto& t : pool) t.join();
    }
    if (!words.empty()) {
        double sum = 0.0, sq = 0.0;
        for (const auto& o : result.outcomes) {
            sum += static_cast<double>(o.iters_used);
            sq += static_cast<double>(o.iters_used) * static_cast<double>(o.iters_used);
        }
        const double count = static_cast<double>(words.size());
        result.mean_iters = sum / count;
        result.std_iters = std::sqrt(std::max(0.0, sq / count - result.mean_iters * result.mean_iters));
    }
    return result;
}

}  // namespace ddecc
