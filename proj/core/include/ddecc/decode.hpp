#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ddecc/diffusion.hpp"
#include "ddecc/gf2.hpp"
#include "ddecc/model.hpp"

namespace ddecc {

enum class DecodeMode { regular, line_search };

struct LineSearchGrid {
    double lo = 1.0;
    double hi = 20.0;
    std::size_t count = 20;

    // Uniform points lo .. hi (inclusive), ascending.
    std::vector<double> points() const;
    void validate() const;
};

struct DecodeConfig {
    DecodeMode mode = DecodeMode::line_search;
    std::size_t max_iters = 0;  // 0 selects n - k
    LineSearchGrid grid;
    std::optional<std::size_t> few_iter_cap;

    std::size_t iteration_budget(const ParityCheckMatrix& h) const;
};

struct TraceEntry {
    std::size_t parity_errors = 0;   // gamma before the step
    double lambda = 1.0;
    std::size_t weight_after = 0;    // syndrome weight after the step
};

struct DecodeOutcome {
    Bits bits;
    bool converged = false;
    std::size_t iters_used = 0;
    std::vector<TraceEntry> trace;
};

/// Source of eps_theta predictions: logits of bin(eps_tilde), one per bit.
class NoisePredictor {
public:
    virtual ~NoisePredictor() = default;
    virtual std::vector<double> logits(std::span<const double> y, const nn::Preprocessed& input) const = 0;
};

class ModelPredictor final : public NoisePredictor {
public:
    explicit ModelPredictor(const nn::DenoiserModel& model) : model_(&model) {}
    std::vector<double> logits(std::span<const double> y, const nn::Preprocessed& input) const override;

private:
    const nn::DenoiserModel* model_;
};

// Test hook that knows the transmitted codeword and returns the exact sign of eps_tilde.
class ExactNoiseOracle final : public NoisePredictor {
public:
    explicit ExactNoiseOracle(Bits truth) : truth_(std::move(truth)) {}
    std::vector<double> logits(std::span<const double> y, const nn::Preprocessed& input) const override;

private:
    Bits truth_;
};

// eps_tilde estimate from logits: 1 - 2 sigmoid(l), whose sign is negative iff l > 0.
std::vector<double> eps_tilde_from_logits(std::span<const double> logits);

// Smallest grid lambda minimising the syndrome weight of y - lambda * coeff(gamma) * eps_hat.
double line_search(const ParityCheckMatrix& h, std::span<const double> y, std::span<const double> eps_hat,
                   std::size_t gamma, const NoiseSchedule& schedule, const LineSearchGrid& grid);

DecodeOutcome decode(const NoisePredictor& predictor, const ParityCheckMatrix& h, const NoiseSchedule& schedule,
                     std::span<const double> y, const DecodeConfig& config);

inline DecodeOutcome decode(const nn::DenoiserModel& model, const ParityCheckMatrix& h,
                            const NoiseSchedule& schedule, std::span<const double> y, const DecodeConfig& config) {
    return decode(ModelPredictor(model), h, schedule, y, config);
}

struct BatchDecodeResult {
    std::vector<DecodeOutcome> outcomes;
    double mean_iters = 0.0;
    double std_iters = 0.0;
};

BatchDecodeResult decode_batch(const NoisePredictor& predictor, const ParityCheckMatrix& h,
                               const NoiseSchedule& schedule, const std::vector<std::vector<double>>& words,
                               const DecodeConfig& config, std::size_t workers = 1);

}  // namespace ddecc
