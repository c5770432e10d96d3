#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ddecc/gf2.hpp"
#include "ddecc/rng.hpp"

namespace ddecc {

inline constexpr double default_beta = 0.01;

/// Variance schedule of the unscaled forward process
/// q(x_t | x_{t-1}) = N(x_{t-1}, beta_t I), with beta_bar_t = sum_{i<=t} beta_i.
///
/// Steps are 1-based: beta(1) .. beta(steps()).
class NoiseSchedule {
public:
    explicit NoiseSchedule(std::vector<double> betas);

    static NoiseSchedule constant(double beta, std::size_t steps);
    static NoiseSchedule linear(double beta_first, double beta_last, std::size_t steps);
    static NoiseSchedule geometric(double beta_first, double ratio, std::size_t steps);

    // Constant schedule with T = n - k and beta = default_beta.
    static NoiseSchedule for_code(const ParityCheckMatrix& h, double beta = default_beta);

    // "constant:<beta>:<T>", "linear:<first>:<last>:<T>", "geometric:<first>:<ratio>:<T>".
    static NoiseSchedule parse(std::string_view spec);
    const std::string& description() const noexcept { return description_; }

    std::size_t steps() const noexcept { return betas_.size(); }
    double beta(std::size_t t) const;
    double beta_bar(std::size_t t) const;

private:
    void check_step(std::size_t t) const;

    std::vector<double> betas_;
    std::vector<double> beta_bars_;
    std::string description_;
};

struct PosteriorCoefficients {
    double mean_noise_coeff = 0.0;  // sqrt(bb) * b / (bb + b)
    double mean_xt_coeff = 0.0;     // bb / (bb + b)
    double mean_x0_coeff = 0.0;     // b / (bb + b)
    double var = 0.0;               // bb * b / (bb + b)
};

PosteriorCoefficients posterior_coefficients(std::size_t t, const NoiseSchedule& schedule);

struct ForwardSample {
    std::vector<double> x_t;
    std::vector<double> eps;
};

// x_t = x0 + sqrt(beta_bar_t) * eps with eps ~ N(0, I).
ForwardSample forward_sample(std::span<const double> x0, std::size_t t, const NoiseSchedule& schedule,
                             Rng& rng);
ForwardSample forward_sample_with_noise(std::span<const double> x0, std::span<const double> eps,
                                        std::size_t t, const NoiseSchedule& schedule);

// eps_hat = y - sign(eps_tilde_pred .* y), sign(0) = +1.
std::vector<double> mul_to_add_noise(std::span<const double> y, std::span<const double> eps_tilde_pred);

// x_{t-1} = x_t - lambda * mean_noise_coeff(t) * eps_hat.
std::vector<double> reverse_step(std::span<const double> x_t, std::span<const double> eps_hat,
                                 std::size_t t, const NoiseSchedule& schedule, double lambda = 1.0);

}  // namespace ddecc
