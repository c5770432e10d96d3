#include "ddecc/diffusion.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "ddecc/error.hpp"

namespace ddecc {

namespace {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

double parse_double(std::string_view s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError("schedule: malformed number '" + std::string(s) + "'");
    return v;
}

}  // namespace

NoiseSchedule::NoiseSchedule(std::vector<double> betas) : betas_(std::move(betas)) {
    if (betas_.empty()) throw RangeError("noise schedule needs at least one step");
    double acc = 0.0;
    beta_bars_.reserve(betas_.size());
    for (double b : betas_) {
        if (!(b > 0.0) || !std::isfinite(b)) throw RangeError("noise schedule betas must be positive and finite");
        acc += b;
        beta_bars_.push_back(acc);
    }
    if (!std::isfinite(acc)) throw RangeError("cumulative noise variance overflowed");
    std::ostringstream desc;
    desc << "custom:" << betas_.size();
    description_ = desc.str();
}

NoiseSchedule NoiseSchedule::constant(double beta, std::size_t steps) {
    NoiseSchedule s(std::vector<double>(steps, beta));
    s.description_ = "constant:" + format_double(beta) + ":" + std::to_string(steps);
    return s;
}

NoiseSchedule NoiseSchedule::linear(double beta_first, double beta_last, std::size_t steps) {
    std::vector<double> betas(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        const double frac = steps > 1 ? static_cast<double>(i) / static_cast<double>(steps - 1) : 0.0;
        betas[i] = beta_first + (beta_last - beta_first) * frac;
    }
    NoiseSchedule s(std::move(betas));
    s.description_ =
        "linear:" + format_double(beta_first) + ":" + format_double(beta_last) + ":" + std::to_string(steps);
    return s;
}

NoiseSchedule NoiseSchedule::geometric(double beta_first, double ratio, std::size_t steps) {
    std::vector<double> betas(steps);
    double b = beta_first;
    for (auto& v : betas) {
        v = b;
        b *= ratio;
    }
    NoiseSchedule s(std::move(betas));
    s.description_ =
        "geometric:" + format_double(beta_first) + ":" + format_double(ratio) + ":" + std::to_string(steps);
    return s;
}

NoiseSchedule NoiseSchedule::for_code(const ParityCheckMatrix& h, double beta) {
    return constant(beta, h.checks());
}

NoiseSchedule NoiseSchedule::parse(std::string_view spec) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto colon = spec.find(':', start);
        parts.push_back(spec.substr(start, colon - start));
        if (colon == std::string_view::npos) break;
        start = colon + 1;
    }
    auto steps_of = [](std::string_view s) {
        std::size_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size() || v == 0)
            throw ParseError("schedule: malformed step count '" + std::string(s) + "'");
        return v;
    };
    if (parts[0] == "constant" && parts.size() == 3) return constant(parse_double(parts[1]), steps_of(parts[2]));
    if (parts[0] == "linear" && parts.size() == 4)
        return linear(parse_double(parts[1]), parse_double(parts[2]), steps_of(parts[3]));
    if (parts[0] == "geometric" && parts.size() == 4)
        return geometric(parse_double(parts[1]), parse_double(parts[2]), steps_of(parts[3]));
    throw ParseError("schedule: unrecognised specification '" + std::string(spec) + "'");
}

void NoiseSchedule::check_step(std::size_t t) const {
    if (t < 1 || t > betas_.size())
        throw RangeError("diffusion step " + std::to_string(t) + " outside [1, " + std::to_string(betas_.size()) +
                         "]");
}

double NoiseSchedule::beta(std::size_t t) const {
    check_step(t);
    return betas_[t - 1];
}

double NoiseSchedule::beta_bar(std::size_t t) const {
    check_step(t);
    return beta_bars_[t - 1];
}

PosteriorCoefficients posterior_coefficients(std::size_t t, const NoiseSchedule& schedule) {
    const double b = schedule.beta(t);
    const double bb = schedule.beta_bar(t);
    const double denom = bb + b;
    return PosteriorCoefficients{
        .mean_noise_coeff = std::sqrt(bb) * b / denom,
        .mean_xt_coeff = bb / denom,
        .mean_x0_coeff = b / denom,
        .var = bb * b / denom,
    };
}

ForwardSample forward_sample_with_noise(std::span<const double> x0, std::span<const double> eps,
                                        std::size_t t, const NoiseSchedule& schedule) {
    if (eps.size() != x0.size()) throw ShapeError("forward_sample: noise length mismatch");
    const double scale = std::sqrt(schedule.beta_bar(t));
    ForwardSample out{std::vector<double>(x0.size()), std::vector<double>(eps.begin(), eps.end())};
    for (std::size_t i = 0; i < x0.size(); ++i) out.x_t[i] = x0[i] + scale * eps[i];
    return out;
}

ForwardSample forward_sample(std::span<const double> x0, std::size_t t, const NoiseSchedule& schedule,
                             Rng& rng) {
    schedule.beta_bar(t);  // range check before consuming randomness
    std::vector<double> eps(x0.size());
    for (auto& e : eps) e = rng.normal();
    return forward_sample_with_noise(x0, eps, t, schedule);
}

std::vector<double> mul_to_add_noise(std::span<const double> y, std::span<const double> eps_tilde_pred) {
    if (y.size() != eps_tilde_pred.size()) throw ShapeError("mul_to_add_noise: length mismatch");
    std::vector<double> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double sign = (eps_tilde_pred[i] * y[i] < 0.0) ? -1.0 : 1.0;
        out[i] = y[i] - sign;
    }
    return out;
}

std::vector<double> reverse_step(std::span<const double> x_t, std::span<const double> eps_hat,
                                 std::size_t t, const NoiseSchedule& schedule, double lambda) {
    if (x_t.size() != eps_hat.size()) throw ShapeError("reverse_step: length mismatch");
    if (!(lambda > 0.0)) throw RangeError("reverse_step: lambda must be positive");
    const double step = lambda * posterior_coefficients(t, schedule).mean_noise_coeff;
    std::vector<double> out(x_t.size());
    for (std::size_t i = 0; i < x_t.size(); ++i) out[i] = x_t[i] - step * eps_hat[i];
    return out;
}

}  // namespace ddecc
