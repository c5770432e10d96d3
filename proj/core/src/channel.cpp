#include "ddecc/channel.hpp"

#include <cmath>
#include <limits>

#include "ddecc/error.hpp"

namespace ddecc {

std::vector<double> bpsk(std::span<const std::uint8_t> bits) {
    std::vector<double> out(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) out[i] = (bits[i] & 1U) ? -1.0 : 1.0;
    return out;
}

double ebn0_to_sigma(const EbN0Point& p) {
    if (!(p.rate > 0.0 && p.rate < 1.0)) throw RangeError("code rate must lie in (0, 1)");
    return 1.0 / std::sqrt(2.0 * p.rate * std::pow(10.0, p.ebn0_db / 10.0));
}

void sanitize_zeros(std::span<double> y) noexcept {
    for (auto& v : y)
        if (v == 0.0) v = std::numeric_limits<double>::epsilon();
}

ChannelOutput awgn_transmit(const Codeword& x, double sigma, Rng& rng) {
    if (!(sigma > 0.0)) throw RangeError("sigma must be positive");
    ChannelOutput out{bpsk(x), sigma, x};
    for (auto& v : out.y) v += sigma * rng.normal();
    sanitize_zeros(out.y);
    return out;
}

ChannelOutput faded_transmit(const Codeword& x, std::span<const double> gains, double sigma, Rng& rng) {
    if (!(sigma > 0.0)) throw RangeError("sigma must be positive");
    if (gains.size() != x.bits.size()) throw ShapeError("fading gain vector length mismatch");
    ChannelOutput out{bpsk(x), sigma, x};
    for (std::size_t i = 0; i < out.y.size(); ++i) out.y[i] = gains[i] * out.y[i] + sigma * rng.normal();
    sanitize_zeros(out.y);
    return out;
}

ChannelOutput rayleigh_transmit(const Codeword& x, double sigma, double alpha, Rng& rng) {
    if (!(alpha > 0.0)) throw RangeError("Rayleigh scale must be positive");
    std::vector<double> gains(x.bits.size());
    for (auto& g : gains) g = rayleigh_sample(alpha, rng);
    return faded_transmit(x, gains, sigma, rng);
}

std::vector<double> multiplicative_noise(const Codeword& x, std::span<const double> y) {
    if (y.size() != x.bits.size()) throw ShapeError("multiplicative_noise: length mismatch");
    std::vector<double> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = (x.bits[i] & 1U) ? -y[i] : y[i];
    return out;
}

}  // namespace ddecc
