#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ddecc/decode.hpp"
#include "ddecc/diffusion.hpp"
#include "ddecc/gf2.hpp"
#include "ddecc/model.hpp"
#include "ddecc/rng.hpp"

namespace ddecc {

enum class DecoderKind { ddecc, ddecc_ls, bp, ml };
std::string_view to_string(DecoderKind k) noexcept;
DecoderKind parse_decoder_kind(std::string_view s);

enum class ChannelKind { awgn, rayleigh };
std::string_view to_string(ChannelKind k) noexcept;
ChannelKind parse_channel_kind(std::string_view s);

struct StopRule {
    std::uint64_t min_words = 10'000;
    std::uint64_t min_error_frames = 100;
    std::uint64_t max_words = 1'000'000;
};

struct DecoderSetup {
    DecoderKind kind = DecoderKind::ml;
    const nn::DenoiserModel* model = nullptr;      // ddecc kinds
    const NoisePredictor* predictor = nullptr;     // overrides `model` when set
    std::optional<NoiseSchedule> schedule;         // default: constant 0.01 with T = n - k
    DecodeConfig decode;                           // mode is taken from `kind`
    std::size_t bp_iters = 50;
};

struct BenchOptions {
    StopRule stop;
    std::uint64_t seed = 0;
    std::size_t workers = 1;
    std::size_t chunk = 250;  // words per worker between stop-rule checks
    ChannelKind channel = ChannelKind::awgn;
    double rayleigh_alpha = 1.0;
};

/// Counters for one (decoder, EbN0) point. All accumulation is integral, so
/// merging worker results is order independent.
struct BerPoint {
    double ebn0_db = 0.0;
    double sigma = 0.0;
    std::uint64_t frames = 0;
    std::uint64_t frame_errors = 0;
    std::uint64_t bits = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t bit_errors_sq = 0;  // sum over frames of (bit errors in frame)^2
    std::uint64_t iter_sum = 0;
    std::uint64_t iter_sq_sum = 0;

    double ber() const noexcept;
    double fer() const noexcept;
    std::optional<double> neg_ln_ber() const noexcept;
    // Standard error of the BER estimate with frames as independent clusters.
    double ber_stderr() const noexcept;
    double iter_mean() const noexcept;
    double iter_std() const noexcept;
};

struct BerReport {
    std::string decoder;
    std::string channel;
    std::vector<BerPoint> points;
};

BerReport run_ber(const ParityCheckMatrix& h, const GeneratorMatrix& g, const DecoderSetup& setup,
                  std::span<const double> ebn0_db, const BenchOptions& options);

inline constexpr std::string_view ber_csv_header =
    "decoder,channel,ebn0_db,sigma,frames,frame_errors,bits,bit_errors,ber,fer,neg_ln_ber,ber_stderr,iter_mean,iter_std";

// CSV rows (no config header); neg_ln_ber is empty when no bit errors were seen.
std::string ber_csv_rows(const BerReport& report);

// gnuplot data: one index block per decoder with columns ebn0_db ber neg_ln_ber ber_stderr.
std::string ber_gnuplot(std::span<const BerReport> reports);

struct ParityNoiseRow {
    double sigma = 0.0;
    std::uint64_t samples = 0;
    double mean = 0.0;
    double stddev = 0.0;
    double stderr_mean = 0.0;
};

std::vector<ParityNoiseRow> parity_noise_study(const ParityCheckMatrix& h, const GeneratorMatrix& g,
                                               std::span<const double> sigmas, std::size_t samples,
                                               std::uint64_t seed);

inline constexpr std::string_view parity_noise_csv_header = "sigma,samples,mean_parity_errors,std,stderr";
std::string parity_noise_csv_rows(std::span<const ParityNoiseRow> rows);

struct LambdaHistogram {
    double ebn0_db = 0.0;
    std::vector<double> grid;
    std::vector<std::uint64_t> counts;
    std::uint64_t invocations = 0;
};

LambdaHistogram lambda_histogram(const NoisePredictor& predictor, const ParityCheckMatrix& h,
                                 const GeneratorMatrix& g, const NoiseSchedule& schedule, double ebn0_db,
                                 std::size_t samples, const LineSearchGrid& grid, std::uint64_t seed);

inline constexpr std::string_view lambda_histogram_csv_header = "ebn0_db,lambda,count";
std::string lambda_histogram_csv_rows(const LambdaHistogram& hist);

struct ForwardTraceRow {
    std::size_t trajectory = 0;
    std::size_t t = 0;
    std::array<double, 3> x{};
};

// Markov forward chain x_t = x_{t-1} + sqrt(beta_t) z on the (3,1) repetition code, from +-(1,1,1).
std::vector<ForwardTraceRow> forward_process_trace(const NoiseSchedule& schedule, std::size_t trajectories,
                                                   Rng& rng);

inline constexpr std::string_view forward_trace_csv_header = "trajectory,t,x1,x2,x3";
std::string forward_trace_csv_rows(std::span<const ForwardTraceRow> rows);

}  // namespace ddecc
