#include "ddecc/bench.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <thread>

#include "ddecc/bp.hpp"
#include "ddecc/channel.hpp"
#include "ddecc/csv.hpp"
#include "ddecc/error.hpp"

namespace ddecc {

std::string_view to_string(DecoderKind k) noexcept {
    switch (k) {
        case DecoderKind::ddecc: return "ddecc";
        case DecoderKind::ddecc_ls: return "ddecc-ls";
        case DecoderKind::bp: return "bp";
        case DecoderKind::ml: return "ml";
    }
    return "?";
}

DecoderKind parse_decoder_kind(std::string_view s) {
    if (s == "ddecc") return DecoderKind::ddecc;
    if (s == "ddecc-ls" || s == "ddecc_ls") return DecoderKind::ddecc_ls;
    if (s == "bp") return DecoderKind::bp;
    if (s == "ml") return DecoderKind::ml;
    throw ParseError("unknown decoder '" + std::string(s) + "' (expected ddecc, ddecc-ls, bp, ml)");
}

std::string_view to_string(ChannelKind k) noexcept { return k == ChannelKind::awgn ? "awgn" : "rayleigh"; }

ChannelKind parse_channel_kind(std::string_view s) {
    if (s == "awgn") return ChannelKind::awgn;
    if (s == "rayleigh") return ChannelKind::rayleigh;
    throw ParseError("unknown channel '" + std::string(s) + "' (expected awgn, rayleigh)");
}

double BerPoint::ber() const noexcept { return bits ? static_cast<double>(bit_errors) / bits : 0.0; }
double BerPoint::fer() const noexcept { return frames ? static_cast<double>(frame_errors) / frames : 0.0; }

std::optional<double> BerPoint::neg_ln_ber() const noexcept {
    if (bit_errors == 0) return std::nullopt;
    return -std::log(ber());
}

double BerPoint::ber_stderr() const noexcept {
    if (frames < 2 || bits == 0) return 0.0;
    const double f = static_cast<double>(frames);
    const double n = static_cast<double>(bits) / f;
    // Per-frame error fraction p_f = e_f / n; variance of the mean over frames.
    const double mean = static_cast<double>(bit_errors) / (f * n);
    const double mean_sq = static_cast<double>(bit_errors_sq) / (f * n * n);
    const double var = std::max(0.0, mean_sq - mean * mean) * f / (f - 1.0);
    return std::sqrt(var / f);
}

double BerPoint::iter_mean() const noexcept { return frames ? static_cast<double>(iter_sum) / frames : 0.0; }

double BerPoint::iter_std() const noexcept {
    if (!frames) return 0.0;
    const double m = iter_mean();
    return std::sqrt(std::max(0.0, static_cast<double>(iter_sq_sum) / frames - m * m));
}

namespace {

Codeword random_codeword(const GeneratorMatrix& g, Rng& rng) {
    Bits message(g.k());
    for (auto& b : message) b = rng.bit() ? 1 : 0;
    return encode(g, message);
}

ChannelOutput transmit(const Codeword& x, double sigma, const BenchOptions& opt, Rng& rng) {
    return opt.channel == ChannelKind::awgn ? awgn_transmit(x, sigma, rng)
                                            : rayleigh_transmit(x, sigma, opt.rayleigh_alpha, rng);
}

struct WordResult {
    std::uint64_t bit_errors = 0;
    std::uint64_t iters = 0;
};

// Everything one worker needs to decode; decoders with scratch state are per worker.
class WorkerDecoder {
public:
    WorkerDecoder(const ParityCheckMatrix& h, const DecoderSetup& setup, const NoisePredictor* predictor,
                  const NoiseSchedule* schedule, const DecodeConfig* config, const MlDecoder* ml)
        : h_(&h), setup_(&setup), predictor_(predictor), schedule_(schedule), config_(config), ml_(ml) {
        if (setup.kind == DecoderKind::bp) bp_ = std::make_unique<BpDecoder>(h);
    }

    WordResult run(const ChannelOutput& out) {
        WordResult r;
        Bits decided;
        switch (setup_->kind) {
            case DecoderKind::ddecc:
            case DecoderKind::ddecc_ls: {
                auto o = decode(*predictor_, *h_, *schedule_, out.y, *config_);
                decided = std::move(o.bits);
                r.iters = o.iters_used;
                break;
            }
            case DecoderKind::bp: {
                auto o = bp_->decode(out.y, out.sigma, setup_->bp_iters);
                decided = std::move(o.bits);
                r.iters = o.iters;
                break;
            }
            case DecoderKind::ml: decided = ml_->decode(out.y).bits; break;
        }
        for (std::size_t i = 0; i < decided.size(); ++i) r.bit_errors += (decided[i] != out.truth.bits[i]) ? 1 : 0;
        return r;
    }

private:
    const ParityCheckMatrix* h_;
    const DecoderSetup* setup_;
    const NoisePredictor* predictor_;
    const NoiseSchedule* schedule_;
    const DecodeConfig* config_;
    const MlDecoder* ml_;
    std::unique_ptr<BpDecoder> bp_;
};

void add_word(BerPoint& p, const WordResult& r, std::size_t n) {
    p.frames += 1;
    p.bits += n;
    p.bit_errors += r.bit_errors;
    p.bit_errors_sq += r.bit_errors * r.bit_errors;
    p.frame_errors += r.bit_errors ? 1 : 0;
    p.iter_sum += r.iters;
    p.iter_sq_sum += r.iters * r.iters;
}

void merge(BerPoint& into, const BerPoint& from) {
    into.frames += from.frames;
    into.frame_errors += from.frame_errors;
    into.bits += from.bits;
    into.bit_errors += from.bit_errors;
    into.bit_errors_sq += from.bit_errors_sq;
    into.iter_sum += from.iter_sum;
    into.iter_sq_sum += from.iter_sq_sum;
}

template <class Fn>
void run_workers(std::size_t workers, Fn&& fn) {
    if (workers <= 1) {
        fn(std::size_t{0});
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back([&fn, w] { fn(w); });
    for (auto& t : pool) t.join();
}

}  // namespace

BerReport run_ber(const ParityCheckMatrix& h, const GeneratorMatrix& g, const DecoderSetup& setup,
                  std::span<const double> ebn0_db, const BenchOptions& options) {
    if (options.stop.max_words < options.stop.min_words)
        throw RangeError("max_words must be >= min_words");
    if (options.chunk == 0) throw RangeError("chunk must be positive");
    const std::size_t workers = std::max<std::size_t>(1, options.workers);

    std::unique_ptr<ModelPredictor> owned_predictor;
    const NoisePredictor* predictor = setup.predictor;
    std::optional<NoiseSchedule> schedule;
    DecodeConfig config = setup.decode;
    std::unique_ptr<MlDecoder> ml;
    if (setup.kind == DecoderKind::ddecc || setup.kind == DecoderKind::ddecc_ls) {
        if (!predictor) {
            if (!setup.model) throw RangeError("ddecc decoders need a trained model (--checkpoint)");
            if (setup.model->n() != h.n() || setup.model->k() != h.k())
                throw ShapeError("model was trained for a different code size");
            owned_predictor = std::make_unique<ModelPredictor>(*setup.model);
            predictor = owned_predictor.get();
        }
        schedule = setup.schedule ? *setup.schedule : NoiseSchedule::for_code(h);
        config.mode = setup.kind == DecoderKind::ddecc ? DecodeMode::regular : DecodeMode::line_search;
    } else if (setup.kind == DecoderKind::ml) {
        ml = std::make_unique<MlDecoder>(h, g);
    }

    std::vector<WorkerDecoder> decoders;
    decoders.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        decoders.emplace_back(h, setup, predictor, schedule ? &*schedule : nullptr, &config, ml.get());

    BerReport report;
    report.decoder = std::string(to_string(setup.kind));
    report.channel = std::string(to_string(options.channel));
    const double rate = h.rate();

    for (std::size_t pi = 0; pi < ebn0_db.size(); ++pi) {
        BerPoint point;
        point.ebn0_db = ebn0_db[pi];
        point.sigma = ebn0_to_sigma({ebn0_db[pi], rate});
        const std::uint64_t point_seed = derive_seed(options.seed, pi);

        // Word i always uses stream derive_seed(point_seed, i). Chunks cover fixed index
        // ranges and are merged in order with the stop rule checked after each one, so the
        // counters do not depend on the worker count. Chunks past the stop point are dropped.
        std::uint64_t next = 0;
        bool done = false;
        while (!done && next < options.stop.max_words) {
            const std::uint64_t span_words =
                std::min<std::uint64_t>(options.chunk * workers, options.stop.max_words - next);
            const std::size_t chunks = static_cast<std::size_t>((span_words + options.chunk - 1) / options.chunk);
            std::vector<BerPoint> partial(chunks);
            run_workers(workers, [&](std::size_t w) {
                for (std::size_t c = w; c < chunks; c += workers) {
                    const std::uint64_t lo = next + c * options.chunk;
                    const std::uint64_t hi = std::min<std::uint64_t>(lo + options.chunk, next + span_words);
                    for (std::uint64_t i = lo; i < hi; ++i) {
                        Rng rng(derive_seed(point_seed, i));
                        const auto x = random_codeword(g, rng);
                        const auto out = transmit(x, point.sigma, options, rng);
                        add_word(partial[c], decoders[w].run(out), h.n());
                    }
                }
            });
            for (const auto& p : partial) {
                merge(point, p);
                if (point.frames >= options.stop.min_words && point.frame_errors >= options.stop.min_error_frames) {
                    done = true;
                    break;
                }
            }
            next += span_words;
        }
        report.points.push_back(point);
    }
    return report;
}

std::string ber_csv_rows(const BerReport& report) {
    std::ostringstream out;
    for (const auto& p : report.points) {
        const auto nl = p.neg_ln_ber();
        out << report.decoder << ',' << report.channel << ',' << format_double(p.ebn0_db) << ','
            << format_double(p.sigma) << ',' << p.frames << ',' << p.frame_errors << ',' << p.bits << ','
            << p.bit_errors << ',' << format_double(p.ber()) << ',' << format_double(p.fer()) << ','
            << (nl ? format_double(*nl) : std::string()) << ',' << format_double(p.ber_stderr()) << ','
            << format_double(p.iter_mean()) << ',' << format_double(p.iter_std()) << '\n';
    }
    return out.str();
}

std::string ber_gnuplot(std::span<const BerReport> reports) {
    std::ostringstream out;
    bool first = true;
    for (const auto& r : reports) {
        if (!first) out << "\n\n";
        first = false;
        out << "# " << r.decoder << ' ' << r.channel << "\n# ebn0_db ber neg_ln_ber ber_stderr\n";
        for (const auto& p : r.points) {
            const auto nl = p.neg_ln_ber();
            out << format_double(p.ebn0_db) << ' ' << format_double(p.ber()) << ' '
                << (nl ? format_double(*nl) : std::string("NaN")) << ' ' << format_double(p.ber_stderr())
                << '\n';
        }
    }
    return out.str();
}

std::vector<ParityNoiseRow> parity_noise_study(const ParityCheckMatrix& h, const GeneratorMatrix& g,
                                               std::span<const double> sigmas, std::size_t samples,
                                               std::uint64_t seed) {
    if (samples == 0) throw RangeError("parity study needs at least one sample");
    std::vector<ParityNoiseRow> rows;
    for (std::size_t si = 0; si < sigmas.size(); ++si) {
        const double sigma = sigmas[si];
        if (!(sigma >= 0.0)) throw RangeError("sigma must be non-negative");
        const std::uint64_t stream = derive_seed(seed, si);
        double sum = 0.0;
        double sq = 0.0;
        for (std::size_t s = 0; s < samples; ++s) {
            Rng rng(derive_seed(stream, s));
            const auto x = random_codeword(g, rng);
            std::vector<double> y = bpsk(x);
            if (sigma > 0.0)
                for (auto& v : y) v += sigma * rng.normal();
            const double e = static_cast<double>(syndrome(h, y).weight);
            sum += e;
            sq += e * e;
        }
        ParityNoiseRow row;
        row.sigma = sigma;
        row.samples = samples;
        row.mean = sum / samples;
        row.stddev = std::sqrt(std::max(0.0, sq / samples - row.mean * row.mean));
        row.stderr_mean = row.stddev / std::sqrt(static_cast<double>(samples));
        rows.push_back(row);
    }
    return rows;
}

std::string parity_noise_csv_rows(std::span<const ParityNoiseRow> rows) {
    std::ostringstream out;
    for (const auto& r : rows)
        out << format_double(r.sigma) << ',' << r.samples << ',' << format_double(r.mean) << ','
            << format_double(r.stddev) << ',' << format_double(r.stderr_mean) << '\n';
    return out.str();
}

LambdaHistogram lambda_histogram(const NoisePredictor& predictor, const ParityCheckMatrix& h,
                                 const GeneratorMatrix& g, const NoiseSchedule& schedule, double ebn0_db,
                                 std::size_t samples, const LineSearchGrid& grid, std::uint64_t seed) {
    grid.validate();
    LambdaHistogram hist;
    hist.ebn0_db = ebn0_db;
    hist.grid = grid.points();
    hist.counts.assign(hist.grid.size(), 0);
    DecodeConfig config;
    config.mode = DecodeMode::line_search;
    config.grid = grid;
    const double sigma = ebn0_to_sigma({ebn0_db, h.rate()});
    for (std::size_t s = 0; s < samples; ++s) {
        Rng rng(derive_seed(seed, s));
        const auto x = random_codeword(g, rng);
        const auto out = awgn_transmit(x, sigma, rng);
        const auto outcome = decode(predictor, h, schedule, out.y, config);
        for (const auto& entry : outcome.trace) {
            const auto it = std::min_element(hist.grid.begin(), hist.grid.end(), [&](double a, double b) {
                return std::abs(a - entry.lambda) < std::abs(b - entry.lambda);
            });
            hist.counts[static_cast<std::size_t>(it - hist.grid.begin())] += 1;
            hist.invocations += 1;
        }
    }
    return hist;
}

std::string lambda_histogram_csv_rows(const LambdaHistogram& hist) {
    std::ostringstream out;
    for (std::size_t i = 0; i < hist.grid.size(); ++i)
        out << format_double(hist.ebn0_db) << ',' << format_double(hist.grid[i]) << ',' << hist.counts[i] << '\n';
    return out.str();
}

std::vector<ForwardTraceRow> forward_process_trace(const NoiseSchedule& schedule, std::size_t trajectories,
                                                   Rng& rng) {
    std::vector<ForwardTraceRow> rows;
    rows.reserve(trajectories * (schedule.steps() + 1));
    for (std::size_t tr = 0; tr < trajectories; ++tr) {
        ForwardTraceRow row;
        row.trajectory = tr;
        row.t = 0;
        // Alternate between the two codewords 000 and 111.
        row.x.fill(tr % 2 == 0 ? 1.0 : -1.0);
        rows.push_back(row);
        for (std::size_t t = 1; t <= schedule.steps(); ++t) {
            const double s = std::sqrt(schedule.beta(t));
            for (auto& v : row.x) v += s * rng.normal();
            row.t = t;
            rows.push_back(row);
        }
    }
    return rows;
}

std::string forward_trace_csv_rows(std::span<const ForwardTraceRow> rows) {
    std::ostringstream out;
    for (const auto& r : rows)
        out << r.trajectory << ',' << r.t << ',' << format_double(r.x[0]) << ',' << format_double(r.x[1]) << ','
            << format_double(r.x[2]) << '\n';
    return out.str();
}

}  // namespace ddecc
