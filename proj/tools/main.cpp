// ddecc command-line front end: train, decode, bench, oracle, study, replay.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ddecc/alist.hpp"
#include "ddecc/bench.hpp"
#include "ddecc/channel.hpp"
#include "ddecc/checkpoint.hpp"
#include "ddecc/csv.hpp"
#include "ddecc/decode.hpp"
#include "ddecc/error.hpp"
#include "ddecc/gf2.hpp"
#include "ddecc/train.hpp"

namespace {

using Config = std::map<std::string, std::string>;

std::size_t default_workers() {
    if (const char* env = std::getenv("DDECC_WORKERS")) {
        try {
            const auto v = std::stoul(env);
            if (v > 0) return v;
        } catch (const std::exception&) {
        }
    }
    return 1;
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ddecc::ParseError("bad number '" + item + "' in --" + what);
        }
    }
    if (out.empty()) throw ddecc::ParseError("--" + what + " needs at least one value");
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ddecc::Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Writes to --out when given, otherwise stdout.
void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ddecc::Error("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw ddecc::Error("failed writing '" + path + "'");
}

std::vector<std::vector<double>> read_words(const std::string& path, std::size_t n) {
    std::string text;
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        text = ss.str();
    } else {
        text = read_file(path);
    }
    std::vector<std::vector<double>> words;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::vector<double> w;
        double v = 0.0;
        while (ls >> v) w.push_back(v);
        if (!ls.eof()) throw ddecc::ParseError("line " + std::to_string(lineno) + ": not a list of reals");
        if (w.empty()) continue;
        if (w.size() != n)
            throw ddecc::ShapeError("line " + std::to_string(lineno) + ": " + std::to_string(w.size()) +
                                    " values, code length is " + std::to_string(n));
        words.push_back(std::move(w));
    }
    return words;
}

std::string bits_string(const ddecc::Bits& bits) {
    std::string s;
    for (auto b : bits) s.push_back(b ? '1' : '0');
    return s;
}

// Options that never go into an artifact: they name outputs, not inputs.
bool is_output_option(const std::string& name) {
    return name == "help" || name == "config" || name == "out" || name == "report" || name == "gnuplot";
}

// Effective settings of a parsed subcommand, as flag name -> value.
Config effective_config(const CLI::App& sub) {
    Config cfg;
    cfg["command"] = sub.get_name();
    for (const CLI::Option* opt : sub.get_options()) {
        const auto& names = opt->get_lnames();
        if (names.empty() || is_output_option(names.front())) continue;
        std::string value;
        if (opt->count() > 0) {
            value = opt->results().back();
        } else {
            value = opt->get_default_str();
        }
        if (!value.empty()) cfg[names.front()] = value;
    }
    return cfg;
}

std::string header(const Config& cfg) {
    std::ostringstream out;
    ddecc::write_config_header(out, cfg);
    return out.str();
}

struct CodeOptions {
    std::string code = "hamming74";
    std::string alist;

    void attach(CLI::App& sub) {
        sub.add_option("--code", code, "built-in code: rep31, hamming74, hamming1511");
        sub.add_option("--alist", alist, "parity-check matrix in alist format (overrides --code)");
    }

    ddecc::ParityCheckMatrix load() const {
        return alist.empty() ? ddecc::builtin_code(code) : ddecc::load_alist_file(alist);
    }
};

struct GridOptions {
    double lo = 1.0;
    double hi = 20.0;
    std::size_t count = 20;

    void attach(CLI::App& sub) {
        sub.add_option("--ls-lo", lo, "smallest line-search step");
        sub.add_option("--ls-hi", hi, "largest line-search step");
        sub.add_option("--ls-count", count, "number of line-search grid points");
    }

    ddecc::LineSearchGrid grid() const {
        ddecc::LineSearchGrid g{lo, hi, count};
        g.validate();
        return g;
    }
};

// Schedule: explicit --schedule wins, then the one stored with the model, then the default.
ddecc::NoiseSchedule pick_schedule(const std::string& flag, const ddecc::nn::Metadata* meta,
                                   const ddecc::ParityCheckMatrix& h) {
    if (!flag.empty()) return ddecc::NoiseSchedule::parse(flag);
    if (meta) {
        auto it = meta->find("schedule");
        if (it != meta->end() && !it->second.empty()) return ddecc::NoiseSchedule::parse(it->second);
    }
    return ddecc::NoiseSchedule::for_code(h);
}

struct TrainOptions {
    CodeOptions code;
    ddecc::TrainConfig cfg;
    std::string backbone = "mlp";
    std::string checkpoint;
    std::string report;

    void attach(CLI::App& sub) {
        cfg.workers = default_workers();
        code.attach(sub);
        sub.add_option("--epochs", cfg.epochs, "training epochs");
        sub.add_option("--batches", cfg.batches_per_epoch, "minibatches per epoch");
        sub.add_option("--batch-size", cfg.batch_size, "samples per minibatch");
        sub.add_option("--lr0", cfg.lr0, "initial learning rate");
        sub.add_option("--lr-min", cfg.lr_min, "final learning rate of the cosine decay");
        sub.add_option("--schedule", cfg.schedule,
                       "noise schedule: constant:b:T, linear:a:b:T or geometric:a:r:T (default constant 0.01, T=n-k)");
        sub.add_option("--backbone", backbone, "mlp or masked_attention");
        sub.add_option("--embed-dim", cfg.arch.embed_dim, "embedding width d");
        sub.add_option("--layers", cfg.arch.layers, "backbone depth N");
        sub.add_option("--heads", cfg.arch.heads, "attention heads");
        sub.add_option("--hidden", cfg.arch.hidden, "hidden width (0 = 4d)");
        sub.add_option("--seed", cfg.seed, "random seed");
        sub.add_option("--workers", cfg.workers, "worker threads (default $DDECC_WORKERS or 1)");
        sub.add_option("--out,--checkpoint", checkpoint, "checkpoint file to write")->required();
        sub.add_option("--report", report, "per-epoch loss CSV");
    }

    int run(const CLI::App& sub) {
        const auto h = code.load();
        cfg.arch.backbone = ddecc::nn::parse_backbone(backbone);
        auto meta = effective_config(sub);
        meta["schedule"] = cfg.resolve_schedule(h).description();
        const auto start = std::chrono::steady_clock::now();
        auto result = ddecc::train(h, cfg, [&](std::size_t epoch, double loss, double lr) {
            std::cerr << "epoch " << epoch + 1 << "/" << cfg.epochs << " loss " << loss << " lr " << lr << '\n';
        });
        ddecc::nn::save_checkpoint(result.model, checkpoint, meta);
        if (!report.empty()) {
            std::string text = header(meta) + "epoch,mean_loss\n";
            for (std::size_t e = 0; e < result.report.epoch_loss.size(); ++e)
                text += std::to_string(e + 1) + "," + ddecc::format_double(result.report.epoch_loss[e]) + "\n";
            emit(report, text);
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cerr << "trained " << result.model.parameter_count() << " parameters in " << secs << " s\n";
        return 0;
    }
};

struct DecodeOptions {
    CodeOptions code;
    GridOptions grid;
    std::string checkpoint;
    std::string input = "-";
    std::string mode = "ls";
    std::string schedule;
    std::size_t max_iters = 0;
    std::size_t workers = default_workers();
    std::string out;

    void attach(CLI::App& sub) {
        code.attach(sub);
        grid.attach(sub);
        sub.add_option("--checkpoint", checkpoint, "trained model")->required();
        sub.add_option("--input", input, "soft values, one word per line ('-' = stdin)");
        sub.add_option("--mode", mode, "regular or ls");
        sub.add_option("--schedule", schedule, "override the schedule stored in the checkpoint");
        sub.add_option("--max-iters", max_iters, "iteration budget (0 = n-k)");
        sub.add_option("--workers", workers, "worker threads");
        sub.add_option("--out", out, "output CSV (default stdout)");
    }

    int run(const CLI::App& sub) {
        const auto h = code.load();
        auto loaded = ddecc::nn::load_checkpoint(checkpoint, h);
        const auto sched = pick_schedule(schedule, &loaded.metadata, h);
        ddecc::DecodeConfig dc;
        if (mode == "regular") dc.mode = ddecc::DecodeMode::regular;
        else if (mode == "ls") dc.mode = ddecc::DecodeMode::line_search;
        else throw ddecc::ParseError("--mode must be regular or ls");
        dc.max_iters = max_iters;
        dc.grid = grid.grid();
        const auto words = read_words(input, h.n());
        const ddecc::ModelPredictor predictor(loaded.model);
        const auto batch = ddecc::decode_batch(predictor, h, sched, words, dc, workers);

        auto cfg = effective_config(sub);
        std::string text = header(cfg) + "word,bits,converged,iters_used,trace\n";
        for (std::size_t i = 0; i < batch.outcomes.size(); ++i) {
            const auto& o = batch.outcomes[i];
            std::string trace;
            for (const auto& t : o.trace) {
                if (!trace.empty()) trace += ';';
                trace += std::to_string(t.parity_errors) + ":" + ddecc::format_double(t.lambda) + ":" +
                         std::to_string(t.weight_after);
            }
            text += std::to_string(i) + "," + bits_string(o.bits) + "," + (o.converged ? "1" : "0") + "," +
                    std::to_string(o.iters_used) + "," + trace + "\n";
        }
        text += "# mean_iters=" + ddecc::format_double(batch.mean_iters) +
                "\n# std_iters=" + ddecc::format_double(batch.std_iters) + "\n";
        emit(out, text);
        return 0;
    }
};

struct BenchOptions {
    CodeOptions code;
    GridOptions grid;
    std::string decoder = "ml";
    std::string ebn0 = "4,5,6";
    std::string channel = "awgn";
    double rayleigh_alpha = 1.0;
    ddecc::BenchOptions opt{};
    std::string checkpoint;
    std::string schedule;
    std::size_t max_iters = 0;
    std::size_t bp_iters = 50;
    std::string out;
    std::string gnuplot;

    void attach(CLI::App& sub) {
        opt.workers = default_workers();
        code.attach(sub);
        grid.attach(sub);
        sub.add_option("--decoder", decoder, "ddecc, ddecc-ls, bp or ml");
        sub.add_option("--ebn0", ebn0, "comma-separated Eb/N0 points in dB");
        sub.add_option("--min-words", opt.stop.min_words, "minimum transmitted words per point");
        sub.add_option("--min-error-frames", opt.stop.min_error_frames, "minimum frames in error per point");
        sub.add_option("--max-words", opt.stop.max_words, "hard cap on words per point");
        sub.add_option("--seed", opt.seed, "random seed");
        sub.add_option("--workers", opt.workers, "worker threads (default $DDECC_WORKERS or 1)");
        sub.add_option("--chunk", opt.chunk, "words per stop-rule check");
        sub.add_option("--channel", channel, "awgn or rayleigh");
        sub.add_option("--rayleigh-alpha", rayleigh_alpha, "Rayleigh scale parameter");
        sub.add_option("--checkpoint", checkpoint, "trained model (ddecc decoders)");
        sub.add_option("--schedule", schedule, "override the schedule stored in the checkpoint");
        sub.add_option("--max-iters", max_iters, "ddecc iteration budget (0 = n-k)");
        sub.add_option("--bp-iters", bp_iters, "belief-propagation iterations");
        sub.add_option("--out", out, "output CSV (default stdout)");
        sub.add_option("--gnuplot", gnuplot, "also write gnuplot data here");
    }

    int run(const CLI::App& sub) {
        const auto h = code.load();
        const auto g = ddecc::systematic_generator(h);
        const auto ebn0s = parse_list(ebn0, "ebn0");
        opt.channel = ddecc::parse_channel_kind(channel);
        opt.rayleigh_alpha = rayleigh_alpha;

        ddecc::DecoderSetup setup;
        setup.kind = ddecc::parse_decoder_kind(decoder);
        setup.bp_iters = bp_iters;
        setup.decode.max_iters = max_iters;
        setup.decode.grid = grid.grid();
        std::optional<ddecc::nn::LoadedCheckpoint> loaded;
        if (setup.kind == ddecc::DecoderKind::ddecc || setup.kind == ddecc::DecoderKind::ddecc_ls) {
            if (checkpoint.empty()) throw ddecc::Error("--checkpoint is required for ddecc decoders");
            loaded.emplace(ddecc::nn::load_checkpoint(checkpoint, h));
            setup.model = &loaded->model;
            setup.schedule = pick_schedule(schedule, &loaded->metadata, h);
        }

        const auto report = ddecc::run_ber(h, g, setup, ebn0s, opt);
        auto cfg = effective_config(sub);
        cfg["meta.n"] = std::to_string(h.n());
        cfg["meta.k"] = std::to_string(h.k());
        emit(out, header(cfg) + std::string(ddecc::ber_csv_header) + "\n" + ddecc::ber_csv_rows(report));
        if (!gnuplot.empty()) emit(gnuplot, header(cfg) + ddecc::ber_gnuplot({&report, 1}));
        return 0;
    }
};

struct OracleOptions {
    CodeOptions code;
    std::string input = "-";
    std::string out;

    void attach(CLI::App& sub) {
        code.attach(sub);
        sub.add_option("--input", input, "soft values, one word per line ('-' = stdin)");
        sub.add_option("--out", out, "output CSV (default stdout)");
    }

    int run(const CLI::App& sub) {
        const auto h = code.load();
        const ddecc::MlDecoder ml(h, ddecc::systematic_generator(h));
        const auto words = read_words(input, h.n());
        std::string text = header(effective_config(sub)) + "word,bits\n";
        for (std::size_t i = 0; i < words.size(); ++i)
            text += std::to_string(i) + "," + bits_string(ml.decode(words[i]).bits) + "\n";
        emit(out, text);
        return 0;
    }
};

struct StudyOptions {
    CodeOptions code;
    GridOptions grid;
    std::string kind = "parity";
    std::string sigmas = "0,0.25,0.5,0.75,1,1.5,2,3,5,10";
    std::string ebn0 = "4";
    std::size_t samples = 1000;
    std::size_t trajectories = 16;
    std::string schedule;
    std::string checkpoint;
    std::uint64_t seed = 0;
    std::string out;

    void attach(CLI::App& sub) {
        code.attach(sub);
        grid.attach(sub);
        sub.add_option("--kind", kind, "parity, lambda or forward");
        sub.add_option("--sigmas", sigmas, "noise levels for the parity study");
        sub.add_option("--ebn0", ebn0, "Eb/N0 points for the lambda histogram");
        sub.add_option("--samples", samples, "words per point");
        sub.add_option("--trajectories", trajectories, "forward-process trajectories");
        sub.add_option("--schedule", schedule, "noise schedule (forward default constant:0.01:100)");
        sub.add_option("--checkpoint", checkpoint, "trained model (lambda study)");
        sub.add_option("--seed", seed, "random seed");
        sub.add_option("--out", out, "output CSV (default stdout)");
    }

    int run(const CLI::App& sub) {
        const auto cfg = effective_config(sub);
        std::string text = header(cfg);
        if (kind == "parity") {
            const auto h = code.load();
            const auto rows =
                ddecc::parity_noise_study(h, ddecc::systematic_generator(h), parse_list(sigmas, "sigmas"), samples, seed);
            text += std::string(ddecc::parity_noise_csv_header) + "\n" + ddecc::parity_noise_csv_rows(rows);
        } else if (kind == "lambda") {
            const auto h = code.load();
            if (checkpoint.empty()) throw ddecc::Error("--checkpoint is required for the lambda study");
            auto loaded = ddecc::nn::load_checkpoint(checkpoint, h);
            const auto sched = pick_schedule(schedule, &loaded.metadata, h);
            const auto g = ddecc::systematic_generator(h);
            const ddecc::ModelPredictor predictor(loaded.model);
            text += std::string(ddecc::lambda_histogram_csv_header) + "\n";
            const auto points = parse_list(ebn0, "ebn0");
            for (std::size_t i = 0; i < points.size(); ++i) {
                const auto hist = ddecc::lambda_histogram(predictor, h, g, sched, points[i], samples, grid.grid(),
                                                          ddecc::derive_seed(seed, i));
                text += ddecc::lambda_histogram_csv_rows(hist);
            }
        } else if (kind == "forward") {
            const auto sched = ddecc::NoiseSchedule::parse(schedule.empty() ? "constant:0.01:100" : schedule);
            ddecc::Rng rng(seed);
            const auto rows = ddecc::forward_process_trace(sched, trajectories, rng);
            text += std::string(ddecc::forward_trace_csv_header) + "\n" + ddecc::forward_trace_csv_rows(rows);
        } else {
            throw ddecc::ParseError("--kind must be parity, lambda or forward");
        }
        emit(out, text);
        return 0;
    }
};

int run(int argc, const char* const* argv);

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

// Reads "key = value" lines (blank lines and '#' comments skipped, optional quotes stripped).
std::vector<std::string> config_file_args(const std::string& path) {
    std::vector<std::string> args;
    std::istringstream in(read_file(path));
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == '[') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ddecc::ParseError(path + ":" + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front())
            value = value.substr(1, value.size() - 2);
        if (key == "config") throw ddecc::ParseError(path + ": nested config files are not supported");
        args.push_back("--" + key);
        args.push_back(value);
    }
    return args;
}

// Splices --config file contents in right after the subcommand, so later command-line flags win.
std::vector<std::string> expand_config(int argc, const char* const* argv) {
    std::vector<std::string> in(argv, argv + argc);
    std::vector<std::string> file_args;
    std::vector<std::string> rest;
    for (std::size_t i = 1; i < in.size(); ++i) {
        if (in[i] == "--config" && i + 1 < in.size()) {
            auto more = config_file_args(in[i + 1]);
            file_args.insert(file_args.end(), more.begin(), more.end());
            ++i;
        } else if (in[i].rfind("--config=", 0) == 0) {
            auto more = config_file_args(in[i].substr(9));
            file_args.insert(file_args.end(), more.begin(), more.end());
        } else {
            rest.push_back(in[i]);
        }
    }
    std::vector<std::string> out{in.empty() ? std::string("ddecc") : in[0]};
    if (!rest.empty()) {
        out.push_back(rest[0]);
        out.insert(out.end(), file_args.begin(), file_args.end());
        out.insert(out.end(), rest.begin() + 1, rest.end());
    }
    return out;
}

// Re-runs the command recorded in an artifact's embedded configuration.
int replay(const std::string& artifact, const std::string& out, const std::string& report) {
    const auto bytes = read_file(artifact);
    const Config cfg =
        ddecc::nn::is_checkpoint(bytes) ? ddecc::nn::checkpoint_metadata(bytes) : ddecc::read_config_header(bytes);
    auto it = cfg.find("command");
    if (it == cfg.end()) throw ddecc::ParseError("'" + artifact + "' carries no embedded configuration");
    std::vector<std::string> args{"ddecc", it->second};
    for (const auto& [key, value] : cfg) {
        if (key == "command" || key.rfind("meta.", 0) == 0) continue;
        if (it->second == "train" && key == "schedule") continue;  // derived; --schedule is re-recorded below
        args.push_back("--" + key);
        args.push_back(value);
    }
    if (it->second == "train") {
        // The resolved schedule equals the flag value or the default, so replaying it is exact.
        args.push_back("--schedule");
        args.push_back(cfg.at("schedule"));
    }
    if (!out.empty()) {
        args.push_back("--out");
        args.push_back(out);
    }
    if (!report.empty()) {
        args.push_back("--report");
        args.push_back(report);
    }
    std::vector<const char*> ptrs;
    for (const auto& a : args) ptrs.push_back(a.c_str());
    return run(static_cast<int>(ptrs.size()), ptrs.data());
}

int run(int argc, const char* const* argv) {
    CLI::App app{"Denoising diffusion error correction codes"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    TrainOptions train;
    DecodeOptions decode;
    BenchOptions bench;
    OracleOptions oracle;
    StudyOptions study;
    std::string replay_artifact, replay_out, replay_report;

    auto* train_cmd = app.add_subcommand("train", "train a denoiser on the all-zero codeword");
    auto* decode_cmd = app.add_subcommand("decode", "decode soft words with a trained model");
    auto* bench_cmd = app.add_subcommand("bench", "Monte-Carlo BER/FER measurement");
    auto* oracle_cmd = app.add_subcommand("oracle", "brute-force maximum-likelihood decoding");
    auto* study_cmd = app.add_subcommand("study", "parity-noise study, step-size histogram, forward trace");
    auto* replay_cmd = app.add_subcommand("replay", "re-run the command embedded in an artifact");
    train.attach(*train_cmd);
    decode.attach(*decode_cmd);
    bench.attach(*bench_cmd);
    oracle.attach(*oracle_cmd);
    study.attach(*study_cmd);
    replay_cmd->add_option("artifact", replay_artifact, "CSV or checkpoint written by ddecc")->required();
    replay_cmd->add_option("--out", replay_out, "output path for the re-run");
    replay_cmd->add_option("--report", replay_report, "loss report path (train artifacts)");
    std::string config_unused;
    for (auto* sub : {train_cmd, decode_cmd, bench_cmd, oracle_cmd, study_cmd})
        sub->add_option("--config", config_unused, "key=value settings file; command-line flags take precedence");

    const auto expanded = expand_config(argc, argv);
    std::vector<const char*> expanded_ptrs;
    for (const auto& a : expanded) expanded_ptrs.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(expanded_ptrs.size()), expanded_ptrs.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: usage: " << e.what() << '\n';
        std::cerr << app.help();
        return 2;
    }

    if (*train_cmd) return train.run(*train_cmd);
    if (*decode_cmd) return decode.run(*decode_cmd);
    if (*bench_cmd) return bench.run(*bench_cmd);
    if (*oracle_cmd) return oracle.run(*oracle_cmd);
    if (*study_cmd) return study.run(*study_cmd);
    return replay(replay_artifact, replay_out, replay_report);
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ddecc::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
