#include "ddecc/bp.hpp"

#include <algorithm>
#include <cmath>

#include "ddecc/error.hpp"

namespace ddecc {

TannerGraph::TannerGraph(const ParityCheckMatrix& h)
    : variables(h.n()), checks(h.checks()), var_edges(h.n()), check_edges(h.checks()) {
    for (std::size_t c = 0; c < h.checks(); ++c) {
        for (auto v : h.row_support(c)) {
            const std::size_t e = edge_var.size();
            edge_var.push_back(v);
            edge_check.push_back(c);
            var_edges[v].push_back(e);
            check_edges[c].push_back(e);
        }
    }
}

namespace {

double clamp_llr(double v) { return std::clamp(v, -bp_llr_clamp, bp_llr_clamp); }

}  // namespace

void check_node_update(std::span<const double> in, std::span<double> out) {
    const std::size_t deg = in.size();
    if (out.size() != deg) throw ShapeError("check_node_update: size mismatch");
    if (deg == 0) return;
    // Prefix/suffix products avoid dividing by a zero tanh.
    thread_local std::vector<double> t, prefix, suffix;
    t.resize(deg);
    prefix.assign(deg + 1, 1.0);
    suffix.assign(deg + 1, 1.0);
    for (std::size_t i = 0; i < deg; ++i) t[i] = std::tanh(0.5 * clamp_llr(in[i]));
    for (std::size_t i = 0; i < deg; ++i) prefix[i + 1] = prefix[i] * t[i];
    for (std::size_t i = deg; i-- > 0;) suffix[i] = suffix[i + 1] * t[i];
    for (std::size_t i = 0; i < deg; ++i) {
        const double p = std::clamp(prefix[i] * suffix[i + 1], -1.0, 1.0);
        out[i] = clamp_llr(2.0 * std::atanh(p));
    }
}

BpDecoder::BpDecoder(const ParityCheckMatrix& h)
    : h_(&h), graph_(h), v2c_(graph_.edges()), c2v_(graph_.edges()) {}

bool BpDecoder::hard_decision_valid(const std::vector<double>& llr, PackedRow& word) const {
    for (std::size_t v = 0; v < llr.size(); ++v) word.set(v, llr[v] < 0.0);
    return h_->syndrome_weight(word) == 0;
}

BpResult BpDecoder::decode(std::span<const double> y, double sigma, std::size_t max_iters) {
    if (!(sigma > 0.0)) throw RangeError("bp_decode: sigma must be positive");
    std::vector<double> llr(y.size());
    const double scale = 2.0 / (sigma * sigma);
    for (std::size_t i = 0; i < y.size(); ++i) llr[i] = scale * y[i];
    return decode_llr(llr, max_iters);
}

BpResult BpDecoder::decode_llr(std::span<const double> channel_llr, std::size_t max_iters) {
    if (channel_llr.size() != graph_.variables) throw ShapeError("bp_decode: word length mismatch");
    BpResult out;
    out.posterior.assign(channel_llr.begin(), channel_llr.end());
    PackedRow word(graph_.variables);

    if (!hard_decision_valid(out.posterior, word)) {
        for (std::size_t e = 0; e < graph_.edges(); ++e) v2c_[e] = clamp_llr(channel_llr[graph_.edge_var[e]]);
        for (std::size_t it = 1; it <= max_iters; ++it) {
            for (std::size_t c = 0; c < graph_.checks; ++c) {
                const auto& edges = graph_.check_edges[c];
                in_buf_.resize(edges.size());
                out_buf_.resize(edges.size());
                for (std::size_t j = 0; j < edges.size(); ++j) in_buf_[j] = v2c_[edges[j]];
                check_node_update(in_buf_, out_buf_);
                for (std::size_t j = 0; j < edges.size(); ++j) c2v_[edges[j]] = out_buf_[j];
            }
            for (std::size_t v = 0; v < graph_.variables; ++v) {
                double total = channel_llr[v];
                for (auto e : graph_.var_edges[v]) total += c2v_[e];
                out.posterior[v] = total;
                for (auto e : graph_.var_edges[v]) v2c_[e] = clamp_llr(total - c2v_[e]);
            }
            out.iters = it;
            if (hard_decision_valid(out.posterior, word)) {
                out.converged = true;
                break;
            }
        }
    } else {
        out.converged = true;
    }
    out.bits = word.to_bits();
    return out;
}

BpResult bp_decode(const ParityCheckMatrix& h, std::span<const double> y, double sigma, std::size_t max_iters) {
    return BpDecoder(h).decode(y, sigma, max_iters);
}

}  // namespace ddecc
