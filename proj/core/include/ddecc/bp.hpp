#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ddecc/gf2.hpp"

namespace ddecc {

inline constexpr double bp_llr_clamp = 30.0;

/// Edge-indexed Tanner graph of H. Edge e joins variable edge_var[e] and check edge_check[e].
struct TannerGraph {
    explicit TannerGraph(const ParityCheckMatrix& h);

    std::size_t variables = 0;
    std::size_t checks = 0;
    std::vector<std::size_t> edge_var;
    std::vector<std::size_t> edge_check;
    std::vector<std::vector<std::size_t>> var_edges;
    std::vector<std::vector<std::size_t>> check_edges;

    std::size_t edges() const noexcept { return edge_var.size(); }
};

// Tanh-rule extrinsic update: out[i] = 2 atanh(prod_{j != i} tanh(in[j] / 2)), clamped to +-bp_llr_clamp.
void check_node_update(std::span<const double> in, std::span<double> out);

struct BpResult {
    Bits bits;
    bool converged = false;
    std::size_t iters = 0;
    std::vector<double> posterior;  // a-posteriori LLRs (positive favours bit 0)
};

/// Flooding sum-product decoder. Holds its own message buffers, so use one
/// instance per thread.
class BpDecoder {
public:
    explicit BpDecoder(const ParityCheckMatrix& h);

    // Channel LLRs are 2 y / sigma^2. Stops early once the hard decision satisfies every check.
    BpResult decode(std::span<const double> y, double sigma, std::size_t max_iters);
    BpResult decode_llr(std::span<const double> channel_llr, std::size_t max_iters);

    const TannerGraph& graph() const noexcept { return graph_; }

private:
    bool hard_decision_valid(const std::vector<double>& llr, PackedRow& word) const;

    const ParityCheckMatrix* h_;
    TannerGraph graph_;
    std::vector<double> v2c_;
    std::vector<double> c2v_;
    std::vector<double> in_buf_;
    std::vector<double> out_buf_;
};

BpResult bp_decode(const ParityCheckMatrix& h, std::span<const double> y, double sigma, std::size_t max_iters);

}  // namespace ddecc
