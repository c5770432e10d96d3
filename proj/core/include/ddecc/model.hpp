#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ddecc/autograd.hpp"
#include "ddecc/gf2.hpp"

namespace ddecc::nn {

enum class Backbone { mlp, masked_attention };

std::string_view to_string(Backbone b) noexcept;
Backbone parse_backbone(std::string_view s);

struct ArchConfig {
    Backbone backbone = Backbone::mlp;
    std::size_t embed_dim = 32;
    std::size_t layers = 2;
    std::size_t heads = 1;
    std::size_t hidden = 0;  // 0 selects 4 * embed_dim

    std::size_t hidden_width() const noexcept { return hidden ? hidden : 4 * embed_dim; }
};

struct NamedTensor {
    std::string name;
    Tensor tensor;
};

// Decoder input: [|y|, s(y)] of length 2n-k and the parity error count e.
struct Preprocessed {
    std::vector<double> features;
    std::size_t parity_errors = 0;
};

Preprocessed preprocess(std::span<const double> y, const ParityCheckMatrix& h);

/// Parity-count conditioned noise predictor eps_theta: R^{2n-k} -> R^n.
///
/// Each of the 2n-k input scalars is lifted to a d-vector by its own learned
/// weight row, then multiplied elementwise by the conditioning row psi(e)
/// taken from an (n-k+1) x d table. The backbone is either an MLP over the
/// flattened embeddings or a stack of pre-norm self-attention blocks whose
/// attention pattern follows the Tanner graph of H. Outputs are logits of
/// bin(eps_tilde), one per code bit.
class DenoiserModel {
public:
    DenoiserModel(const ParityCheckMatrix& h, ArchConfig arch, std::uint64_t seed);

    std::size_t n() const noexcept { return n_; }
    std::size_t k() const noexcept { return k_; }
    std::size_t input_dim() const noexcept { return 2 * n_ - k_; }
    std::size_t condition_rows() const noexcept { return n_ - k_ + 1; }
    const ArchConfig& arch() const noexcept { return arch_; }

    std::vector<NamedTensor>& parameters() noexcept { return params_; }
    const std::vector<NamedTensor>& parameters() const noexcept { return params_; }
    Tensor& parameter(std::string_view name);
    const Tensor& parameter(std::string_view name) const;
    std::size_t parameter_count() const noexcept;

    // Token i may attend to token j iff they share a parity check (self always allowed).
    const std::vector<std::vector<std::size_t>>& attention_neighbours() const noexcept { return neighbours_; }

    struct Graph {
        Var logits;               // [B, n]
        std::vector<Var> params;  // same order as parameters()
    };
    // features is [B, 2n-k]; parity_errors has B entries in [0, n-k].
    Graph build(Tape& tape, Var features, std::span<const std::size_t> parity_errors,
                bool param_grads = true) const;

    std::vector<double> forward(std::span<const double> features, std::size_t parity_errors) const;
    std::vector<double> forward_batch(std::span<const double> features,
                                      std::span<const std::size_t> parity_errors) const;

private:
    Var build_mlp(Tape& tape, Var embedded, std::size_t batch, std::vector<Var>& p) const;
    Var build_attention(Tape& tape, Var embedded, std::size_t batch, std::vector<Var>& p) const;
    void add_param(std::string name, std::vector<std::size_t> shape);

    std::size_t n_ = 0;
    std::size_t k_ = 0;
    ArchConfig arch_;
    std::vector<NamedTensor> params_;
    std::vector<std::vector<std::size_t>> neighbours_;
};

}  // namespace ddecc::nn
