#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace ddecc::nn {

/// Dense row-major array of doubles with an optional gradient buffer.
struct Tensor {
    std::vector<std::size_t> shape;
    std::vector<double> values;
    std::vector<double> grad;

    Tensor() = default;
    explicit Tensor(std::vector<std::size_t> shape_, double fill = 0.0);
    Tensor(std::vector<std::size_t> shape_, std::vector<double> values_);

    std::size_t size() const noexcept { return values.size(); }
    // Rows/cols of the 2-D view: the last dimension is the column count.
    std::size_t cols() const noexcept { return shape.empty() ? 1 : shape.back(); }
    std::size_t rows() const noexcept { return cols() == 0 ? 0 : values.size() / cols(); }
    void zero_grad();
};

std::size_t shape_size(const std::vector<std::size_t>& shape) noexcept;

class Tape;

// Handle to a node recorded on a Tape. Cheap to copy; only valid while the tape lives.
class Var {
public:
    Var() = default;

    std::size_t rows() const;
    std::size_t cols() const;
    std::span<const double> value() const;
    std::span<const double> grad() const;
    double scalar() const;

    Tape* tape() const noexcept { return tape_; }
    std::size_t id() const noexcept { return id_; }

private:
    friend class Tape;
    Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

    Tape* tape_ = nullptr;
    std::size_t id_ = 0;
};

/// Wengert list for reverse-mode differentiation over 2-D arrays.
///
/// Every op appends a node holding its value and a closure that pushes the
/// node's gradient to its parents. Parameter leaves reference external
/// storage (no copy); their gradients live on the tape until collected.
/// A tape supports exactly one backward pass.
class Tape {
public:
    Tape() = default;
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    Var constant(std::size_t rows, std::size_t cols, std::vector<double> values);
    Var input(std::size_t rows, std::size_t cols, std::vector<double> values, bool requires_grad = true);
    // The tensor must outlive the tape and stay unmodified until backward() returns.
    Var parameter(const Tensor& t, bool requires_grad = true);

    void backward(Var loss);
    bool consumed() const noexcept { return consumed_; }
    std::size_t size() const noexcept { return nodes_.size(); }

    // Adds the gradient accumulated on `v` into `dst` (same length).
    void accumulate_grad(Var v, std::span<double> dst) const;

    // Low-level hooks used by op implementations.
    // The closure receives the tape and the node it belongs to.
    using BackwardFn = std::function<void(Tape&, Var)>;
    Var record(std::size_t rows, std::size_t cols, std::vector<double> value, bool requires_grad,
               BackwardFn backward);
    bool requires_grad(Var v) const { return node(v).requires_grad; }
    std::span<const double> value_of(Var v) const;
    std::span<const double> grad_of(Var v) const;
    std::span<double> mutable_grad(Var v);
    std::size_t rows_of(Var v) const { return node(v).rows; }
    std::size_t cols_of(Var v) const { return node(v).cols; }

private:
    struct Node {
        std::size_t rows = 0;
        std::size_t cols = 0;
        std::vector<double> owned;
        const double* external = nullptr;
        std::vector<double> grad;
        bool requires_grad = false;
        BackwardFn backward;
    };

    const Node& node(Var v) const;
    Node& node(Var v);

    std::vector<Node> nodes_;
    bool consumed_ = false;
};

// ---- ops -----------------------------------------------------------------

Var matmul(Var a, Var b);                  // [m,k] x [k,n]
Var add(Var a, Var b);                     // same shape
Var add_bias(Var a, Var bias);             // [m,n] + [1,n]
Var gelu(Var a);                           // tanh approximation
Var layer_norm(Var x, Var gamma, Var beta, double eps = 1e-5);
Var reshape(Var a, std::size_t rows, std::size_t cols);

/// Token embedding with multiplicative conditioning.
/// features [B, L]; weight [L, d]; table [E, d]; rows[b] selects a table row.
/// Output [B*L, d] with out[b*L+i] = features[b,i] * weight[i] .* table[rows[b]].
Var embed_tokens(Var features, Var weight, Var table, std::span<const std::size_t> rows);

/// Single- or multi-head scaled dot-product attention restricted to `neighbours`.
/// q, k, v are [B*L, d]; neighbours[i] lists the tokens i may attend to.
Var masked_attention(Var q, Var k, Var v, const std::vector<std::vector<std::size_t>>& neighbours,
                     std::size_t batch, std::size_t heads);

// Keeps the first `keep` token rows of each sample: [B*L, d] -> [B*keep, d].
Var take_leading_tokens(Var x, std::size_t batch, std::size_t tokens, std::size_t keep);

// Mean binary cross-entropy over all entries, computed from logits.
Var bce_with_logits(Var logits, std::span<const double> targets);

// sum_i a_i * w_i with constant weights; handy as a probe loss.
Var weighted_sum(Var a, std::span<const double> weights);

}  // namespace ddecc::nn
