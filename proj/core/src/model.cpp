#include "ddecc/model.hpp"

#include <algorithm>
#include <cmath>

#include "ddecc/error.hpp"
#include "ddecc/rng.hpp"

namespace ddecc::nn {

std::string_view to_string(Backbone b) noexcept {
    return b == Backbone::mlp ? "mlp" : "masked_attention";
}

Backbone parse_backbone(std::string_view s) {
    if (s == "mlp") return Backbone::mlp;
    if (s == "masked_attention" || s == "attention") return Backbone::masked_attention;
    throw ParseError("unknown backbone '" + std::string(s) + "'");
}

Preprocessed preprocess(std::span<const double> y, const ParityCheckMatrix& h) {
    const auto s = syndrome(h, y);
    Preprocessed out;
    out.features.reserve(y.size() + s.bits.size());
    for (double v : y) out.features.push_back(std::abs(v));
    for (auto b : s.bits) out.features.push_back(static_cast<double>(b));
    out.parity_errors = s.weight;
    return out;
}

void DenoiserModel::add_param(std::string name, std::vector<std::size_t> shape) {
    params_.push_back(NamedTensor{std::move(name), Tensor(std::move(shape), 0.0)});
}

DenoiserModel::DenoiserModel(const ParityCheckMatrix& h, ArchConfig arch, std::uint64_t seed)
    : n_(h.n()), k_(h.k()), arch_(arch) {
    const std::size_t d = arch_.embed_dim;
    const std::size_t tokens = input_dim();
    const std::size_t hidden = arch_.hidden_width();
    if (d == 0 || arch_.layers == 0) throw RangeError("model needs embed_dim > 0 and layers > 0");
    if (arch_.backbone == Backbone::masked_attention && (arch_.heads == 0 || d % arch_.heads != 0))
        throw RangeError("embed_dim must be divisible by the head count");

    add_param("embed.weight", {tokens, d});
    add_param("cond.table", {condition_rows(), d});
    if (arch_.backbone == Backbone::mlp) {
        std::size_t width = tokens * d;
        for (std::size_t l = 0; l < arch_.layers; ++l) {
            add_param("mlp." + std::to_string(l) + ".weight", {width, hidden});
            add_param("mlp." + std::to_string(l) + ".bias", {1, hidden});
            width = hidden;
        }
        add_param("head.weight", {width, n_});
        add_param("head.bias", {1, n_});
    } else {
        for (std::size_t l = 0; l < arch_.layers; ++l) {
            const std::string p = "layer" + std::to_string(l) + ".";
            add_param(p + "ln1.gamma", {1, d});
            add_param(p + "ln1.beta", {1, d});
            add_param(p + "attn.wq", {d, d});
            add_param(p + "attn.wk", {d, d});
            add_param(p + "attn.wv", {d, d});
            add_param(p + "attn.wo", {d, d});
            add_param(p + "ln2.gamma", {1, d});
            add_param(p + "ln2.beta", {1, d});
            add_param(p + "ffn.w1", {d, hidden});
            add_param(p + "ffn.b1", {1, hidden});
            add_param(p + "ffn.w2", {hidden, d});
            add_param(p + "ffn.b2", {1, d});
        }
        add_param("final_ln.gamma", {1, d});
        add_param("final_ln.beta", {1, d});
        add_param("head.weight", {d, 1});
        add_param("head.bias", {1, n_});
    }

    Rng rng(seed);
    for (auto& [name, t] : params_) {
        const auto ends_with = [&](std::string_view suffix) {
            return name.size() >= suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0;
        };
        if (name == "cond.table") {
            for (auto& v : t.values) v = 1.0 + 0.01 * rng.normal();
        } else if (name == "embed.weight") {
            for (auto& v : t.values) v = rng.normal();
        } else if (ends_with("gamma")) {
            std::fill(t.values.begin(), t.values.end(), 1.0);
        } else if (ends_with("beta") || ends_with("bias") || ends_with(".b1") || ends_with(".b2")) {
            std::fill(t.values.begin(), t.values.end(), 0.0);
        } else {
            const double fan_in = static_cast<double>(t.shape.front());
            double scale = 1.0 / std::sqrt(fan_in);
            if (name == "head.weight") scale *= 0.1;  // start with logits near zero
            for (auto& v : t.values) v = scale * rng.normal();
        }
    }

    // Tanner-graph attention pattern over [n magnitude tokens | n-k syndrome tokens].
    neighbours_.assign(tokens, {});
    const std::size_t m = h.checks();
    for (std::size_t i = 0; i < n_; ++i) {
        std::vector<std::uint8_t> linked(tokens, 0);
        linked[i] = 1;
        for (auto r : h.col_support(i)) {
            linked[n_ + r] = 1;
            for (auto j : h.row_support(r)) linked[j] = 1;
        }
        for (std::size_t j = 0; j < tokens; ++j)
            if (linked[j]) neighbours_[i].push_back(j);
    }
    for (std::size_t r = 0; r < m; ++r) {
        auto& nb = neighbours_[n_ + r];
        nb = h.row_support(r);
        nb.push_back(n_ + r);
    }
}

Tensor& DenoiserModel::parameter(std::string_view name) {
    for (auto& p : params_)
        if (p.name == name) return p.tensor;
    throw RangeError("no parameter named '" + std::string(name) + "'");
}

const Tensor& DenoiserModel::parameter(std::string_view name) const {
    for (const auto& p : params_)
        if (p.name == name) return p.tensor;
    throw RangeError("no parameter named '" + std::string(name) + "'");
}

std::size_t DenoiserModel::parameter_count() const noexcept {
    std::size_t total = 0;
    for (const auto& p : params_) total += p.tensor.size();
    return total;
}

DenoiserModel::Graph DenoiserModel::build(Tape& tape, Var features, std::span<const std::size_t> parity_errors,
                                          bool param_grads) const {
    const std::size_t batch = features.rows();
    if (features.cols() != input_dim())
        throw ShapeError("feature width " + std::to_string(features.cols()) + " != 2n-k=" +
                         std::to_string(input_dim()));
    if (parity_errors.size() != batch) throw ShapeError("one parity error count per sample required");
    for (auto e : parity_errors)
        if (e >= condition_rows())
            throw RangeError("parity error count " + std::to_string(e) + " outside [0, " +
                             std::to_string(condition_rows() - 1) + "]");

    Graph g;
    g.params.reserve(params_.size());
    for (const auto& p : params_) g.params.push_back(tape.parameter(p.tensor, param_grads));

    Var embedded = embed_tokens(features, g.params[0], g.params[1], parity_errors);
    g.logits = arch_.backbone == Backbone::mlp ? build_mlp(tape, embedded, batch, g.params)
                                               : build_attention(tape, embedded, batch, g.params);
    return g;
}

Var DenoiserModel::build_mlp(Tape&, Var embedded, std::size_t batch, std::vector<Var>& p) const {
    std::size_t cursor = 2;
    Var x = reshape(embedded, batch, input_dim() * arch_.embed_dim);
    for (std::size_t l = 0; l < arch_.layers; ++l) {
        x = gelu(add_bias(matmul(x, p[cursor]), p[cursor + 1]));
        cursor += 2;
    }
    return add_bias(matmul(x, p[cursor]), p[cursor + 1]);
}

Var DenoiserModel::build_attention(Tape&, Var embedded, std::size_t batch, std::vector<Var>& p) const {
    const std::size_t tokens = input_dim();
    std::size_t cursor = 2;
    Var x = embedded;
    for (std::size_t l = 0; l < arch_.layers; ++l) {
        const Var* w = &p[cursor];
        Var h = layer_norm(x, w[0], w[1]);
        Var att = masked_attention(matmul(h, w[2]), matmul(h, w[3]), matmul(h, w[4]), neighbours_, batch,
                                   arch_.heads);
        x = add(x, matmul(att, w[5]));
        h = layer_norm(x, w[6], w[7]);
        Var ff = add_bias(matmul(gelu(add_bias(matmul(h, w[8]), w[9])), w[10]), w[11]);
        x = add(x, ff);
        cursor += 12;
    }
    x = layer_norm(x, p[cursor], p[cursor + 1]);
    Var bits = take_leading_tokens(x, batch, tokens, n_);
    Var per_bit = matmul(bits, p[cursor + 2]);  // [B*n, 1]
    return add_bias(reshape(per_bit, batch, n_), p[cursor + 3]);
}

std::vector<double> DenoiserModel::forward_batch(std::span<const double> features,
                                                 std::span<const std::size_t> parity_errors) const {
    const std::size_t batch = parity_errors.size();
    if (features.size() != batch * input_dim()) throw ShapeError("forward: feature buffer size mismatch");
    Tape tape;
    Var f = tape.constant(batch, input_dim(), std::vector<double>(features.begin(), features.end()));
    auto g = build(tape, f, parity_errors, false);
    const auto v = g.logits.value();
    return {v.begin(), v.end()};
}

std::vector<double> DenoiserModel::forward(std::span<const double> features, std::size_t parity_errors) const {
    const std::size_t e[1] = {parity_errors};
    return forward_batch(features, e);
}

}  // namespace ddecc::nn
