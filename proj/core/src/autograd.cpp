#include "ddecc/autograd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ddecc/error.hpp"

namespace ddecc::nn {

std::size_t shape_size(const std::vector<std::size_t>& shape) noexcept {
    std::size_t n = 1;
    for (auto d : shape) n *= d;
    return n;
}

Tensor::Tensor(std::vector<std::size_t> shape_, double fill)
    : shape(std::move(shape_)), values(shape_size(shape), fill) {}

Tensor::Tensor(std::vector<std::size_t> shape_, std::vector<double> values_)
    : shape(std::move(shape_)), values(std::move(values_)) {
    if (values.size() != shape_size(shape)) throw ShapeError("tensor values do not match its shape");
}

void Tensor::zero_grad() { grad.assign(values.size(), 0.0); }

std::size_t Var::rows() const { return tape_->rows_of(*this); }
std::size_t Var::cols() const { return tape_->cols_of(*this); }
std::span<const double> Var::value() const { return tape_->value_of(*this); }
std::span<const double> Var::grad() const { return tape_->grad_of(*this); }

double Var::scalar() const {
    if (rows() != 1 || cols() != 1) throw ShapeError("scalar() on a non-scalar node");
    return value()[0];
}

const Tape::Node& Tape::node(Var v) const {
    if (v.tape_ != this || v.id_ >= nodes_.size()) throw GraphError("variable does not belong to this tape");
    return nodes_[v.id_];
}

Tape::Node& Tape::node(Var v) {
    if (v.tape_ != this || v.id_ >= nodes_.size()) throw GraphError("variable does not belong to this tape");
    return nodes_[v.id_];
}

Var Tape::record(std::size_t rows, std::size_t cols, std::vector<double> value, bool requires_grad,
                 BackwardFn backward) {
    if (consumed_) throw GraphError("tape already consumed by backward()");
    if (value.size() != rows * cols) throw ShapeError("node value size does not match its shape");
    Node n;
    n.rows = rows;
    n.cols = cols;
    n.owned = std::move(value);
    n.requires_grad = requires_grad;
    if (requires_grad) n.backward = std::move(backward);
    nodes_.push_back(std::move(n));
    return Var(this, nodes_.size() - 1);
}

Var Tape::constant(std::size_t rows, std::size_t cols, std::vector<double> values) {
    return record(rows, cols, std::move(values), false, {});
}

Var Tape::input(std::size_t rows, std::size_t cols, std::vector<double> values, bool requires_grad) {
    return record(rows, cols, std::move(values), requires_grad, {});
}

Var Tape::parameter(const Tensor& t, bool requires_grad) {
    if (consumed_) throw GraphError("tape already consumed by backward()");
    Node n;
    n.cols = t.cols();
    n.rows = t.rows();
    n.external = t.values.data();
    n.requires_grad = requires_grad;
    nodes_.push_back(std::move(n));
    return Var(this, nodes_.size() - 1);
}

std::span<const double> Tape::value_of(Var v) const {
    const auto& n = node(v);
    if (n.external) return {n.external, n.rows * n.cols};
    return n.owned;
}

std::span<const double> Tape::grad_of(Var v) const {
    const auto& n = node(v);
    return n.grad;
}

std::span<double> Tape::mutable_grad(Var v) {
    auto& n = node(v);
    if (n.grad.empty()) n.grad.assign(n.rows * n.cols, 0.0);
    return n.grad;
}

void Tape::backward(Var loss) {
    if (consumed_) throw GraphError("backward() called twice on the same tape");
    const auto& root = node(loss);
    if (root.rows * root.cols != 1) throw ShapeError("backward() needs a scalar loss");
    consumed_ = true;
    for (auto& n : nodes_)
        if (n.requires_grad) n.grad.assign(n.rows * n.cols, 0.0);
    if (!root.requires_grad) return;
    nodes_[loss.id_].grad[0] = 1.0;
    for (std::size_t i = loss.id_ + 1; i-- > 0;) {
        auto& n = nodes_[i];
        if (n.requires_grad && n.backward) n.backward(*this, Var(this, i));
    }
}

void Tape::accumulate_grad(Var v, std::span<double> dst) const {
    const auto& n = node(v);
    if (dst.size() != n.rows * n.cols) throw ShapeError("accumulate_grad: destination size mismatch");
    if (n.grad.empty()) return;
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += n.grad[i];
}

namespace {

Tape& same_tape(Var a, Var b) {
    if (a.tape() == nullptr || a.tape() != b.tape()) throw GraphError("operands live on different tapes");
    return *a.tape();
}

std::string dims(Var v) { return "[" + std::to_string(v.rows()) + "," + std::to_string(v.cols()) + "]"; }

}  // namespace

Var matmul(Var a, Var b) {
    Tape& tape = same_tape(a, b);
    const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
    if (b.rows() != k) throw ShapeError("matmul: " + dims(a) + " x " + dims(b));
    const auto av = a.value();
    const auto bv = b.value();
    std::vector<double> out(m * n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        double* orow = out.data() + i * n;
        for (std::size_t p = 0; p < k; ++p) {
            const double aip = av[i * k + p];
            if (aip == 0.0) continue;
            const double* brow = bv.data() + p * n;
            for (std::size_t j = 0; j < n; ++j) orow[j] += aip * brow[j];
        }
    }
    const bool rg = tape.requires_grad(a) || tape.requires_grad(b);
    return tape.record(m, n, std::move(out), rg, [a, b, m, k, n](Tape& t, Var self) {
        const auto g = t.grad_of(self);
        const auto av = t.value_of(a);
        const auto bv = t.value_of(b);
        if (t.requires_grad(a)) {
            // dA = G B^T
            auto ga = t.mutable_grad(a);
            for (std::size_t i = 0; i < m; ++i) {
                const double* grow = g.data() + i * n;
                for (std::size_t p = 0; p < k; ++p) {
                    const double* brow = bv.data() + p * n;
                    double acc = 0.0;
                    for (std::size_t j = 0; j < n; ++j) acc += grow[j] * brow[j];
                    ga[i * k + p] += acc;
                }
            }
        }
        if (t.requires_grad(b)) {
            // dB = A^T G
            auto gb = t.mutable_grad(b);
            for (std::size_t i = 0; i < m; ++i) {
                const double* grow = g.data() + i * n;
                for (std::size_t p = 0; p < k; ++p) {
                    const double aip = av[i * k + p];
                    if (aip == 0.0) continue;
                    double* gbrow = gb.data() + p * n;
                    for (std::size_t j = 0; j < n; ++j) gbrow[j] += aip * grow[j];
                }
            }
        }
    });
}

Var add(Var a, Var b) {
    Tape& tape = same_tape(a, b);
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("add: " + dims(a) + " + " + dims(b));
    const auto av = a.value();
    const auto bv = b.value();
    std::vector<double> out(av.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] + bv[i];
    const bool rg = tape.requires_grad(a) || tape.requires_grad(b);
    return tape.record(a.rows(), a.cols(), std::move(out), rg, [a, b](Tape& t, Var self) {
        const auto g = t.grad_of(self);
        for (Var parent : {a, b}) {
            if (!t.requires_grad(parent)) continue;
            auto gp = t.mutable_grad(parent);
            for (std::size_t i = 0; i < g.size(); ++i) gp[i] += g[i];
        }
    });
}

Var add_bias(Var a, Var bias) {
    Tape& tape = same_tape(a, bias);
    const std::size_t m = a.rows(), n = a.cols();
    if (bias.rows() * bias.cols() != n) throw ShapeError("add_bias: " + dims(a) + " + " + dims(bias));
    const auto av = a.value();
    const auto bv = bias.value();
    std::vector<double> out(m * n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) out[i * n + j] = av[i * n + j] + bv[j];
    const bool rg = tape.requires_grad(a) || tape.requires_grad(bias);
    return tape.record(m, n, std::move(out), rg, [a, bias, m, n](Tape& t, Var self) {
        const auto g = t.grad_of(self);
        if (t.requires_grad(a)) {
            auto ga = t.mutable_grad(a);
            for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
        }
        if (t.requires_grad(bias)) {
            auto gb = t.mutable_grad(bias);
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < n; ++j) gb[j] += g[i * n + j];
        }
    });
}

namespace {

constexpr double gelu_c = 0.7978845608028654;  // sqrt(2/pi)
constexpr double gelu_a = 0.044715;

}  // namespace

Var gelu(Var a) {
    Tape& tape = *a.tape();
    const auto av = a.value();
    std::vector<double> out(av.size());
    for (std::size_t i = 0; i < av.size(); ++i) {
        const double x = av[i];
        out[i] = 0.5 * x * (1.0 + std::tanh(gelu_c * (x + gelu_a * x * x * x)));
    }
    return tape.record(a.rows(), a.cols(), std::move(out), tape.requires_grad(a), [a](Tape& t, Var self) {
        const auto g = t.grad_of(self);
        const auto av = t.value_of(a);
        auto ga = t.mutable_grad(a);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double x = av[i];
            const double th = std::tanh(gelu_c * (x + gelu_a * x * x * x));
            const double d = 0.5 * (1.0 + th) + 0.5 * x * (1.0 - th * th) * gelu_c * (1.0 + 3.0 * gelu_a * x * x);
            ga[i] += g[i] * d;
        }
    });
}

Var layer_norm(Var x, Var gamma, Var beta, double eps) {
    Tape& tape = same_tape(x, gamma);
    same_tape(x, beta);
    const std::size_t m = x.rows(), n = x.cols();
    if (gamma.rows() * gamma.cols() != n || beta.rows() * beta.cols() != n)
        throw ShapeError("layer_norm: affine parameters must have " + std::to_string(n) + " entries");
    const auto xv = x.value();
    const auto gv = gamma.value();
    const auto bv = beta.value();
    std::vector<double> out(m * n);
    std::vector<double> xhat(m * n);
    std::vector<double> inv_std(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double* row = xv.data() + i * n;
        double mean = 0.0;
        for (std::size_t j = 0; j < n; ++j) mean += row[j];
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t j = 0; j < n; ++j) var += (row[j] - mean) * (row[j] - mean);
        var /= static_cast<double>(n);
        inv_std[i] = 1.0 / std::sqrt(var + eps);
        for (std::size_t j = 0; j < n; ++j) {
            xhat[i * n + j] = (row[j] - mean) * inv_std[i];
            out[i * n + j] = gv[j] * xhat[i * n + j] + bv[j];
        }
    }
    const bool rg = tape.requires_grad(x) || tape.requires_grad(gamma) || tape.requires_grad(beta);
    return tape.record(m, n, std::move(out), rg,
                       [x, gamma, beta, m, n, xhat = std::move(xhat), inv_std = std::move(inv_std)](Tape& t,
                                                                                                  Var self) {
                           const auto g = t.grad_of(self);
                           const auto gv = t.value_of(gamma);
                           if (t.requires_grad(gamma)) {
                               auto gg = t.mutable_grad(gamma);
                               for (std::size_t i = 0; i < m; ++i)
                                   for (std::size_t j = 0; j < n; ++j) gg[j] += g[i * n + j] * xhat[i * n + j];
                           }
                           if (t.requires_grad(beta)) {
                               auto gb = t.mutable_grad(beta);
                               for (std::size_t i = 0; i < m; ++i)
                                   for (std::size_t j = 0; j < n; ++j) gb[j] += g[i * n + j];
                           }
                           if (t.requires_grad(x)) {
                               auto gx = t.mutable_grad(x);
                               const double inv_n = 1.0 / static_cast<double>(n);
                               for (std::size_t i = 0; i < m; ++i) {
                                   double mean_d = 0.0;
                                   double mean_dx = 0.0;
                                   for (std::size_t j = 0; j < n; ++j) {
                                       const double d = g[i * n + j] * gv[j];
                                       mean_d += d;
                                       mean_dx += d * xhat[i * n + j];
                                   }
                                   mean_d *= inv_n;
                                   mean_dx *= inv_n;
                                   for (std::size_t j = 0; j < n; ++j) {
                                       const double d = g[i * n + j] * gv[j];
                                       gx[i * n + j] += inv_std[i] * (d - mean_d - xhat[i * n + j] * mean_dx);
                                   }
                               }
                           }
                       });
}

Var reshape(Var a, std::size_t rows, std::size_t cols) {
    Tape& tape = *a.tape();
    if (rows * cols != a.rows() * a.cols()) throw ShapeError("reshape: " + dims(a) + " cannot become [" +
                                                             std::to_string(rows) + "," + std::to_string(cols) + "]");
    const auto av = a.value();
    return tape.record(rows, cols, std::vector<double>(av.begin(), av.end()), tape.requires_grad(a),
                       [a](Tape& t, Var self) {
                           const auto g = t.grad_of(self);
                           auto ga = t.mutable_grad(a);
                           for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
                       });
}

Var embed_tokens(Var features, Var weight, Var table, std::span<const std::size_t> rows) {
    Tape& tape = same_tape(features, weight);
    same_tape(features, table);
    const std::size_t batch = features.rows(), tokens = features.cols(), d = weight.cols();
    if (weight.rows() != tokens) throw ShapeError("embed_tokens: weight needs one row per token");
    if (table.cols() != d) throw ShapeError("embed_tokens: table width differs from embedding width");
    if (rows.size() != batch) throw ShapeError("embed_tokens: one table row index per sample required");
    for (auto r : rows)
        if (r >= table.rows())
            throw RangeError("embed_tokens: conditioning index " + std::to_string(r) + " outside table of " +
                             std::to_string(table.rows()) + " rows");
    const auto fv = features.value();
    const auto wv = weight.value();
    const auto tv = table.value();
    std::vector<double> out(batch * tokens * d);
    for (std::size_t b = 0; b < batch; ++b) {
        const double* cond = tv.data() + rows[b] * d;
        for (std::size_t i = 0; i < tokens; ++i) {
            const double f = fv[b * tokens + i];
            const double* w = wv.data() + i * d;
            double* o = out.data() + (b * tokens + i) * d;
            for (std::size_t j = 0; j < d; ++j) o[j] = f * w[j] * cond[j];
        }
    }
    const bool rg = tape.requires_grad(features) || tape.requires_grad(weight) || tape.requires_grad(table);
    std::vector<std::size_t> idx(rows.begin(), rows.end());
    return tape.record(batch * tokens, d, std::move(out), rg,
                       [features, weight, table, batch, tokens, d, idx = std::move(idx)](Tape& t, Var self) {
                           const auto g = t.grad_of(self);
                           const auto fv = t.value_of(features);
                           const auto wv = t.value_of(weight);
                           const auto tv = t.value_of(table);
                           const bool gf_on = t.requires_grad(features);
                           const bool gw_on = t.requires_grad(weight);
                           const bool gt_on = t.requires_grad(table);
                           std::span<double> gf, gw, gt;
                           if (gf_on) gf = t.mutable_grad(features);
                           if (gw_on) gw = t.mutable_grad(weight);
                           if (gt_on) gt = t.mutable_grad(table);
                           for (std::size_t b = 0; b < batch; ++b) {
                               const double* cond = tv.data() + idx[b] * d;
                               for (std::size_t i = 0; i < tokens; ++i) {
                                   const double f = fv[b * tokens + i];
                                   const double* w = wv.data() + i * d;
                                   const double* gr = g.data() + (b * tokens + i) * d;
                                   double acc_f = 0.0;
                                   for (std::size_t j = 0; j < d; ++j) {
                                       acc_f += gr[j] * w[j] * cond[j];
                                       if (gw_on) gw[i * d + j] += gr[j] * f * cond[j];
                                       if (gt_on) gt[idx[b] * d + j] += gr[j] * f * w[j];
                                   }
                                   if (gf_on) gf[b * tokens + i] += acc_f;
                               }
                           }
                       });
}

Var masked_attention(Var q, Var k, Var v, const std::vector<std::vector<std::size_t>>& neighbours,
                     std::size_t batch, std::size_t heads) {
    Tape& tape = same_tape(q, k);
    same_tape(q, v);
    const std::size_t tokens = neighbours.size();
    const std::size_t d = q.cols();
    if (heads == 0 || d % heads != 0) throw ShapeError("masked_attention: width not divisible by head count");
    for (Var x : {q, k, v})
        if (x.rows() != batch * tokens || x.cols() != d)
            throw ShapeError("masked_attention: operand " + dims(x) + " does not match batch*tokens x width");
    for (std::size_t i = 0; i < tokens; ++i) {
        if (neighbours[i].empty()) throw ShapeError("masked_attention: token with no attendable neighbours");
        for (auto j : neighbours[i])
            if (j >= tokens) throw RangeError("masked_attention: neighbour index out of range");
    }
    const std::size_t dh = d / heads;
    const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
    const auto qv = q.value();
    const auto kv = k.value();
    const auto vv = v.value();

    // probs[((b*heads + h)*tokens + i)] holds the softmax over neighbours[i], in list order.
    std::vector<std::size_t> offsets(tokens + 1, 0);
    for (std::size_t i = 0; i < tokens; ++i) offsets[i + 1] = offsets[i] + neighbours[i].size();
    const std::size_t per_head = offsets[tokens];
    std::vector<double> probs(batch * heads * per_head);
    std::vector<double> out(batch * tokens * d, 0.0);

    for (std::size_t b = 0; b < batch; ++b) {
        for (std::size_t h = 0; h < heads; ++h) {
            double* p_base = probs.data() + (b * heads + h) * per_head;
            for (std::size_t i = 0; i < tokens; ++i) {
                const double* qi = qv.data() + (b * tokens + i) * d + h * dh;
                double* p = p_base + offsets[i];
                double max_s = -std::numeric_limits<double>::infinity();
                for (std::size_t a = 0; a < neighbours[i].size(); ++a) {
                    const double* kj = kv.data() + (b * tokens + neighbours[i][a]) * d + h * dh;
                    double s = 0.0;
                    for (std::size_t c = 0; c < dh; ++c) s += qi[c] * kj[c];
                    p[a] = s * scale;
                    max_s = std::max(max_s, p[a]);
                }
                double z = 0.0;
                for (std::size_t a = 0; a < neighbours[i].size(); ++a) {
                    p[a] = std::exp(p[a] - max_s);
                    z += p[a];
                }
                double* oi = out.data() + (b * tokens + i) * d + h * dh;
                for (std::size_t a = 0; a < neighbours[i].size(); ++a) {
                    p[a] /= z;
                    const double* vj = vv.data() + (b * tokens + neighbours[i][a]) * d + h * dh;
                    for (std::size_t c = 0; c < dh; ++c) oi[c] += p[a] * vj[c];
                }
            }
        }
    }

    const bool rg = tape.requires_grad(q) || tape.requires_grad(k) || tape.requires_grad(v);
    return tape.record(
        batch * tokens, d, std::move(out), rg,
        [q, k, v, neighbours, batch, heads, tokens, d, dh, scale, per_head, offsets = std::move(offsets),
         probs = std::move(probs)](Tape& t, Var self) {
            const auto g = t.grad_of(self);
            const auto qv = t.value_of(q);
            const auto kv = t.value_of(k);
            const auto vv = t.value_of(v);
            const bool gq_on = t.requires_grad(q), gk_on = t.requires_grad(k), gv_on = t.requires_grad(v);
            std::span<double> gq, gk, gvv;
            if (gq_on) gq = t.mutable_grad(q);
            if (gk_on) gk = t.mutable_grad(k);
            if (gv_on) gvv = t.mutable_grad(v);
            std::vector<double> dp;
            for (std::size_t b = 0; b < batch; ++b) {
                for (std::size_t h = 0; h < heads; ++h) {
                    const double* p_base = probs.data() + (b * heads + h) * per_head;
                    for (std::size_t i = 0; i < tokens; ++i) {
                        const auto& nb = neighbours[i];
                        const double* p = p_base + offsets[i];
                        const double* gi = g.data() + (b * tokens + i) * d + h * dh;
                        dp.assign(nb.size(), 0.0);
                        double dot = 0.0;
                        for (std::size_t a = 0; a < nb.size(); ++a) {
                            const std::size_t row_j = (b * tokens + nb[a]) * d + h * dh;
                            const double* vj = vv.data() + row_j;
                            double acc = 0.0;
                            for (std::size_t c = 0; c < dh; ++c) acc += gi[c] * vj[c];
                            dp[a] = acc;
                            dot += p[a] * acc;
                            if (gv_on)
                                for (std::size_t c = 0; c < dh; ++c) gvv[row_j + c] += p[a] * gi[c];
                        }
                        const std::size_t row_i = (b * tokens + i) * d + h * dh;
                        for (std::size_t a = 0; a < nb.size(); ++a) {
                            const double ds = p[a] * (dp[a] - dot) * scale;
                            if (ds == 0.0) continue;
                            const std::size_t row_j = (b * tokens + nb[a]) * d + h * dh;
                            if (gq_on)
                                for (std::size_t c = 0; c < dh; ++c) gq[row_i + c] += ds * kv[row_j + c];
                            if (gk_on)
                                for (std::size_t c = 0; c < dh; ++c) gk[row_j + c] += ds * qv[row_i + c];
                        }
                    }
                }
            }
        });
}

Var take_leading_tokens(Var x, std::size_t batch, std::size_t tokens, std::size_t keep) {
    Tape& tape = *x.tape();
    const std::size_t d = x.cols();
    if (x.rows() != batch * tokens || keep > tokens) throw ShapeError("take_leading_tokens: bad shape");
    const auto xv = x.value();
    std::vector<double> out(batch * keep * d);
    for (std::size_t b = 0; b < batch; ++b)
        std::copy_n(xv.data() + b * tokens * d, keep * d, out.data() + b * keep * d);
    return tape.record(batch * keep, d, std::move(out), tape.requires_grad(x),
                       [x, batch, tokens, keep, d](Tape& t, Var self) {
                           const auto g = t.grad_of(self);
                           auto gx = t.mutable_grad(x);
                           for (std::size_t b = 0; b < batch; ++b)
                               for (std::size_t i = 0; i < keep * d; ++i)
                                   gx[b * tokens * d + i] += g[b * keep * d + i];
                       });
}

Var bce_with_logits(Var logits, std::span<const double> targets) {
    Tape& tape = *logits.tape();
    const auto lv = logits.value();
    if (targets.size() != lv.size()) throw ShapeError("bce_with_logits: target count mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < lv.size(); ++i) {
        const double l = lv[i];
        total += std::max(l, 0.0) - l * targets[i] + std::log1p(std::exp(-std::abs(l)));
    }
    const double inv = 1.0 / static_cast<double>(lv.size());
    std::vector<double> tgt(targets.begin(), targets.end());
    return tape.record(1, 1, {total * inv}, tape.requires_grad(logits),
                       [logits, inv, tgt = std::move(tgt)](Tape& t, Var self) {
                           const double g = t.grad_of(self)[0];
                           const auto lv = t.value_of(logits);
                           auto gl = t.mutable_grad(logits);
                           for (std::size_t i = 0; i < lv.size(); ++i) {
                               const double l = lv[i];
                               const double sig = l >= 0.0 ? 1.0 / (1.0 + std::exp(-l))
                                                           : std::exp(l) / (1.0 + std::exp(l));
                               gl[i] += g * (sig - tgt[i]) * inv;
                           }
                       });
}

Var weighted_sum(Var a, std::span<const double> weights) {
    Tape& tape = *a.tape();
    const auto av = a.value();
    if (weights.size() != av.size()) throw ShapeError("weighted_sum: weight count mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < av.size(); ++i) total += av[i] * weights[i];
    std::vector<double> w(weights.begin(), weights.end());
    return tape.record(1, 1, {total}, tape.requires_grad(a), [a, w = std::move(w)](Tape& t, Var self) {
        const double g = t.grad_of(self)[0];
        auto ga = t.mutable_grad(a);
        for (std::size_t i = 0; i < w.size(); ++i) ga[i] += g * w[i];
    });
}

}  // namespace ddecc::nn
