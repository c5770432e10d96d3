#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "ddecc/autograd.hpp"
#include "ddecc/error.hpp"
#include "ddecc/rng.hpp"

using namespace ddecc;
using namespace ddecc::nn;

namespace {

std::vector<double> randn(std::size_t n, Rng& rng, double scale = 1.0) {
    std::vector<double> v(n);
    for (auto& x : v) x = scale * rng.normal();
    return v;
}

// Builds a scalar from leaf tensors; checks every leaf coordinate against central differences.
void check_op(std::vector<Tensor>& leaves, const std::function<Var(Tape&, std::vector<Var>&)>& f,
              double tol = 1e-6) {
    Tape tape;
    std::vector<Var> vars;
    for (auto& t : leaves) vars.push_back(tape.parameter(t));
    Var out = f(tape, vars);
    tape.backward(out);
    for (std::size_t l = 0; l < leaves.size(); ++l) {
        std::vector<double> grad(leaves[l].size(), 0.0);
        tape.accumulate_grad(vars[l], grad);
        for (std::size_t j = 0; j < leaves[l].size(); ++j) {
            const double saved = leaves[l].values[j];
            auto eval = [&](double v) {
                leaves[l].values[j] = v;
                Tape t2;
                std::vector<Var> v2;
                for (auto& t : leaves) v2.push_back(t2.parameter(t, false));
                return f(t2, v2).scalar();
            };
            const double h = 1e-6;
            const double numeric = (eval(saved + h) - eval(saved - h)) / (2 * h);
            leaves[l].values[j] = saved;
            EXPECT_NEAR(grad[j], numeric, tol * std::max(1.0, std::abs(numeric))) << "leaf " << l << " coord " << j;
        }
    }
}

}  // namespace

TEST(Autograd, MatmulValues) {
    Tape tape;
    Var a = tape.constant(2, 3, {1, 2, 3, 4, 5, 6});
    Var b = tape.constant(3, 2, {7, 8, 9, 10, 11, 12});
    Var c = matmul(a, b);
    EXPECT_EQ(std::vector<double>(c.value().begin(), c.value().end()), (std::vector<double>{58, 64, 139, 154}));
    EXPECT_THROW(matmul(a, a), ShapeError);
}

TEST(Autograd, MatmulAddBiasGelu) {
    Rng rng(1);
    std::vector<Tensor> leaves{Tensor({3, 4}, randn(12, rng)), Tensor({4, 2}, randn(8, rng)),
                               Tensor({1, 2}, randn(2, rng))};
    const std::vector<double> w = randn(6, rng);
    check_op(leaves, [&](Tape&, std::vector<Var>& v) { return weighted_sum(gelu(add_bias(matmul(v[0], v[1]), v[2])), w); });
}

TEST(Autograd, LayerNorm) {
    Rng rng(2);
    std::vector<Tensor> leaves{Tensor({3, 5}, randn(15, rng)), Tensor({1, 5}, randn(5, rng)),
                               Tensor({1, 5}, randn(5, rng))};
    const std::vector<double> w = randn(15, rng);
    check_op(leaves, [&](Tape&, std::vector<Var>& v) { return weighted_sum(layer_norm(v[0], v[1], v[2]), w); });
}

TEST(Autograd, LayerNormNormalises) {
    Tape tape;
    Var x = tape.constant(1, 4, {1, 2, 3, 4});
    Var g = tape.constant(1, 4, {1, 1, 1, 1});
    Var b = tape.constant(1, 4, {0, 0, 0, 0});
    const auto y = layer_norm(x, g, b).value();
    double mean = 0, sq = 0;
    for (double v : y) mean += v / 4;
    for (double v : y) sq += (v - mean) * (v - mean) / 4;
    EXPECT_NEAR(mean, 0.0, 1e-12);
    EXPECT_NEAR(sq, 1.0, 1e-4);
}

TEST(Autograd, EmbedTokens) {
    Rng rng(3);
    std::vector<Tensor> leaves{Tensor({2, 3}, randn(6, rng)), Tensor({3, 4}, randn(12, rng)),
                               Tensor({3, 4}, randn(12, rng))};
    const std::vector<std::size_t> rows{2, 0};
    const std::vector<double> w = randn(24, rng);
    check_op(leaves, [&](Tape&, std::vector<Var>& v) { return weighted_sum(embed_tokens(v[0], v[1], v[2], rows), w); });
}

TEST(Autograd, EmbedTokensValue) {
    Tape tape;
    Var f = tape.constant(1, 2, {2.0, 3.0});
    Var w = tape.constant(2, 2, {1, 2, 3, 4});
    Var t = tape.constant(2, 2, {10, 10, 0.5, 0.25});
    const std::vector<std::size_t> rows{1};
    const auto out = embed_tokens(f, w, t, rows).value();
    EXPECT_EQ(std::vector<double>(out.begin(), out.end()), (std::vector<double>{1.0, 1.0, 4.5, 3.0}));
}

TEST(Autograd, MaskedAttentionGradient) {
    Rng rng(4);
    const std::size_t batch = 2, tokens = 4, d = 4;
    std::vector<Tensor> leaves{Tensor({batch * tokens, d}, randn(batch * tokens * d, rng)),
                               Tensor({batch * tokens, d}, randn(batch * tokens * d, rng)),
                               Tensor({batch * tokens, d}, randn(batch * tokens * d, rng))};
    const std::vector<std::vector<std::size_t>> nb{{0, 1}, {0, 1, 2}, {2, 3}, {3}};
    const std::vector<double> w = randn(batch * tokens * d, rng);
    for (std::size_t heads : {1u, 2u})
        check_op(leaves, [&](Tape&, std::vector<Var>& v) {
            return weighted_sum(masked_attention(v[0], v[1], v[2], nb, batch, heads), w);
        });
}

TEST(Autograd, MaskedAttentionRespectsMask) {
    // Token 0 may only see token 1, so its output is exactly v[1].
    Tape tape;
    Var q = tape.constant(2, 2, {1, 2, 3, 4});
    Var k = tape.constant(2, 2, {5, 6, 7, 8});
    Var v = tape.constant(2, 2, {0.1, 0.2, 0.3, 0.4});
    const std::vector<std::vector<std::size_t>> nb{{1}, {0, 1}};
    const auto out = masked_attention(q, k, v, nb, 1, 1).value();
    EXPECT_DOUBLE_EQ(out[0], 0.3);
    EXPECT_DOUBLE_EQ(out[1], 0.4);
}

TEST(Autograd, TakeLeadingReshapeBce) {
    Rng rng(5);
    std::vector<Tensor> leaves{Tensor({2 * 3, 2}, randn(12, rng))};
    const std::vector<double> targets{1, 0, 0, 1, 1, 1, 0, 0};
    check_op(leaves, [&](Tape&, std::vector<Var>& v) {
        return bce_with_logits(reshape(take_leading_tokens(v[0], 2, 3, 2), 2, 4), targets);
    });
}

TEST(Autograd, BceValueAndStability) {
    Tape tape;
    Var l = tape.constant(1, 3, {0.0, 800.0, -800.0});
    const std::vector<double> t{1, 1, 0};
    EXPECT_NEAR(bce_with_logits(l, t).scalar(), std::log(2.0) / 3.0, 1e-15);
    Tape t2;
    Var l2 = t2.constant(1, 1, {-800.0});
    EXPECT_NEAR(bce_with_logits(l2, std::vector<double>{1}).scalar(), 800.0, 1e-9);
}

TEST(Autograd, AddSharesGradient) {
    Rng rng(6);
    std::vector<Tensor> leaves{Tensor({2, 2}, randn(4, rng))};
    const std::vector<double> w{1, 2, 3, 4};
    check_op(leaves, [&](Tape&, std::vector<Var>& v) { return weighted_sum(add(v[0], gelu(v[0])), w); });
}

TEST(Autograd, TapeIsSingleUse) {
    Tensor p({1, 1}, 2.0);
    Tape tape;
    Var x = tape.parameter(p);
    Var y = weighted_sum(x, std::vector<double>{3.0});
    tape.backward(y);
    std::vector<double> g(1, 0.0);
    tape.accumulate_grad(x, g);
    EXPECT_DOUBLE_EQ(g[0], 3.0);
    EXPECT_THROW(tape.backward(y), GraphError);
    EXPECT_THROW(weighted_sum(x, std::vector<double>{1.0}), GraphError);
}

TEST(Autograd, BackwardNeedsScalar) {
    Tape tape;
    Var x = tape.input(1, 2, {1, 2});
    EXPECT_THROW(tape.backward(x), ShapeError);
}
