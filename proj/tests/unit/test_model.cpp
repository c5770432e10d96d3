#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "ddecc/channel.hpp"
#include "ddecc/error.hpp"
#include "ddecc/model.hpp"
#include "gradcheck.hpp"

using namespace ddecc;
using namespace ddecc::nn;

namespace {

double gelu_ref(double x) {
    const double c = std::sqrt(2.0 / 3.141592653589793);
    return 0.5 * x * (1.0 + std::tanh(c * (x + 0.044715 * x * x * x)));
}

}  // namespace

TEST(Preprocess, CodewordGivesOnesAndZeros) {
    const auto h = builtin_code("hamming74");
    const auto g = systematic_generator(h);
    const auto c = encode(g, Bits{0, 1, 1, 0});
    const auto pre = preprocess(bpsk(c), h);
    EXPECT_EQ(pre.features, (std::vector<double>{1, 1, 1, 1, 1, 1, 1, 0, 0, 0}));
    EXPECT_EQ(pre.parity_errors, 0u);
}

TEST(Preprocess, InvariantUnderCodewordSignFlip) {
    const auto h = builtin_code("hamming74");
    const MlDecoder ml(h, systematic_generator(h));
    Rng rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> y(7);
        for (auto& v : y) v = 1.0 + 0.8 * rng.normal();
        const auto c = bpsk(ml.codeword(rng.below(16)));
        std::vector<double> yc(7);
        for (std::size_t i = 0; i < 7; ++i) yc[i] = y[i] * c[i];
        const auto a = preprocess(y, h);
        const auto b = preprocess(yc, h);
        EXPECT_EQ(a.features, b.features);
        EXPECT_EQ(a.parity_errors, b.parity_errors);
    }
}

TEST(Preprocess, SingleFlipSyndromeColumn) {
    const auto h = builtin_code("hamming74");
    std::vector<double> y(7, 1.0);
    y[2] = -0.4;
    const auto pre = preprocess(y, h);
    EXPECT_DOUBLE_EQ(pre.features[2], 0.4);
    for (std::size_t r = 0; r < 3; ++r) EXPECT_EQ(pre.features[7 + r], h.at(r, 2) ? 1.0 : 0.0);
}

TEST(DenoiserModel, Shapes) {
    const auto h = builtin_code("hamming74");
    for (auto backbone : {Backbone::mlp, Backbone::masked_attention}) {
        DenoiserModel m(h, ArchConfig{backbone, 8, 2, 2, 0}, 1);
        EXPECT_EQ(m.input_dim(), 10u);
        EXPECT_EQ(m.parameter("cond.table").shape, (std::vector<std::size_t>{4, 8}));
        EXPECT_EQ(m.forward(std::vector<double>(10, 1.0), 2).size(), 7u);
        EXPECT_THROW(m.forward(std::vector<double>(9, 1.0), 0), ShapeError);
        EXPECT_THROW(m.forward(std::vector<double>(10, 1.0), 4), RangeError);
    }
    EXPECT_THROW(DenoiserModel(h, ArchConfig{Backbone::masked_attention, 6, 1, 4, 0}, 0), RangeError);
}

TEST(DenoiserModel, ConditioningTableInit) {
    DenoiserModel m(builtin_code("hamming74"), ArchConfig{}, 5);
    for (double v : m.parameter("cond.table").values) EXPECT_NEAR(v, 1.0, 0.06);
}

TEST(DenoiserModel, Deterministic) {
    const auto h = builtin_code("hamming74");
    DenoiserModel a(h, ArchConfig{}, 3), b(h, ArchConfig{}, 3);
    const std::vector<double> f{0.2, 1.1, 0.9, 1.4, 0.3, 1.0, 0.8, 1, 0, 1};
    EXPECT_EQ(a.forward(f, 2), a.forward(f, 2));
    EXPECT_EQ(a.forward(f, 2), b.forward(f, 2));
}

TEST(DenoiserModel, ConditioningMatters) {
    const auto h = builtin_code("hamming74");
    for (auto backbone : {Backbone::mlp, Backbone::masked_attention}) {
        DenoiserModel m(h, ArchConfig{backbone, 8, 1, 1, 0}, 3);
        const std::vector<double> f{0.2, 1.1, 0.9, 1.4, 0.3, 1.0, 0.8, 1, 0, 1};
        EXPECT_NE(m.forward(f, 1), m.forward(f, 2));
    }
}

TEST(DenoiserModel, ZeroConditioningRowGivesBiasOnlyOutput) {
    const auto h = builtin_code("rep31");
    DenoiserModel m(h, ArchConfig{Backbone::mlp, 4, 2, 1, 6}, 7);
    auto& table = m.parameter("cond.table");
    for (std::size_t j = 0; j < 4; ++j) table.values[1 * 4 + j] = 0.0;
    // Random biases so the reference is non-trivial.
    Rng rng(1);
    for (auto& p : m.parameters())
        if (p.name.find("bias") != std::string::npos)
            for (auto& v : p.tensor.values) v = rng.normal();
    const auto logits = m.forward(std::vector<double>{0.3, 1.2, 0.7, 1, 0}, 1);

    // Zero embeddings: h1 = gelu(b0), h2 = gelu(h1 W1 + b1), out = h2 Wh + bh.
    const auto& b0 = m.parameter("mlp.0.bias").values;
    const auto& w1 = m.parameter("mlp.1.weight").values;
    const auto& b1 = m.parameter("mlp.1.bias").values;
    const auto& wh = m.parameter("head.weight").values;
    const auto& bh = m.parameter("head.bias").values;
    std::vector<double> h1(6), h2(6);
    for (std::size_t j = 0; j < 6; ++j) h1[j] = gelu_ref(b0[j]);
    for (std::size_t j = 0; j < 6; ++j) {
        double s = b1[j];
        for (std::size_t i = 0; i < 6; ++i) s += h1[i] * w1[i * 6 + j];
        h2[j] = gelu_ref(s);
    }
    for (std::size_t o = 0; o < 3; ++o) {
        double s = bh[o];
        for (std::size_t i = 0; i < 6; ++i) s += h2[i] * wh[i * 3 + o];
        EXPECT_NEAR(logits[o], s, 1e-12);
    }
}

TEST(DenoiserModel, InitialLossNearLn2) {
    const auto h = builtin_code("hamming74");
    DenoiserModel m(h, ArchConfig{}, 11);
    Rng rng(2);
    const auto batch = sample_training_batch(h, NoiseSchedule::for_code(h), 256, rng);
    const double loss = loss_and_gradients(m, batch).loss;
    EXPECT_NEAR(loss, std::log(2.0), 0.2 * std::log(2.0));
}

TEST(AttentionMask, FollowsTannerGraph) {
    const auto h = builtin_code("hamming74");
    DenoiserModel m(h, ArchConfig{Backbone::masked_attention, 4, 1, 1, 0}, 0);
    const auto& nb = m.attention_neighbours();
    ASSERT_EQ(nb.size(), 10u);
    for (std::size_t i = 0; i < 10; ++i) {
        std::set<std::size_t> s(nb[i].begin(), nb[i].end());
        EXPECT_TRUE(s.count(i));
        for (std::size_t j = 0; j < 10; ++j) {
            bool expect = i == j;
            if (i < 7 && j < 7)
                for (std::size_t r = 0; r < 3; ++r) expect = expect || (h.at(r, i) && h.at(r, j));
            if (i < 7 && j >= 7) expect = h.at(j - 7, i);
            if (i >= 7 && j < 7) expect = h.at(i - 7, j);
            EXPECT_EQ(s.count(j) == 1, expect) << i << "->" << j;
        }
    }
}

TEST(Gradients, MatchFiniteDifferencesBothBackbones) {
    const auto h = builtin_code("hamming74");
    for (auto backbone : {Backbone::mlp, Backbone::masked_attention}) {
        DenoiserModel m(h, ArchConfig{backbone, 4, 2, 2, 8}, 21);
        Rng rng(5);
        const auto batch = oracle::random_batch(m, 3, rng);
        const auto r = oracle::gradient_check(m, batch, 6, rng);
        EXPECT_LT(r.max_rel_error, 1e-4) << to_string(backbone);
    }
}

TEST(Gradients, UnusedConditioningRowHasZeroGradient) {
    const auto h = builtin_code("hamming74");
    DenoiserModel m(h, ArchConfig{Backbone::mlp, 4, 1, 1, 0}, 2);
    TrainingBatch b;
    b.size = 1;
    b.steps = {1};
    b.features = {1, 1, 1, 1, 1, 1, 1, 0, 0, 0};
    b.parity_errors = {0};
    b.targets.assign(7, 0.0);
    const auto r = loss_and_gradients(m, b);
    const auto& g = r.grads[1];  // cond.table
    for (std::size_t j = 4; j < g.size(); ++j) EXPECT_EQ(g[j], 0.0);
}

TEST(Gradients, LinearLayerOuterProduct) {
    Tensor w({3, 2}, std::vector<double>{0.1, -0.2, 0.3, 0.4, -0.5, 0.6});
    Tape tape;
    Var x = tape.constant(1, 3, {1.0, 2.0, -1.0});
    Var wv = tape.parameter(w);
    const std::vector<double> upstream{0.7, -1.3};
    tape.backward(weighted_sum(matmul(x, wv), upstream));
    std::vector<double> g(6, 0.0);
    tape.accumulate_grad(wv, g);
    const double xs[3] = {1.0, 2.0, -1.0};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 2; ++j) EXPECT_DOUBLE_EQ(g[i * 2 + j], xs[i] * upstream[j]);
}

TEST(Bce, Examples) {
    Tape t1;
    Var z = t1.input(1, 4, std::vector<double>(4, 0.0));
    Var l = bce_with_logits(z, std::vector<double>{1, 1, 1, 1});
    EXPECT_NEAR(l.scalar(), std::log(2.0), 1e-15);
    t1.backward(l);
    for (double g : z.grad()) EXPECT_DOUBLE_EQ(g, -0.5 / 4);

    Tape t2;
    Var s = t2.constant(1, 2, {50.0, -50.0});
    EXPECT_LT(bce_with_logits(s, std::vector<double>{1, 0}).scalar(), 1e-20);
}
