#include <gtest/gtest.h>

#include <cmath>

#include "ddecc/error.hpp"
#include "ddecc/optim.hpp"
#include "ddecc/train.hpp"

using namespace ddecc;

TEST(TrainingBatch, ZeroNoise) {
    const auto h = builtin_code("hamming74");
    const auto s = NoiseSchedule::for_code(h);
    const std::vector<std::size_t> steps{1, 3};
    const auto b = make_training_batch(h, s, steps, std::vector<double>(14, 0.0));
    EXPECT_EQ(b.targets, std::vector<double>(14, 0.0));
    EXPECT_EQ(b.parity_errors, (std::vector<std::size_t>{0, 0}));
    for (std::size_t i = 0; i < 7; ++i) EXPECT_EQ(b.features[i], 1.0);
}

TEST(TrainingBatch, TargetsMarkSignFlips) {
    const auto h = builtin_code("hamming74");
    const auto s = NoiseSchedule::constant(1.0, 3);
    Rng rng(4);
    std::vector<std::size_t> steps(50);
    std::vector<double> noise(50 * 7);
    for (auto& t : steps) t = 1 + rng.below(3);
    for (auto& z : noise) z = rng.normal();
    const auto b = make_training_batch(h, s, steps, noise);
    for (std::size_t i = 0; i < 50; ++i) {
        std::vector<double> x(7);
        for (std::size_t j = 0; j < 7; ++j) {
            x[j] = 1.0 + std::sqrt(static_cast<double>(steps[i])) * noise[i * 7 + j];
            EXPECT_EQ(b.targets[i * 7 + j], x[j] < 0 ? 1.0 : 0.0);
            EXPECT_DOUBLE_EQ(b.features[i * 10 + j], std::abs(x[j]));
        }
        EXPECT_EQ(b.parity_errors[i], syndrome(h, x).weight);
    }
}

TEST(TrainingBatch, StepsCoverSchedule) {
    const auto h = builtin_code("hamming74");
    Rng rng(1);
    const auto b = sample_training_batch(h, NoiseSchedule::for_code(h), 3000, rng);
    std::vector<int> seen(4, 0);
    for (auto t : b.steps) {
        ASSERT_GE(t, 1u);
        ASSERT_LE(t, 3u);
        ++seen[t];
    }
    for (int t = 1; t <= 3; ++t) EXPECT_GT(seen[t], 850);
}

TEST(TrainingStep, DeterministicGivenSeed) {
    const auto h = builtin_code("hamming74");
    nn::DenoiserModel m(h, nn::ArchConfig{nn::Backbone::mlp, 8, 1, 1, 0}, 1);
    Rng a(5), b(5);
    const auto s = NoiseSchedule::for_code(h);
    const auto ra = training_step(m, h, s, 32, a);
    const auto rb = training_step(m, h, s, 32, b);
    EXPECT_EQ(ra.loss, rb.loss);
    EXPECT_EQ(ra.grads, rb.grads);
}

TEST(TrainingStep, WorkerShardingMatchesSerial) {
    const auto h = builtin_code("hamming74");
    nn::DenoiserModel m(h, nn::ArchConfig{nn::Backbone::mlp, 8, 1, 1, 0}, 1);
    Rng rng(5);
    const auto batch = sample_training_batch(h, NoiseSchedule::for_code(h), 30, rng);
    const auto serial = loss_and_gradients(m, batch, 1);
    const auto sharded = loss_and_gradients(m, batch, 4);
    EXPECT_NEAR(serial.loss, sharded.loss, 1e-14);
    for (std::size_t i = 0; i < serial.grads.size(); ++i)
        for (std::size_t j = 0; j < serial.grads[i].size(); ++j)
            EXPECT_NEAR(serial.grads[i][j], sharded.grads[i][j], 1e-14);
}

TEST(Train, ZeroEpochsReturnsInitialModel) {
    const auto h = builtin_code("rep31");
    TrainConfig cfg;
    cfg.epochs = 0;
    cfg.seed = 3;
    const auto r = train(h, cfg);
    EXPECT_TRUE(r.report.epoch_loss.empty());
    const nn::DenoiserModel fresh(h, cfg.arch, derive_seed(3, 1));
    EXPECT_EQ(r.model.forward(std::vector<double>{1, 1, 1, 0, 0}, 0), fresh.forward(std::vector<double>{1, 1, 1, 0, 0}, 0));
}

TEST(Train, RepetitionLearnsQuickly) {
    // 2000 steps of a d=16 MLP on the (3,1) code.
    const auto h = builtin_code("rep31");
    TrainConfig cfg;
    cfg.epochs = 20;
    cfg.batches_per_epoch = 100;
    cfg.arch.embed_dim = 16;
    cfg.seed = 1;
    const auto r = train(h, cfg);
    ASSERT_EQ(r.report.step_loss.size(), 2000u);
    EXPECT_LT(r.report.final_loss, 0.1 * std::log(2.0));
    for (double l : r.report.epoch_loss) {
        EXPECT_TRUE(std::isfinite(l));
        EXPECT_GE(l, 0.0);
    }
    const auto& s = r.report.step_loss;
    double first = 0, last = 0;
    for (std::size_t i = 0; i < 200; ++i) first += s[i];
    for (std::size_t i = s.size() - 200; i < s.size(); ++i) last += s[i];
    EXPECT_LT(last, first);
}

TEST(Train, SameSeedSameModel) {
    const auto h = builtin_code("rep31");
    TrainConfig cfg;
    cfg.epochs = 2;
    cfg.batches_per_epoch = 5;
    cfg.arch.embed_dim = 4;
    const auto a = train(h, cfg);
    const auto b = train(h, cfg);
    EXPECT_EQ(a.report.step_loss, b.report.step_loss);
    for (std::size_t i = 0; i < a.model.parameters().size(); ++i)
        EXPECT_EQ(a.model.parameters()[i].tensor.values, b.model.parameters()[i].tensor.values);
}

TEST(Train, RejectsShortSchedule) {
    TrainConfig cfg;
    cfg.schedule = "constant:0.01:2";
    EXPECT_THROW(train(builtin_code("hamming74"), cfg), RangeError);
}

TEST(Train, DivergenceGuard) {
    TrainConfig cfg;
    cfg.epochs = 1;
    cfg.batches_per_epoch = 3;
    cfg.lr0 = std::nan("");
    cfg.lr_min = std::nan("");
    EXPECT_THROW(train(builtin_code("rep31"), cfg), DivergenceError);
}

TEST(Adam, FirstStepMovesByLr) {
    nn::Tensor p({1, 3}, std::vector<double>{1.0, -2.0, 0.5});
    p.grad = {0.3, -7.0, 1e-3};
    nn::AdamState st;
    nn::Tensor* ptrs[] = {&p};
    nn::adam_step(ptrs, st, 0.01);
    EXPECT_NEAR(p.values[0], 1.0 - 0.01, 1e-9);
    EXPECT_NEAR(p.values[1], -2.0 + 0.01, 1e-9);
    EXPECT_NEAR(p.values[2], 0.5 - 0.01, 1e-7);
}

TEST(Adam, ZeroGradientLeavesParameters) {
    nn::Tensor p({2}, std::vector<double>{1.0, 2.0});
    p.grad = {0.0, 0.0};
    nn::AdamState st;
    nn::Tensor* ptrs[] = {&p};
    nn::adam_step(ptrs, st, 0.1);
    EXPECT_EQ(p.values, (std::vector<double>{1.0, 2.0}));
}

TEST(CosineLr, Endpoints) {
    EXPECT_DOUBLE_EQ(nn::cosine_lr(0, 200, 1e-4, 5e-6), 1e-4);
    EXPECT_NEAR(nn::cosine_lr(200, 200, 1e-4, 5e-6), 5e-6, 1e-20);
    EXPECT_NEAR(nn::cosine_lr(100, 200, 1e-4, 5e-6), (1e-4 + 5e-6) / 2, 1e-18);
    EXPECT_THROW(nn::cosine_lr(201, 200, 1e-4, 5e-6), RangeError);
}
