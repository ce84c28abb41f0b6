/*
 * facereg - 3D morphable model parameter regression toolkit.
 *
 * File: tests/test_regressor.cpp
 *
 * Copyright 2026 The facereg authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "facereg/nn/regressor.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace facereg;

namespace {

// Plain-loop forward pass of one sample.
void loop_forward(const nn::RegressorWeights& w, const Eigen::VectorXd& x, Eigen::VectorXd& p, Eigen::VectorXd& l)
{
    std::vector<double> h(static_cast<std::size_t>(w.hidden_dim()));
    for (int j = 0; j < w.hidden_dim(); ++j) {
        double acc = w.b1[j];
        for (int i = 0; i < w.input_dim(); ++i)
            acc += w.W1(j, i) * x[i];
        h[static_cast<std::size_t>(j)] = acc > 0.0 ? acc : 0.0;
    }
    p.resize(w.param_dim());
    for (int o = 0; o < w.param_dim(); ++o) {
        double acc = w.b_param[o];
        for (int j = 0; j < w.hidden_dim(); ++j)
            acc += w.W_param(o, j) * h[static_cast<std::size_t>(j)];
        p[o] = acc;
    }
    l.resize(w.lmk_dim());
    for (int o = 0; o < w.lmk_dim(); ++o) {
        double acc = w.b_lmk[o];
        for (int j = 0; j < w.hidden_dim(); ++j)
            acc += w.W_lmk(o, j) * h[static_cast<std::size_t>(j)];
        l[o] = acc;
    }
}

Eigen::VectorXd flatten(const nn::RegressorWeights& w)
{
    Eigen::VectorXd out(w.size());
    Eigen::Index at = 0;
    nn::RegressorWeights copy = w;
    nn::for_each_tensor(copy, w, [&](Eigen::Ref<Eigen::MatrixXd> t, const Eigen::Ref<const Eigen::MatrixXd>&) {
        out.segment(at, t.size()) = Eigen::Map<const Eigen::VectorXd>(t.data(), t.size());
        at += t.size();
    });
    return out;
}

nn::RegressorWeights unflatten(const nn::RegressorWeights& like, const Eigen::VectorXd& flat)
{
    nn::RegressorWeights out = like;
    Eigen::Index at = 0;
    nn::for_each_tensor(out, like, [&](Eigen::Ref<Eigen::MatrixXd> t, const Eigen::Ref<const Eigen::MatrixXd>&) {
        t = Eigen::Map<const Eigen::MatrixXd>(flat.data() + at, t.rows(), t.cols());
        at += t.size();
    });
    return out;
}

} // namespace

TEST(Forward, ZeroWeightsGiveBiases)
{
    auto w = nn::zeros_like(nn::init_regressor(8, 5, 3, 4, 1));
    w.b_param << 1, 2, 3;
    w.b_lmk << -1, 0, 1, 2;
    const auto out = nn::forward(w, Eigen::VectorXd::Random(8).eval());
    EXPECT_EQ(out.p_norm.col(0), w.b_param);
    EXPECT_EQ(out.lmk.col(0), w.b_lmk);
}

TEST(Forward, ZeroImageZeroBiasesGiveZero)
{
    const auto w = nn::init_regressor(8, 5, 3, 4, 2);
    const auto out = nn::forward(w, Eigen::VectorXd::Zero(8).eval());
    EXPECT_EQ(out.p_norm.norm(), 0.0);
    EXPECT_EQ(out.lmk.norm(), 0.0);
}

TEST(Forward, MatchesLoopOracle)
{
    std::mt19937_64 rng(3);
    auto w = nn::init_regressor(20, 7, 6, 10, 3);
    w.b1 = oracle::random_vector(rng, 7, 0.3);
    w.b_param = oracle::random_vector(rng, 6, 0.3);
    const Eigen::MatrixXd x = Eigen::MatrixXd::Random(20, 4);
    const auto out = nn::forward(w, x);
    for (int s = 0; s < 4; ++s) {
        Eigen::VectorXd p, l;
        loop_forward(w, x.col(s), p, l);
        EXPECT_LE((out.p_norm.col(s) - p).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LE((out.lmk.col(s) - l).cwiseAbs().maxCoeff(), 1e-12);
    }
    EXPECT_THROW(nn::forward(w, Eigen::MatrixXd(Eigen::MatrixXd::Zero(19, 1))), std::invalid_argument);
}

TEST(Forward, LandmarkHeadDoesNotAffectParameterHead)
{
    const auto w = nn::init_regressor(16, 6, 5, 136, 4);
    nn::RegressorWeights no_head = w;
    no_head.W_lmk.resize(0, 6);
    no_head.b_lmk.resize(0);
    const Eigen::MatrixXd x = Eigen::MatrixXd::Random(16, 3);
    EXPECT_EQ(nn::predict_params(w, x), nn::predict_params(no_head, x));
    EXPECT_EQ(nn::forward(w, x).p_norm, nn::predict_params(no_head, x));
}

TEST(Backward, ZeroOutputGradientsGiveZero)
{
    const auto w = nn::init_regressor(6, 4, 3, 2, 5);
    const auto fw = nn::forward(w, Eigen::MatrixXd::Random(6, 2).eval());
    const auto g = nn::backward(w, fw.cache, Eigen::MatrixXd::Zero(3, 2), Eigen::MatrixXd::Zero(2, 2));
    EXPECT_EQ(flatten(g).norm(), 0.0);
}

TEST(Backward, MatchesFiniteDifferencesOnEveryWeight)
{
    std::mt19937_64 rng(6);
    auto w = nn::init_regressor(4, 4, 3, 2, 6);
    w.b1 = oracle::random_vector(rng, 4, 0.5);
    const Eigen::VectorXd x = oracle::random_vector(rng, 4, 1.0);
    const Eigen::VectorXd cp = oracle::random_vector(rng, 3, 1.0);
    const Eigen::VectorXd cl = oracle::random_vector(rng, 2, 1.0);
    // Scalar loss: cp . p + cl . l + 0.5 |p|^2.
    const auto f = [&](const Eigen::VectorXd& flat) {
        const auto out = nn::forward(unflatten(w, flat), x);
        return cp.dot(out.p_norm.col(0)) + cl.dot(out.lmk.col(0)) + 0.5 * out.p_norm.col(0).squaredNorm();
    };
    const auto fw = nn::forward(w, x);
    const Eigen::MatrixXd gp = cp + fw.p_norm.col(0);
    const auto g = nn::backward(w, fw.cache, gp, cl);
    EXPECT_LE(oracle::relative_error(flatten(g), oracle::central_gradient(f, flatten(w), 1e-6)), 1e-4);
}

TEST(Backward, LandmarkOnlyGradientLeavesParameterHeadZero)
{
    const auto w = nn::init_regressor(6, 4, 3, 2, 7);
    const auto fw = nn::forward(w, Eigen::MatrixXd::Random(6, 2).eval());
    const auto g = nn::backward(w, fw.cache, Eigen::MatrixXd::Zero(3, 2), Eigen::MatrixXd::Ones(2, 2));
    EXPECT_EQ(g.W_param.norm(), 0.0);
    EXPECT_EQ(g.b_param.norm(), 0.0);
    EXPECT_GT(g.W_lmk.norm(), 0.0);
}

TEST(Backward, RejectsStaleCache)
{
    auto w = nn::init_regressor(6, 4, 3, 2, 8);
    const auto fw = nn::forward(w, Eigen::MatrixXd::Random(6, 1).eval());
    auto velocity = nn::zeros_like(w);
    const auto g = nn::backward(w, fw.cache, Eigen::MatrixXd::Ones(3, 1), Eigen::MatrixXd::Zero(2, 1));
    w = nn::sgd_step(w, g, nn::SgdConfig{}, velocity);
    EXPECT_THROW(nn::backward(w, fw.cache, Eigen::MatrixXd::Ones(3, 1), Eigen::MatrixXd::Zero(2, 1)),
                 std::logic_error);
    const auto other = nn::init_regressor(6, 4, 3, 2, 8);
    EXPECT_THROW(nn::backward(other, fw.cache, Eigen::MatrixXd::Ones(3, 1), Eigen::MatrixXd::Zero(2, 1)),
                 std::logic_error);
}

TEST(Sgd, ZeroLearningRateKeepsWeights)
{
    const auto w = nn::init_regressor(6, 4, 3, 2, 9);
    auto g = nn::init_regressor(6, 4, 3, 2, 10);
    auto v = nn::zeros_like(w);
    nn::SgdConfig cfg;
    cfg.learning_rate = 0.0;
    const auto next = nn::sgd_step(w, g, cfg, v);
    EXPECT_EQ(flatten(next), flatten(w));
    EXPECT_EQ(next.generation, w.generation + 1);
}

TEST(Sgd, PlainGradientDescent)
{
    const auto w = nn::init_regressor(6, 4, 3, 2, 11);
    const auto g = nn::init_regressor(6, 4, 3, 2, 12);
    auto v = nn::zeros_like(w);
    nn::SgdConfig cfg{0.25, 0.0, 0.0, 1};
    const auto next = nn::sgd_step(w, g, cfg, v);
    const Eigen::VectorXd want = flatten(w) - 0.25 * flatten(g);
    EXPECT_EQ(flatten(next), want);
}

TEST(Sgd, MomentumVelocityOnConstantGradient)
{
    const auto w = nn::init_regressor(6, 4, 3, 2, 13);
    const auto g = nn::init_regressor(6, 4, 3, 2, 14);
    auto v = nn::zeros_like(w);
    nn::SgdConfig cfg{0.1, 0.9, 0.0, 1};
    auto w1 = nn::sgd_step(w, g, cfg, v);
    EXPECT_LE((flatten(v) - flatten(g)).cwiseAbs().maxCoeff(), 1e-15);
    auto w2 = nn::sgd_step(w1, g, cfg, v);
    EXPECT_LE((flatten(v) - 1.9 * flatten(g)).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LE((flatten(w2) - (flatten(w) - 0.1 * 2.9 * flatten(g))).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Sgd, WeightDecayEntersBeforeMomentum)
{
    const auto w = nn::init_regressor(6, 4, 3, 2, 15);
    const auto g = nn::zeros_like(w);
    auto v = nn::zeros_like(w);
    nn::SgdConfig cfg{1.0, 0.9, 0.5, 1};
    const auto next = nn::sgd_step(w, g, cfg, v);
    EXPECT_LE((flatten(v) - 0.5 * flatten(w)).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LE((flatten(next) - 0.5 * flatten(w)).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_THROW((nn::SgdConfig{0.1, 1.0, 0.0, 1}.validate()), std::invalid_argument);
}

TEST(Weights, ValidateCatchesShapesAndNonFinite)
{
    auto w = nn::init_regressor(6, 4, 3, 2, 16);
    EXPECT_NO_THROW(w.validate());
    w.b1[0] = std::nan("");
    EXPECT_THROW(w.validate(), std::invalid_argument);
    w = nn::init_regressor(6, 4, 3, 2, 16);
    w.b_param.resize(2);
    EXPECT_THROW(w.validate(), std::invalid_argument);
}
