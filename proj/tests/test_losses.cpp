/*
 * facereg - 3D morphable model parameter regression toolkit.
 *
 * File: tests/test_losses.cpp
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

#include "facereg/loss/losses.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace facereg;
using model::ParamVec;

namespace {

struct Pair
{
    ParamVec p;
    ParamVec gt;
};

Pair random_pair(const model::BasisSet& basis, std::mt19937_64& rng, double spread = 0.1)
{
    Pair out{ParamVec::identity(basis.num_alpha()), ParamVec::identity(basis.num_alpha())};
    out.gt.T = oracle::random_similarity(rng, 0.5, 2.0);
    out.gt.alpha = oracle::random_vector(rng, basis.num_alpha(), 1.0);
    out.p = ParamVec::from_flat(out.gt.flat() + oracle::random_vector(rng, basis.num_params(), spread));
    return out;
}

} // namespace

TEST(Vdc, ZeroAtTruth)
{
    std::mt19937_64 rng(1);
    const auto basis = model::generate_synthetic_basis(20, 4, 2, 1);
    const Pair pr = random_pair(basis, rng);
    const auto out = loss::vdc(basis, pr.gt, pr.gt);
    EXPECT_EQ(out.value, 0.0);
    EXPECT_EQ(out.grad.norm(), 0.0);
}

TEST(Vdc, TranslationOffsetGivesNDeltaSquared)
{
    std::mt19937_64 rng(2);
    const auto basis = model::generate_synthetic_basis(37, 4, 2, 1);
    const Pair pr = random_pair(basis, rng);
    ParamVec p = pr.gt;
    const double delta = 0.375;
    p.T(0, 3) += delta;
    EXPECT_NEAR(loss::vdc(basis, p, pr.gt).value, 37 * delta * delta, 1e-10);
    EXPECT_NEAR(oracle::vdc(basis, p, pr.gt), 37 * delta * delta, 1e-10);
}

TEST(Vdc, GradientMatchesFiniteDifferences)
{
    std::mt19937_64 rng(3);
    const auto basis = model::generate_synthetic_basis(12, 3, 2, 2);
    for (int trial = 0; trial < 10; ++trial) {
        const Pair pr = random_pair(basis, rng);
        const auto f = [&](const Eigen::VectorXd& x) { return oracle::vdc(basis, ParamVec::from_flat(x), pr.gt); };
        const Eigen::VectorXd fd = oracle::central_gradient(f, pr.p.flat());
        EXPECT_LE(oracle::relative_error(loss::vdc(basis, pr.p, pr.gt).grad, fd), 1e-4);
    }
}

TEST(Wpdc, SingleDifferingElementHasUnitWeight)
{
    std::mt19937_64 rng(4);
    const auto basis = model::generate_synthetic_basis(20, 4, 2, 1);
    const Pair pr = random_pair(basis, rng);
    for (int i : {0, 5, 11, 14}) {
        Eigen::VectorXd f = pr.gt.flat();
        f[i] += 0.3;
        const ParamVec p = ParamVec::from_flat(f);
        const Eigen::VectorXd w = loss::wpdc_weights_naive(basis, p, pr.gt);
        EXPECT_DOUBLE_EQ(w[i], 1.0);
        EXPECT_EQ(w.sum(), 1.0);
        EXPECT_NEAR(loss::wpdc_naive(basis, p, pr.gt).value, 0.09, 1e-15);
        EXPECT_NEAR(loss::fwpdc(basis, p, pr.gt).value, 0.09, 1e-15);
    }
    EXPECT_EQ(loss::wpdc_naive(basis, pr.gt, pr.gt).value, 0.0);
    EXPECT_EQ(loss::fwpdc(basis, pr.gt, pr.gt).value, 0.0);
}

TEST(Wpdc, NaiveMatchesIndependentOracle)
{
    std::mt19937_64 rng(5);
    const auto basis = model::generate_synthetic_basis(50, 4, 2, 3);
    for (int trial = 0; trial < 10; ++trial) {
        const Pair pr = random_pair(basis, rng);
        const double want = oracle::wpdc(basis, pr.p, pr.gt);
        EXPECT_LE(std::abs(loss::wpdc_naive(basis, pr.p, pr.gt).value - want), 1e-10 * want);
    }
}

TEST(Fwpdc, AgreesWithNaiveForSimilarityGroundTruth)
{
    std::mt19937_64 rng(6);
    for (int n : {5, 50, 500}) {
        for (int d : {4, 10, 50}) {
            const auto basis = model::generate_synthetic_basis(n, d - std::max(1, d / 5), std::max(1, d / 5),
                                                               static_cast<std::uint64_t>(n + d));
            const Pair pr = random_pair(basis, rng, 0.2);
            const double naive = loss::wpdc_naive(basis, pr.p, pr.gt).value;
            const double fast = loss::fwpdc(basis, pr.p, pr.gt).value;
            EXPECT_LE(std::abs(fast - naive) / std::max(naive, 1e-12), 1e-9) << "N=" << n << " D=" << d;
        }
    }
}

TEST(Fwpdc, TranslationWeightUsesSqrtN)
{
    // Moving t_x by delta displaces every vertex by delta, so its raw weight is
    // delta * sqrt(N). A per-coordinate sqrt(N / 3) would disagree by sqrt(3).
    std::mt19937_64 rng(7);
    const auto basis = model::generate_synthetic_basis(64, 4, 2, 5);
    const Pair pr = random_pair(basis, rng);
    ParamVec p = pr.gt;
    p.T(0, 3) += 0.5;
    p.T(1, 0) += 0.01;
    const Eigen::VectorXd fast = loss::fwpdc_weights(basis, p, pr.gt);
    const Eigen::VectorXd naive = loss::wpdc_weights_naive(basis, p, pr.gt);
    EXPECT_NEAR(fast[3], naive[3], 1e-12);
    EXPECT_NEAR(fast[4], naive[4], 1e-12);
    const double row0 = basis.shape(pr.gt.alpha).row(0).norm();
    const double with_sqrt_n = 0.01 * row0 / (0.5 * std::sqrt(64.0));
    const double per_coordinate = 0.01 * row0 / (0.5 * std::sqrt(64.0 / 3.0));
    EXPECT_NEAR(fast[4] / fast[3], with_sqrt_n, 1e-12 * with_sqrt_n);
    EXPECT_NEAR(naive[4] / naive[3], with_sqrt_n, 1e-9 * with_sqrt_n);
    EXPECT_GT(std::abs(naive[4] / naive[3] - per_coordinate) / per_coordinate, 0.4);
}

TEST(Fwpdc, DisagreesForGeneralAffineGroundTruth)
{
    std::mt19937_64 rng(8);
    const auto basis = model::generate_synthetic_basis(50, 6, 2, 4);
    Pair pr = random_pair(basis, rng);
    pr.gt.T.leftCols<3>() = Eigen::Matrix3d::Random() * 2.0;
    pr.p = pr.gt;
    pr.p.alpha[0] += 0.5;
    pr.p.alpha[3] -= 0.25;
    const double naive = loss::wpdc_naive(basis, pr.p, pr.gt).value;
    const double fast = loss::fwpdc(basis, pr.p, pr.gt).value;
    EXPECT_GT(std::abs(fast - naive) / naive, 1e-6);
}

TEST(Fwpdc, GradientHoldsWeightsFixed)
{
    std::mt19937_64 rng(9);
    const auto basis = model::generate_synthetic_basis(30, 4, 2, 6);
    const Pair pr = random_pair(basis, rng);
    const Eigen::VectorXd w = loss::fwpdc_weights(basis, pr.p, pr.gt);
    const auto out = loss::fwpdc(basis, pr.p, pr.gt);
    const Eigen::VectorXd want = 2.0 * w.cwiseAbs2().cwiseProduct(pr.p.flat() - pr.gt.flat());
    EXPECT_LE(oracle::relative_error(out.grad, want), 1e-14);
    const auto f = [&](const Eigen::VectorXd& x) {
        return loss::weighted_parameter_distance(w, ParamVec::from_flat(x), pr.gt).value;
    };
    EXPECT_LE(oracle::relative_error(out.grad, oracle::central_gradient(f, pr.p.flat())), 1e-6);
}

TEST(Fwpdc, WeightsAreScaleInvariant)
{
    std::mt19937_64 rng(10);
    const auto basis = model::generate_synthetic_basis(30, 4, 2, 6);
    const Pair pr = random_pair(basis, rng);
    ParamVec far = ParamVec::from_flat(pr.gt.flat() + 4.0 * (pr.p.flat() - pr.gt.flat()));
    const Eigen::VectorXd a = loss::fwpdc_weights(basis, pr.p, pr.gt);
    const Eigen::VectorXd b = loss::fwpdc_weights(basis, far, pr.gt);
    EXPECT_LE((a - b).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_DOUBLE_EQ(a.maxCoeff(), 1.0);
}

TEST(Lrr, ZeroUnitAndLoopOracle)
{
    std::mt19937_64 rng(11);
    const Eigen::VectorXd gt = oracle::random_vector(rng, 136, 10.0);
    EXPECT_EQ(loss::landmark_regression_loss(gt, gt).value, 0.0);
    EXPECT_DOUBLE_EQ(loss::landmark_regression_loss(gt.array() + 1.0, gt).value, 1.0);

    const Eigen::VectorXd pred = gt + oracle::random_vector(rng, 136, 2.0);
    double acc = 0.0;
    for (int i = 0; i < 136; ++i)
        acc += (pred[i] - gt[i]) * (pred[i] - gt[i]);
    const auto out = loss::landmark_regression_loss(pred, gt);
    EXPECT_NEAR(out.value, acc / 136.0, 1e-12 * acc);
    const auto f = [&](const Eigen::VectorXd& x) { return loss::landmark_regression_loss(x, gt).value; };
    EXPECT_LE(oracle::relative_error(out.grad, oracle::central_gradient(f, pred)), 1e-8);
    EXPECT_THROW(loss::landmark_regression_loss(pred, gt.head(10)), std::invalid_argument);
}

TEST(VanillaJoint, BetaEndpointsAndHandCombination)
{
    std::mt19937_64 rng(12);
    const auto basis = model::generate_synthetic_basis(40, 4, 2, 7);
    const Pair pr = random_pair(basis, rng);
    const auto f = loss::fwpdc(basis, pr.p, pr.gt);
    const auto v = loss::vdc(basis, pr.p, pr.gt);

    const auto one = loss::vanilla_joint(basis, pr.p, pr.gt, {1.0, 1e-12});
    EXPECT_EQ(one.value, f.value);
    EXPECT_EQ(one.grad, f.grad);

    const auto zero = loss::vanilla_joint(basis, pr.p, pr.gt, {0.0, 1e-12});
    EXPECT_NEAR(zero.value, std::abs(f.value), 1e-12 * f.value);

    const auto half = loss::vanilla_joint(basis, pr.p, pr.gt, {0.5, 1e-12});
    const double ratio = f.value / v.value;
    EXPECT_NEAR(half.value, 0.5 * f.value + 0.5 * ratio * v.value, 1e-12 * f.value);
    EXPECT_LE(oracle::relative_error(half.grad, 0.5 * f.grad + 0.5 * ratio * v.grad), 1e-14);
}

TEST(VanillaJoint, RejectsBadConfig)
{
    const auto basis = model::generate_synthetic_basis(10, 2, 1, 1);
    const ParamVec p = ParamVec::identity(3);
    EXPECT_THROW(loss::vanilla_joint(basis, p, p, {1.5, 1e-12}), std::invalid_argument);
    EXPECT_THROW(loss::vanilla_joint(basis, p, p, {0.5, 0.0}), std::invalid_argument);
    EXPECT_EQ(loss::magnitude_ratio(-3.0, 0.0, 0.5), 6.0);
}

TEST(Losses, NonnegativeAndRejectNormalizedInput)
{
    std::mt19937_64 rng(13);
    const auto basis = model::generate_synthetic_basis(25, 4, 2, 8);
    for (int trial = 0; trial < 20; ++trial) {
        const Pair pr = random_pair(basis, rng, 0.5);
        EXPECT_GE(loss::vdc(basis, pr.p, pr.gt).value, 0.0);
        EXPECT_GE(loss::fwpdc(basis, pr.p, pr.gt).value, 0.0);
        EXPECT_GE(loss::vanilla_joint(basis, pr.p, pr.gt, {}).value, 0.0);
    }
    ParamVec n = ParamVec::identity(6);
    n.normalized = true;
    EXPECT_THROW(loss::vdc(basis, n, ParamVec::identity(6)), model::StateError);
    EXPECT_THROW(loss::fwpdc(basis, ParamVec::identity(5), ParamVec::identity(5)), std::invalid_argument);
}
