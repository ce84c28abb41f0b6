/*
 * facereg - 3D morphable model parameter regression toolkit.
 *
 * File: tests/test_morphable_model.cpp
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

#include "facereg/model/morphable_model.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>

using namespace facereg;
using model::ParamVec;

namespace {

ParamVec random_params(const model::BasisSet& basis, std::mt19937_64& rng)
{
    ParamVec p = ParamVec::identity(basis.num_alpha());
    p.T = oracle::random_similarity(rng, 0.5, 2.0);
    p.alpha = oracle::random_vector(rng, basis.num_alpha(), 1.0);
    return p;
}

Eigen::VectorXd flat3(const Eigen::Matrix3Xd& m)
{
    return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
}

// Basis whose landmark indices are 0..67 over an arange mean shape.
model::BasisSet arange_basis(int n)
{
    Eigen::Matrix3Xd mean(3, n);
    for (int i = 0; i < n; ++i)
        mean.col(i) = Eigen::Vector3d(i, 100 + i, 200 + i);
    std::vector<std::uint32_t> lmk(model::num_landmarks);
    std::iota(lmk.begin(), lmk.end(), 0u);
    return model::BasisSet(mean, Eigen::MatrixXd::Identity(3 * n, 1), Eigen::MatrixXd::Zero(3 * n, 0), lmk);
}

} // namespace

TEST(Reconstruct, IdentityGivesMeanShape)
{
    const auto basis = model::generate_synthetic_basis(30, 4, 2, 1);
    const auto v = model::reconstruct_vertices(basis, ParamVec::identity(6));
    EXPECT_EQ(v.coords3d, basis.mean_shape());
}

TEST(Reconstruct, PureScalingDoublesMean)
{
    const auto basis = model::generate_synthetic_basis(30, 4, 2, 1);
    ParamVec p = ParamVec::identity(6);
    p.T.leftCols<3>() *= 2.0;
    EXPECT_EQ(model::reconstruct_vertices(basis, p).coords3d, 2.0 * basis.mean_shape());
}

TEST(Reconstruct, MatchesLoopOracle)
{
    std::mt19937_64 rng(3);
    const auto basis = model::generate_synthetic_basis(5, 2, 2, 2);
    for (int trial = 0; trial < 20; ++trial) {
        const ParamVec p = random_params(basis, rng);
        const auto got = flat3(model::reconstruct_vertices(basis, p).coords3d);
        const auto want = oracle::vertices(basis, p);
        EXPECT_LE(oracle::relative_error(got, Eigen::Map<const Eigen::VectorXd>(want.data(), want.size())), 1e-12);
    }
}

TEST(Reconstruct, LinearInCoefficients)
{
    std::mt19937_64 rng(4);
    const auto basis = model::generate_synthetic_basis(40, 5, 3, 9);
    ParamVec pa = random_params(basis, rng);
    ParamVec pb = pa;
    pb.alpha = oracle::random_vector(rng, 8, 1.0);
    ParamVec pab = pa;
    pab.alpha = pa.alpha + pb.alpha;
    ParamVec p0 = pa;
    p0.alpha.setZero();
    const auto va = model::reconstruct_vertices(basis, pa).coords3d;
    const auto vb = model::reconstruct_vertices(basis, pb).coords3d;
    const auto v0 = model::reconstruct_vertices(basis, p0).coords3d;
    const auto vab = model::reconstruct_vertices(basis, pab).coords3d;
    EXPECT_LE((vab - (va + vb - v0)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Reconstruct, SimilarityScalesPairwiseDistances)
{
    std::mt19937_64 rng(5);
    const auto basis = model::generate_synthetic_basis(20, 3, 2, 4);
    const Eigen::VectorXd alpha = oracle::random_vector(rng, 5, 1.0);
    const double f = 1.7;
    const Eigen::Matrix3d r = model::rotation_from_angles(0.3, -0.2, 1.1);
    ParamVec p = ParamVec::identity(5);
    p.alpha = alpha;
    const auto s = model::reconstruct_vertices(basis, p).coords3d;
    p.T = model::similarity_transform(f, r, Eigen::Vector3d(1, 2, 3));
    EXPECT_NEAR(model::scale_of(p.T), f, 1e-12);
    const auto v = model::reconstruct_vertices(basis, p).coords3d;
    for (int i = 0; i < 20; ++i)
        for (int j = i + 1; j < 20; ++j)
            EXPECT_NEAR((v.col(i) - v.col(j)).norm(), f * (s.col(i) - s.col(j)).norm(), 1e-12);
}

TEST(Reconstruct, RejectsNormalizedParams)
{
    const auto basis = model::generate_synthetic_basis(10, 2, 1, 1);
    ParamVec p = ParamVec::identity(3);
    p.normalized = true;
    EXPECT_THROW(model::reconstruct_vertices(basis, p), model::StateError);
}

TEST(Project, KeepsFirstTwoRows)
{
    std::mt19937_64 rng(6);
    model::VertexSet v;
    v.coords3d = Eigen::Matrix3Xd::Random(3, 17);
    const auto p = model::project_2d(v);
    ASSERT_TRUE(p.coords2d.has_value());
    EXPECT_EQ(*p.coords2d, v.coords3d.topRows<2>());
    EXPECT_EQ(p.coords3d, v.coords3d);

    v.coords3d.row(2).setZero();
    EXPECT_EQ(*model::project_2d(v).coords2d, v.coords3d.topRows<2>());
}

TEST(Normalize, CenteringAndIdentity)
{
    std::mt19937_64 rng(7);
    const auto basis = model::generate_synthetic_basis(10, 3, 2, 1);
    const ParamVec p = random_params(basis, rng);

    model::NormStats centered{p.flat(), Eigen::VectorXd::Constant(17, 2.5)};
    EXPECT_EQ(model::normalize_params(p, centered).flat(), Eigen::VectorXd::Zero(17));

    model::NormStats unit{Eigen::VectorXd::Zero(17), Eigen::VectorXd::Ones(17)};
    const ParamVec n = model::normalize_params(p, unit);
    EXPECT_TRUE(n.normalized);
    EXPECT_EQ(n.flat(), p.flat());
}

TEST(Normalize, RoundTripAndStateChecks)
{
    std::mt19937_64 rng(8);
    const auto basis = model::generate_synthetic_basis(10, 3, 2, 1);
    model::NormStats stats{oracle::random_vector(rng, 17, 3.0),
                           oracle::random_vector(rng, 17, 1.0).cwiseAbs().array() + 0.1};
    for (int trial = 0; trial < 20; ++trial) {
        const ParamVec p = random_params(basis, rng);
        const ParamVec n = model::normalize_params(p, stats);
        const ParamVec back = model::denormalize_params(n, stats);
        EXPECT_FALSE(back.normalized);
        EXPECT_LE(oracle::relative_error(back.flat(), p.flat()), 1e-12);
        EXPECT_THROW(model::normalize_params(n, stats), model::StateError);
        EXPECT_THROW(model::denormalize_params(p, stats), model::StateError);
    }
}

TEST(ParamVec, FlatLayoutIsRowMajorTransformThenAlpha)
{
    ParamVec p = ParamVec::identity(2);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 4; ++c)
            p.T(r, c) = 10 * r + c;
    p.alpha << 100, 101;
    const Eigen::VectorXd f = p.flat();
    ASSERT_EQ(f.size(), 14);
    EXPECT_EQ(f[1], 1.0);
    EXPECT_EQ(f[4], 10.0);
    EXPECT_EQ(f[11], 23.0);
    EXPECT_EQ(f[12], 100.0);
    EXPECT_EQ(ParamVec::from_flat(f).flat(), f);
}

TEST(Truncate, FullSizeIsIdentical)
{
    const auto basis = model::generate_synthetic_basis(25, 6, 3, 2);
    const auto t = model::truncate_basis(basis, 6, 3);
    EXPECT_EQ(t.basis(), basis.basis());
    EXPECT_EQ(t.mean_shape(), basis.mean_shape());
    EXPECT_EQ(t.landmark_indices(), basis.landmark_indices());
}

TEST(Truncate, DroppedComponentsAccountForTheDifference)
{
    std::mt19937_64 rng(9);
    const auto full = model::generate_synthetic_basis(200, 199, 29, 5);
    const auto small = model::truncate_basis(full, 40, 10);
    ParamVec p = random_params(full, rng);
    ParamVec q = ParamVec::identity(50);
    q.T = p.T;
    q.alpha << p.alpha.head(40), p.alpha.segment(199, 10);

    // Dropped part: T's linear block applied to the omitted columns.
    Eigen::VectorXd dropped_alpha = p.alpha;
    dropped_alpha.head(40).setZero();
    dropped_alpha.segment(199, 10).setZero();
    const Eigen::VectorXd offset = full.basis() * dropped_alpha;
    const Eigen::Matrix3Xd offset3 = Eigen::Map<const Eigen::Matrix3Xd>(offset.data(), 3, 200);
    const Eigen::Matrix3Xd expected = p.T.leftCols<3>() * offset3;

    const auto vf = model::reconstruct_vertices(full, p).coords3d;
    const auto vs = model::reconstruct_vertices(small, q).coords3d;
    EXPECT_NEAR((vf - vs).norm(), expected.norm(), 1e-9 * expected.norm());
}

TEST(Truncate, ZeroComponentsIgnoreAlpha)
{
    std::mt19937_64 rng(10);
    const auto basis = model::generate_synthetic_basis(15, 3, 2, 3);
    const auto t = model::truncate_basis(basis, 0, 0);
    ParamVec p = ParamVec::identity(0);
    p.T = oracle::random_similarity(rng, 0.5, 2.0);
    const Eigen::Matrix3Xd want = (p.T.leftCols<3>() * basis.mean_shape()).colwise() + p.T.col(3);
    EXPECT_LE((model::reconstruct_vertices(t, p).coords3d - want).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_THROW(model::truncate_basis(basis, 4, 0), std::invalid_argument);
}

TEST(Landmarks, ArangeGatherAndDegenerate)
{
    const auto basis = arange_basis(80);
    const auto v = model::project_2d(model::reconstruct_vertices(basis, ParamVec::identity(1)));
    const Eigen::VectorXd l = model::sample_landmarks(v, basis);
    ASSERT_EQ(l.size(), 136);
    for (int i = 0; i < 68; ++i) {
        EXPECT_EQ(l[2 * i], i);
        EXPECT_EQ(l[2 * i + 1], 100 + i);
    }

    const model::BasisSet same(basis.mean_shape(), basis.basis_id(), basis.basis_exp(),
                               std::vector<std::uint32_t>(68, 7));
    const Eigen::VectorXd s = model::sample_landmarks(v, same);
    for (int i = 0; i < 68; ++i) {
        EXPECT_EQ(s[2 * i], 7.0);
        EXPECT_EQ(s[2 * i + 1], 107.0);
    }
}

TEST(Landmarks, MatchGatherOracleAndNeedProjection)
{
    std::mt19937_64 rng(11);
    const auto basis = model::generate_synthetic_basis(300, 10, 4, 6);
    const ParamVec p = random_params(basis, rng);
    const auto want = oracle::landmarks(basis, p);
    const Eigen::VectorXd got = model::landmarks_of(basis, p);
    for (std::size_t i = 0; i < want.size(); ++i)
        EXPECT_NEAR(got[static_cast<Eigen::Index>(i)], want[i], 1e-12 * (1.0 + std::abs(want[i])));
    EXPECT_THROW(model::sample_landmarks(model::reconstruct_vertices(basis, p), basis), model::StateError);
}

TEST(Render, SingleVertexAndOutOfBounds)
{
    model::VertexSet v;
    v.coords3d = Eigen::Matrix3Xd::Zero(3, 1);
    v.coords3d.col(0) << 16.0, 16.0, 0.0;
    auto img = model::render_pointsplat(model::project_2d(v), 32, 32);
    EXPECT_EQ(img.at(16, 16), 1.0);
    EXPECT_EQ(img.pixels.sum(), 1.0);

    v.coords3d.col(0) << -5.0, 40.0, 0.0;
    img = model::render_pointsplat(model::project_2d(v), 32, 32);
    EXPECT_EQ(img.pixels.sum(), 0.0);
}

TEST(Render, HandCountedSplats)
{
    model::VertexSet v;
    v.coords3d.resize(3, 3);
    v.coords3d << 3.2, 2.9, 10.0, 4.1, 3.8, 1.0, 0, 0, 0;
    const auto img = model::render_pointsplat(model::project_2d(v), 16, 16);
    EXPECT_EQ(img.at(3, 4), 1.0);
    EXPECT_EQ(img.at(10, 1), 0.5);
    EXPECT_EQ(img.pixels.sum(), 1.5);
}

TEST(Basis, RejectsBadLandmarksAndShapes)
{
    Eigen::Matrix3Xd mean = Eigen::Matrix3Xd::Random(3, 10);
    EXPECT_THROW(model::BasisSet(mean, Eigen::MatrixXd::Ones(30, 1), Eigen::MatrixXd::Ones(30, 1),
                                 std::vector<std::uint32_t>(67, 0)),
                 std::invalid_argument);
    EXPECT_THROW(model::BasisSet(mean, Eigen::MatrixXd::Ones(30, 1), Eigen::MatrixXd::Ones(30, 1),
                                 std::vector<std::uint32_t>(68, 10)),
                 std::invalid_argument);
    EXPECT_THROW(model::BasisSet(mean, Eigen::MatrixXd::Ones(29, 1), Eigen::MatrixXd::Ones(30, 1),
                                 std::vector<std::uint32_t>(68, 0)),
                 std::invalid_argument);
}
