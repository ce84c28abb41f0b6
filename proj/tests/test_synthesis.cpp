/*
 * facereg - 3D morphable model parameter regression toolkit.
 *
 * File: tests/test_synthesis.cpp
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

#include "facereg/io/dataset.hpp"
#include "facereg/synth/video_synthesis.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace facereg;
using model::GrayImage;

namespace {

GrayImage constant_image(int w, int h, double value)
{
    GrayImage img;
    img.width = w;
    img.height = h;
    img.pixels = Eigen::VectorXd::Constant(w * h, value);
    return img;
}

model::ParamVec face(const model::BasisSet& basis, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    return io::sample_params(basis, io::ParamPrior{}, rng);
}

} // namespace

TEST(Noise, ZeroSigmaIsIdentityAndSeedsReproduce)
{
    std::mt19937_64 rng(1);
    const GrayImage img = constant_image(8, 8, 0.5);
    EXPECT_EQ(synth::apply_noise(img, 0.0, rng).pixels, img.pixels);

    std::mt19937_64 a(7), b(7);
    EXPECT_EQ(synth::apply_noise(img, 0.1, a).pixels, synth::apply_noise(img, 0.1, b).pixels);
    EXPECT_THROW(synth::apply_noise(img, -0.1, a), std::invalid_argument);
}

TEST(Noise, EmpiricalStdMatchesSigma)
{
    std::mt19937_64 rng(2);
    const GrayImage img = constant_image(4, 4, 0.5);
    const int draws = 10000;
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(16), sq = Eigen::VectorXd::Zero(16);
    for (int i = 0; i < draws; ++i) {
        const Eigen::VectorXd x = synth::apply_noise_unclamped(img, 0.1, rng).pixels;
        sum += x;
        sq += x.cwiseAbs2();
    }
    for (int i = 0; i < 16; ++i) {
        const double mean = sum[i] / draws;
        const double sd = std::sqrt(sq[i] / draws - mean * mean);
        EXPECT_NEAR(sd, 0.1, 0.005);
    }
}

TEST(Blur, UnitLengthAndConstantImageAreUnchanged)
{
    std::mt19937_64 rng(3);
    GrayImage img = constant_image(9, 7, 0.0);
    img.pixels = Eigen::VectorXd::Random(63).cwiseAbs();
    EXPECT_EQ(synth::apply_motion_blur(img, 33.0, 1).pixels, img.pixels);

    const GrayImage flat = constant_image(9, 7, 0.375);
    EXPECT_LE((synth::apply_motion_blur(flat, 71.0, 5).pixels.array() - 0.375).abs().maxCoeff(), 1e-15);
    for (double angle : {0.0, 30.0, 45.0, 90.0, 135.0}) {
        double total = 0.0;
        for (const auto& t : synth::motion_kernel(angle, 7))
            total += t.weight;
        EXPECT_NEAR(total, 1.0, 1e-15);
    }
}

TEST(Blur, HorizontalStreakOfSinglePixel)
{
    GrayImage img = constant_image(15, 9, 0.0);
    img.at(7, 4) = 0.9;
    const GrayImage out = synth::apply_motion_blur(img, 0.0, 5);
    for (int y = 0; y < 9; ++y) {
        for (int x = 0; x < 15; ++x) {
            const bool on = y == 4 && x >= 5 && x <= 9;
            EXPECT_NEAR(out.at(x, y), on ? 0.18 : 0.0, 1e-15) << x << "," << y;
        }
    }
    EXPECT_NEAR(out.pixels.sum(), 0.9, 1e-15);
}

TEST(Inplane, IdentityAndPureTranslation)
{
    const auto basis = model::generate_synthetic_basis(200, 6, 2, 1);
    const auto p = face(basis, 4);
    EXPECT_EQ(synth::inplane_transform(p, {}).T, p.T);

    const auto shifted = synth::inplane_transform(p, {1.0, 0.0, 5.0, 0.0}, Eigen::Vector2d(16, 16));
    const Eigen::VectorXd a = model::landmarks_of(basis, p);
    const Eigen::VectorXd b = model::landmarks_of(basis, shifted);
    for (int i = 0; i < 68; ++i) {
        EXPECT_NEAR(b[2 * i] - a[2 * i], 5.0, 1e-12);
        EXPECT_NEAR(b[2 * i + 1], a[2 * i + 1], 1e-12);
    }
    EXPECT_EQ(shifted.alpha, p.alpha);
}

TEST(Inplane, CommutesWithProjection)
{
    std::mt19937_64 rng(5);
    const auto basis = model::generate_synthetic_basis(200, 6, 2, 2);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        const auto p = face(basis, 100 + static_cast<std::uint64_t>(trial));
        const synth::InplaneDelta d{1.0 + 0.1 * u(rng), 0.3 * u(rng), 5.0 * u(rng), 5.0 * u(rng)};
        const Eigen::Vector2d c(16.0 + u(rng), 16.0 + u(rng));
        const Eigen::VectorXd moved = model::landmarks_of(basis, synth::inplane_transform(p, d, c));
        const Eigen::VectorXd orig = model::landmarks_of(basis, p);
        const Eigen::Matrix2Xd pts = Eigen::Map<const Eigen::Matrix2Xd>(orig.data(), 2, 68);
        const Eigen::Matrix2Xd want = synth::apply_inplane_2d(pts, d, c);
        EXPECT_LE((Eigen::Map<const Eigen::Matrix2Xd>(moved.data(), 2, 68) - want).cwiseAbs().maxCoeff(), 1e-9);
    }
}

TEST(Outofplane, IdentityInvolutionAndRigidity)
{
    const auto basis = model::generate_synthetic_basis(120, 6, 2, 3);
    const auto p = face(basis, 6);
    EXPECT_EQ(synth::outofplane_transform(p, 0.0, 0.0).T, p.T);

    const double pi = std::numbers::pi;
    const auto twice = synth::outofplane_transform(synth::outofplane_transform(p, pi, 0.0), pi, 0.0);
    EXPECT_LE((twice.T.leftCols<3>() - p.T.leftCols<3>()).cwiseAbs().maxCoeff(), 1e-12 * p.T.norm());

    const auto moved = synth::outofplane_transform(p, 0.4, -0.3);
    const auto a = model::reconstruct_vertices(basis, p).coords3d;
    const auto b = model::reconstruct_vertices(basis, moved).coords3d;
    double worst = 0.0;
    for (int i = 0; i < 120; i += 3)
        for (int j = i + 1; j < 120; j += 7) {
            const double da = (a.col(i) - a.col(j)).norm();
            worst = std::max(worst, std::abs((b.col(i) - b.col(j)).norm() - da) / da);
        }
    EXPECT_LE(worst, 1e-9);
    auto n = p;
    n.normalized = true;
    EXPECT_THROW(synth::outofplane_transform(n, 0.1, 0.1), model::StateError);
}

TEST(Clip, SingleFrameIsTheStill)
{
    const auto basis = model::generate_synthetic_basis(200, 6, 2, 4);
    const auto p = face(basis, 7);
    std::mt19937_64 rng(8);
    synth::PerturbRanges r;
    r.n_frames = 1;
    const auto clip = synth::synthesize_clip(basis, p, r, rng, 42);
    ASSERT_EQ(clip.frames.size(), 1u);
    EXPECT_EQ(clip.source_id, 42u);
    EXPECT_EQ(clip.frames[0].p_gt.flat(), p.flat());
    EXPECT_EQ(clip.frames[0].image.pixels,
              model::render_pointsplat(model::project_2d(model::reconstruct_vertices(basis, p))).pixels);
}

TEST(Clip, IdentityRangesRepeatTheStill)
{
    const auto basis = model::generate_synthetic_basis(200, 6, 2, 5);
    const auto p = face(basis, 9);
    std::mt19937_64 rng(10);
    const auto clip = synth::synthesize_clip(basis, p, synth::PerturbRanges::identity(6), rng);
    ASSERT_EQ(clip.frames.size(), 6u);
    for (const auto& f : clip.frames) {
        EXPECT_EQ(f.image.pixels, clip.frames[0].image.pixels);
        EXPECT_EQ(f.lmk_gt, clip.frames[0].lmk_gt);
        EXPECT_EQ(f.p_gt.flat(), p.flat());
    }
}

TEST(Clip, LabelsFollowGeometryNotPhotometry)
{
    const auto basis = model::generate_synthetic_basis(200, 6, 2, 6);
    const auto p = face(basis, 11);
    synth::PerturbRanges clean = synth::PerturbRanges{};
    clean.noise_sigma = 0.0;
    clean.blur_len = 1;
    synth::PerturbRanges heavy = synth::PerturbRanges{};
    heavy.noise_sigma = 0.3;
    heavy.blur_len = 7;
    std::mt19937_64 a(12), b(12);
    const auto ca = synth::synthesize_clip(basis, p, clean, a);
    const auto cb = synth::synthesize_clip(basis, p, heavy, b);
    for (std::size_t j = 0; j < ca.frames.size(); ++j) {
        EXPECT_EQ(ca.frames[j].p_gt.flat(), cb.frames[j].p_gt.flat());
        EXPECT_EQ(ca.frames[j].lmk_gt, cb.frames[j].lmk_gt);
        const auto want = oracle::landmarks(basis, cb.frames[j].p_gt);
        EXPECT_LE((cb.frames[j].lmk_gt - Eigen::Map<const Eigen::VectorXd>(want.data(), 136)).cwiseAbs().maxCoeff(),
                  1e-9);
    }
    EXPECT_NE(ca.frames[1].image.pixels, cb.frames[1].image.pixels);
}

TEST(Clip, DriftStaysWithinCompoundedRanges)
{
    const auto basis = model::generate_synthetic_basis(200, 6, 2, 7);
    const auto p = face(basis, 13);
    synth::PerturbRanges r;
    r.yaw = {0.0, 0.0};
    r.pitch = {0.0, 0.0};
    std::mt19937_64 rng(14);
    const auto clip = synth::synthesize_clip(basis, p, r, rng);
    const double s0 = model::scale_of(p.T);
    const Eigen::Matrix3d r0 = p.T.leftCols<3>() / s0;
    for (std::size_t j = 1; j < clip.frames.size(); ++j) {
        const auto& t = clip.frames[j].p_gt.T;
        const double ratio = model::scale_of(t) / s0;
        const double n = static_cast<double>(j);
        EXPECT_GE(ratio, std::pow(0.95, n) - 1e-12);
        EXPECT_LE(ratio, std::pow(1.05, n) + 1e-12);
        const Eigen::Matrix3d rel = (t.leftCols<3>() / model::scale_of(t)) * r0.transpose();
        const double angle = std::abs(std::atan2(rel(1, 0), rel(0, 0)));
        EXPECT_LE(angle, n * 3.0 * std::numbers::pi / 180.0 + 1e-9);
    }
}

TEST(Ranges, ValidateRejectsBadValues)
{
    synth::PerturbRanges r;
    r.scale = {1.1, 0.9};
    EXPECT_THROW(r.validate(), std::invalid_argument);
    r = synth::PerturbRanges{};
    r.blur_len = 0;
    EXPECT_THROW(r.validate(), std::invalid_argument);
    r = synth::PerturbRanges{};
    r.n_frames = 0;
    EXPECT_THROW(r.validate(), std::invalid_argument);
}
