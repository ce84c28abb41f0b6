/*
 * facereg - 3D morphable model parameter regression toolkit.
 *
 * File: include/facereg/synth/video_synthesis.hpp
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
#pragma once

#ifndef FACEREG_SYNTH_VIDEO_SYNTHESIS_HPP
#define FACEREG_SYNTH_VIDEO_SYNTHESIS_HPP

#include "facereg/model/morphable_model.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace facereg {
namespace synth {

struct Interval
{
    double lo = 0.0;
    double hi = 0.0;

    double sample(std::mt19937_64& rng) const;
};

/**
 * Per-step perturbation ranges for expanding a still sample into a short
 * clip. Angles are in degrees, translations in pixels. The defaults are the
 * published training settings; noise and blur length have no published value.
 */
struct PerturbRanges
{
    Interval scale{0.95, 1.05};
    Interval rot_inplane{-3.0, 3.0};
    Interval trans{-5.0, 5.0};
    Interval yaw{-5.0, 5.0};
    Interval pitch{-5.0, 5.0};
    double noise_sigma = 0.02;
    int blur_len = 3;
    int n_frames = 8;

    void validate() const;

    /// Ranges under which every frame equals the still.
    static PerturbRanges identity(int n_frames);
};

struct Frame
{
    model::GrayImage image;
    model::ParamVec p_gt;
    Eigen::VectorXd lmk_gt;
};

struct SyntheticClip
{
    std::vector<Frame> frames;
    std::uint64_t source_id = 0;
};

/// In-plane similarity: scale, rotation (radians) about the image z axis, then translation.
struct InplaneDelta
{
    double scale = 1.0;
    double theta = 0.0;
    double tx = 0.0;
    double ty = 0.0;
};

/// x + N(0, sigma^2) per pixel, clamped to [0, 1].
model::GrayImage apply_noise(const model::GrayImage& image, double sigma, std::mt19937_64& rng);

/// Same as apply_noise without the clamp, for checking the noise statistics.
model::GrayImage apply_noise_unclamped(const model::GrayImage& image, double sigma, std::mt19937_64& rng);

/**
 * Normalized linear motion kernel: `length` unit samples along a segment
 * through the origin at `angle_deg`, snapped to the pixel grid. Entries sum
 * to one. Returned as (dx, dy, weight) taps.
 */
struct KernelTap
{
    int dx;
    int dy;
    double weight;
};
std::vector<KernelTap> motion_kernel(double angle_deg, int length);

/// Convolution with motion_kernel(angle_deg, length); edges are replicated.
model::GrayImage apply_motion_blur(const model::GrayImage& image, double angle_deg, int length);

/// 3x4 matrix of the 3D similarity whose xy action is the 2D similarity about `center`.
Eigen::Matrix<double, 3, 4> inplane_matrix(const InplaneDelta& d, const Eigen::Vector2d& center = Eigen::Vector2d::Zero());

/// Applies the 2D similarity about `center` to projected points.
Eigen::Matrix2Xd apply_inplane_2d(const Eigen::Matrix2Xd& points, const InplaneDelta& d,
                                  const Eigen::Vector2d& center = Eigen::Vector2d::Zero());

/// Left-multiplies T by the 3D similarity of `d`; alpha untouched.
model::ParamVec inplane_transform(const model::ParamVec& p, const InplaneDelta& d,
                                  const Eigen::Vector2d& center = Eigen::Vector2d::Zero());

/// Left-multiplies all of T by R_yaw(yaw) * R_pitch(pitch); angles in radians.
model::ParamVec outofplane_transform(const model::ParamVec& p, double yaw, double pitch);

/**
 * Expands a still into ranges.n_frames frames. Frame 0 is the unperturbed
 * render. Every later frame applies a freshly drawn out-of-plane rotation and
 * then a fresh in-plane similarity (about the image center) to the previous
 * frame's parameters, renders, and then adds noise followed by motion blur to
 * the image only. Labels follow the geometry, never the photometry.
 */
SyntheticClip synthesize_clip(const model::BasisSet& basis, const model::ParamVec& still, const PerturbRanges& ranges,
                              std::mt19937_64& rng, std::uint64_t source_id = 0,
                              int width = model::default_image_size, int height = model::default_image_size);

/// Concatenates clips frame by frame; clip frames stay contiguous.
std::vector<Frame> flatten_clips(const std::vector<SyntheticClip>& clips);

} /* namespace synth */
} /* namespace facereg */

#endif /* FACEREG_SYNTH_VIDEO_SYNTHESIS_HPP */
