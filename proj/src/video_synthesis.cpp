/*
 * facereg - 3D morphable model parameter regression toolkit.
 *
 * File: src/video_synthesis.cpp
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
#include "facereg/synth/video_synthesis.hpp"

#include "Eigen/Geometry"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace facereg {
namespace synth {

using model::GrayImage;
using model::ParamVec;

namespace {

double deg2rad(double deg)
{
    return deg * std::numbers::pi / 180.0;
}

} // namespace

double Interval::sample(std::mt19937_64& rng) const
{
    if (lo == hi)
        return lo;
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

void PerturbRanges::validate() const
{
    for (const Interval* iv : {&scale, &rot_inplane, &trans, &yaw, &pitch}) {
        if (!(iv->lo <= iv->hi))
            throw std::invalid_argument("PerturbRanges: interval bounds out of order");
    }
    if (!(scale.lo > 0.0))
        throw std::invalid_argument("PerturbRanges: scale must stay positive");
    if (!(noise_sigma >= 0.0))
        throw std::invalid_argument("PerturbRanges: noise_sigma must be nonnegative");
    if (blur_len < 1)
        throw std::invalid_argument("PerturbRanges: blur_len must be at least 1");
    if (n_frames < 1)
        throw std::invalid_argument("PerturbRanges: n_frames must be at least 1");
}

PerturbRanges PerturbRanges::identity(int n_frames)
{
    PerturbRanges r;
    r.scale = {1.0, 1.0};
    r.rot_inplane = {0.0, 0.0};
    r.trans = {0.0, 0.0};
    r.yaw = {0.0, 0.0};
    r.pitch = {0.0, 0.0};
    r.noise_sigma = 0.0;
    r.blur_len = 1;
    r.n_frames = n_frames;
    return r;
}

GrayImage apply_noise_unclamped(const GrayImage& image, double sigma, std::mt19937_64& rng)
{
    if (!(sigma >= 0.0))
        throw std::invalid_argument("apply_noise: sigma must be nonnegative");
    GrayImage out = image;
    if (sigma == 0.0)
        return out;
    std::normal_distribution<double> gauss(0.0, sigma);
    for (Eigen::Index i = 0; i < out.pixels.size(); ++i)
        out.pixels[i] += gauss(rng);
    return out;
}

GrayImage apply_noise(const GrayImage& image, double sigma, std::mt19937_64& rng)
{
    GrayImage out = apply_noise_unclamped(image, sigma, rng);
    out.pixels = out.pixels.cwiseMax(0.0).cwiseMin(1.0);
    return out;
}

std::vector<KernelTap> motion_kernel(double angle_deg, int length)
{
    if (length < 1)
        throw std::invalid_argument("motion_kernel: length must be at least 1");
    const double a = deg2rad(angle_deg);
    const double c = std::cos(a);
    const double s = std::sin(a);
    std::map<std::pair<int, int>, double> taps;
    const double half = 0.5 * (length - 1);
    for (int t = 0; t < length; ++t) {
        const double u = t - half;
        const int dx = static_cast<int>(std::floor(u * c + 0.5));
        const int dy = static_cast<int>(std::floor(u * s + 0.5));
        taps[{dx, dy}] += 1.0 / length;
    }
    std::vector<KernelTap> out;
    out.reserve(taps.size());
    for (const auto& [offset, weight] : taps)
        out.push_back({offset.first, offset.second, weight});
    return out;
}

GrayImage apply_motion_blur(const GrayImage& image, double angle_deg, int length)
{
    const auto taps = motion_kernel(angle_deg, length);
    if (taps.size() == 1)
        return image;
    GrayImage out = image;
    out.pixels.setZero();
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            double acc = 0.0;
            for (const auto& tap : taps) {
                const int sx = std::clamp(x - tap.dx, 0, image.width - 1);
                const int sy = std::clamp(y - tap.dy, 0, image.height - 1);
                acc += tap.weight * image.at(sx, sy);
            }
            out.at(x, y) = acc;
        }
    }
    return out;
}

Eigen::Matrix<double, 3, 4> inplane_matrix(const InplaneDelta& d, const Eigen::Vector2d& center)
{
    Eigen::Matrix2d r2;
    r2 << std::cos(d.theta), -std::sin(d.theta), std::sin(d.theta), std::cos(d.theta);
    Eigen::Matrix<double, 3, 4> m = Eigen::Matrix<double, 3, 4>::Zero();
    m.topLeftCorner<2, 2>() = d.scale * r2;
    m(2, 2) = d.scale;
    m.block<2, 1>(0, 3) = -d.scale * r2 * center + center + Eigen::Vector2d(d.tx, d.ty);
    return m;
}

Eigen::Matrix2Xd apply_inplane_2d(const Eigen::Matrix2Xd& points, const InplaneDelta& d, const Eigen::Vector2d& center)
{
    const Eigen::Matrix<double, 3, 4> m = inplane_matrix(d, center);
    return (m.topLeftCorner<2, 2>() * points).colwise() + m.block<2, 1>(0, 3);
}

ParamVec inplane_transform(const ParamVec& p, const InplaneDelta& d, const Eigen::Vector2d& center)
{
    if (p.normalized)
        throw model::StateError("inplane_transform: parameters are normalized");
    const Eigen::Matrix<double, 3, 4> m = inplane_matrix(d, center);
    ParamVec out = p;
    out.T = m.leftCols<3>() * p.T;
    out.T.col(3) += m.col(3);
    return out;
}

ParamVec outofplane_transform(const ParamVec& p, double yaw, double pitch)
{
    if (p.normalized)
        throw model::StateError("outofplane_transform: parameters are normalized");
    const Eigen::Matrix3d r = Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitY()).toRotationMatrix() *
                              Eigen::AngleAxisd(pitch, Eigen::Vector3d::UnitX()).toRotationMatrix();
    ParamVec out = p;
    out.T = r * p.T;
    return out;
}

SyntheticClip synthesize_clip(const model::BasisSet& basis, const ParamVec& still, const PerturbRanges& ranges,
                              std::mt19937_64& rng, std::uint64_t source_id, int width, int height)
{
    ranges.validate();
    const Eigen::Vector2d center(0.5 * width, 0.5 * height);
    auto make_frame = [&](const ParamVec& p) {
        const model::VertexSet v = model::project_2d(model::reconstruct_vertices(basis, p));
        return Frame{model::render_pointsplat(v, width, height), p, model::sample_landmarks(v, basis)};
    };

    SyntheticClip clip;
    clip.source_id = source_id;
    clip.frames.reserve(static_cast<std::size_t>(ranges.n_frames));
    clip.frames.push_back(make_frame(still));
    std::uniform_real_distribution<double> blur_angle(0.0, 180.0);
    for (int j = 1; j < ranges.n_frames; ++j) {
        const double yaw = deg2rad(ranges.yaw.sample(rng));
        const double pitch = deg2rad(ranges.pitch.sample(rng));
        InplaneDelta d;
        d.scale = ranges.scale.sample(rng);
        d.theta = deg2rad(ranges.rot_inplane.sample(rng));
        d.tx = ranges.trans.sample(rng);
        d.ty = ranges.trans.sample(rng);

        // Photometric draws come from a per-frame stream so labels do not depend on them.
        std::mt19937_64 photo(rng());

        const ParamVec p = inplane_transform(outofplane_transform(clip.frames.back().p_gt, yaw, pitch), d, center);
        Frame frame = make_frame(p);
        frame.image = apply_noise(frame.image, ranges.noise_sigma, photo);
        frame.image = apply_motion_blur(frame.image, blur_angle(photo), ranges.blur_len);
        clip.frames.push_back(std::move(frame));
    }
    return clip;
}

std::vector<Frame> flatten_clips(const std::vector<SyntheticClip>& clips)
{
    std::vector<Frame> out;
    for (const auto& c : clips)
        out.insert(out.end(), c.frames.begin(), c.frames.end());
    return out;
}

} /* namespace synth */
} /* namespace facereg */
