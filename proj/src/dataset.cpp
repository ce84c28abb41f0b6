/*
 * facereg - 3D morphable model parameter regression toolkit.
 *
 * File: src/dataset.cpp
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

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace facereg {
namespace io {

model::NormStats fit_norm_stats(const std::vector<model::ParamVec>& pool)
{
    if (pool.size() < 2)
        throw std::invalid_argument("fit_norm_stats: need at least two parameter vectors");
    const Eigen::Index dim = pool.front().size();
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(dim);
    for (const auto& p : pool) {
        if (p.size() != dim)
            throw std::invalid_argument("fit_norm_stats: parameter vectors differ in length");
        sum += p.flat();
    }
    model::NormStats stats;
    stats.mu = sum / static_cast<double>(pool.size());
    Eigen::VectorXd sq = Eigen::VectorXd::Zero(dim);
    for (const auto& p : pool)
        sq += (p.flat() - stats.mu).cwiseAbs2();
    stats.sigma = (sq / static_cast<double>(pool.size())).cwiseSqrt().cwiseMax(1e-8);
    return stats;
}

model::ParamVec sample_params(const model::BasisSet& basis, const ParamPrior& prior, std::mt19937_64& rng)
{
    constexpr double deg = std::numbers::pi / 180.0;
    const double yaw = prior.yaw.sample(rng) * deg;
    const double pitch = prior.pitch.sample(rng) * deg;
    const double roll = prior.roll.sample(rng) * deg;
    const double f = prior.base_scale * prior.scale_range.sample(rng);
    const synth::Interval jitter{-prior.center_jitter, prior.center_jitter};
    const double cx = 0.5 * prior.image_size + jitter.sample(rng);
    const double cy = 0.5 * prior.image_size + jitter.sample(rng);

    model::ParamVec p;
    p.T.leftCols<3>() = f * model::rotation_from_angles(yaw, pitch, roll);
    p.T.col(3) = Eigen::Vector3d(cx, cy, 0.0);
    std::normal_distribution<double> gauss(0.0, prior.alpha_std);
    p.alpha.resize(basis.num_alpha());
    for (Eigen::Index i = 0; i < p.alpha.size(); ++i)
        p.alpha[i] = gauss(rng);
    return p;
}

Dataset generate_dataset(const model::BasisSet& basis, std::size_t count, const ParamPrior& prior, std::uint64_t seed)
{
    if (count < 1)
        throw std::invalid_argument("generate_dataset: count must be at least 1");
    std::mt19937_64 rng(seed);
    Dataset ds;
    ds.params.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        ds.params.push_back(sample_params(basis, prior, rng));
    ds.manifest.seed = seed;
    ds.manifest.count = count;
    ds.manifest.prior = prior;
    if (count >= 2) {
        ds.manifest.stats = fit_norm_stats(ds.params);
    } else {
        ds.manifest.stats.mu = ds.params.front().flat();
        ds.manifest.stats.sigma = Eigen::VectorXd::Constant(ds.manifest.stats.mu.size(), 1.0);
    }
    return ds;
}

} /* namespace io */
} /* namespace facereg */
