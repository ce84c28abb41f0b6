/*
 * facereg - 3D morphable model parameter regression toolkit.
 *
 * File: include/facereg/io/dataset.hpp
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

#ifndef FACEREG_IO_DATASET_HPP
#define FACEREG_IO_DATASET_HPP

#include "facereg/model/morphable_model.hpp"
#include "facereg/synth/video_synthesis.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace facereg {
namespace io {

/**
 * Prior of the synthetic ground-truth parameters. Rotations are drawn from
 * uniform yaw/pitch/roll ranges (degrees), the scale is base_scale times a
 * factor from scale_range, and the translation puts the face at the image
 * center plus a uniform jitter (pixels). Coefficients are N(0, alpha_std^2).
 */
struct ParamPrior
{
    double base_scale = 9.0;
    synth::Interval scale_range{0.8, 1.2};
    synth::Interval yaw{-40.0, 40.0};
    synth::Interval pitch{-15.0, 15.0};
    synth::Interval roll{-15.0, 15.0};
    double center_jitter = 1.0;
    double alpha_std = 1.0;
    int image_size = model::default_image_size;
};

struct DatasetManifest
{
    std::uint64_t seed = 0;
    std::size_t count = 0;
    ParamPrior prior;
    synth::PerturbRanges ranges;
    model::NormStats stats;
    /// File holding the per-sample parameter records, relative to the manifest.
    std::string params_file;
};

struct Dataset
{
    DatasetManifest manifest;
    std::vector<model::ParamVec> params;
};

/// Population mean and standard deviation per scalar; std below 1e-8 is clamped to 1e-8.
model::NormStats fit_norm_stats(const std::vector<model::ParamVec>& pool);

/// One draw from the prior.
model::ParamVec sample_params(const model::BasisSet& basis, const ParamPrior& prior, std::mt19937_64& rng);

/// `count` seeded draws plus NormStats fitted on them (when count >= 2).
Dataset generate_dataset(const model::BasisSet& basis, std::size_t count, const ParamPrior& prior, std::uint64_t seed);

} /* namespace io */
} /* namespace facereg */

#endif /* FACEREG_IO_DATASET_HPP */
