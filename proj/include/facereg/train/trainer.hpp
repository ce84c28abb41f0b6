/*
 * facereg - 3D morphable model parameter regression toolkit.
 *
 * File: include/facereg/train/trainer.hpp
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

#ifndef FACEREG_TRAIN_TRAINER_HPP
#define FACEREG_TRAIN_TRAINER_HPP

#include "facereg/meta/meta_joint.hpp"
#include "facereg/nn/regressor.hpp"
#include "facereg/synth/video_synthesis.hpp"
#include "facereg/train/objective.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace facereg {
namespace train {

enum class LossMode { vdc, fwpdc, vdc_from_fwpdc, vanilla_joint, meta_joint, meta_joint_lrr };

std::string to_string(LossMode mode);
/// Throws std::invalid_argument for unknown names.
LossMode loss_mode_from_string(const std::string& name);

struct TrainConfig
{
    LossMode mode = LossMode::fwpdc;
    /// SGD steps along the kept trajectory (meta modes: k per outer iteration).
    int iterations = 2000;
    int batch_size = 32;
    int hidden_dim = 64;
    /// Learning rate used for fWPDC and for the vanilla-joint combination.
    double lr_fwpdc = 5e-3;
    /// Learning rate used for VDC.
    double lr_vdc = 3e-5;
    double momentum = 0.9;
    double weight_decay = 0.0005;
    double beta = 0.5;
    /// vdc_from_fwpdc: fraction of iterations trained with fWPDC before switching.
    double switch_fraction = 0.6;
    int k = 10;
    /// Landmark-regression regularization for the non-meta modes (meta_joint_lrr always uses it).
    bool lrr = false;
    /// Short-video synthesis of every batch.
    bool svs = false;
    synth::PerturbRanges ranges;
    /// Record the error curve every this many iterations (0: only at the end).
    int eval_every = 100;
    /// Samples (from the start of the pool) used for the error curve; 0 = all.
    int eval_samples = 256;

    void validate() const;
};

struct CurvePoint
{
    int iteration = 0;
    double vertex_error = 0.0;
};

struct TrainResult
{
    nn::RegressorWeights weights;
    std::vector<CurvePoint> curve;
    meta::SelectorTrace trace;
};

/**
 * Seeded, deterministic single-threaded training of a fresh regressor on
 * `pool`. The error curve records mean_vertex_error on the evaluation subset.
 */
TrainResult train_supervised(const model::BasisSet& basis, const std::vector<Sample>& pool,
                             const model::NormStats& stats, const TrainConfig& cfg, std::uint64_t seed);

} /* namespace train */
} /* namespace facereg */

#endif /* FACEREG_TRAIN_TRAINER_HPP */
