/*
 * facereg - 3D morphable model parameter regression toolkit.
 *
 * File: include/facereg/train/objective.hpp
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

#ifndef FACEREG_TRAIN_OBJECTIVE_HPP
#define FACEREG_TRAIN_OBJECTIVE_HPP

#include "facereg/loss/losses.hpp"
#include "facereg/model/morphable_model.hpp"
#include "facereg/nn/regressor.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace facereg {
namespace train {

/// One supervised example: rendered image plus its labels.
struct Sample
{
    Eigen::VectorXd image;
    model::ParamVec p_gt;
    Eigen::VectorXd lmk_gt;
    /// Index of the still the sample was made from.
    std::uint64_t id = 0;
};

using Batch = std::vector<Sample>;

/// Renders every parameter vector into a sample.
std::vector<Sample> make_samples(const model::BasisSet& basis, const std::vector<model::ParamVec>& params,
                                 int image_size = model::default_image_size);

enum class ParamLoss { vdc, fwpdc, vanilla_joint };

std::string to_string(ParamLoss loss);

struct ObjectiveConfig
{
    ParamLoss loss = ParamLoss::fwpdc;
    /// Adds the landmark head's regression loss, scaled by |l_param| / |l_lrr|.
    bool lrr = false;
    loss::JointConfig joint;
    double epsilon_ratio = 1e-12;
};

/**
 * Coefficients that the gradient treats as constants: per-sample WPDC
 * weights, per-sample joint ratios and the batch landmark ratio. Passing them
 * back in evaluates the surrogate with those constants held fixed.
 */
struct FrozenCoefficients
{
    std::vector<Eigen::VectorXd> wpdc_weights;
    std::vector<double> joint_ratios;
    double lrr_ratio = 0.0;
};

struct BatchObjective
{
    double param_loss = 0.0; ///< mean over the batch
    double lrr_loss = 0.0;   ///< mean over the batch, 0 without lrr
    double total = 0.0;      ///< param_loss + lrr_ratio * lrr_loss
    nn::RegressorWeights grads;
    FrozenCoefficients frozen;
};

/// Model and normalization the network's parameter head is tied to.
struct LossContext
{
    const model::BasisSet& basis;
    const model::NormStats& stats;
};

/**
 * Forward + backward over a batch. The parameter head output is denormalized
 * before the losses, so the chain rule multiplies by sigma. Batch losses are
 * arithmetic means over samples.
 */
BatchObjective evaluate_objective(const nn::RegressorWeights& w, const Batch& batch, const LossContext& ctx,
                                  const ObjectiveConfig& cfg, const FrozenCoefficients* frozen = nullptr,
                                  bool with_grad = true);

/// Denormalized predictions of the parameter head, one per column of `images`.
std::vector<model::ParamVec> predict(const nn::RegressorWeights& w, const Eigen::MatrixXd& images,
                                     const model::NormStats& stats);

Eigen::MatrixXd stack_images(const Batch& batch);

/// Mean VDC of the parameter head over a batch.
double mean_vdc(const nn::RegressorWeights& w, const Batch& batch, const LossContext& ctx);

/// Mean over samples of the per-vertex RMS distance sqrt(VDC / N).
double mean_vertex_error(const nn::RegressorWeights& w, const Batch& batch, const LossContext& ctx);

} /* namespace train */
} /* namespace facereg */

#endif /* FACEREG_TRAIN_OBJECTIVE_HPP */
