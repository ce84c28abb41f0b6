/*
 * facereg - 3D morphable model parameter regression toolkit.
 *
 * File: include/facereg/loss/losses.hpp
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

#ifndef FACEREG_LOSS_LOSSES_HPP
#define FACEREG_LOSS_LOSSES_HPP

#include "facereg/model/morphable_model.hpp"

#include "Eigen/Core"

namespace facereg {
namespace loss {

/**
 * Value of a per-sample loss and its gradient with respect to the
 * denormalized predicted parameters (flat layout: T row-major, then alpha).
 * The landmark loss reports its gradient with respect to the predicted
 * 136-vector instead.
 */
struct LossOutput
{
    double value = 0.0;
    Eigen::VectorXd grad;
};

/**
 * Weighting between the two parameter losses in the fixed-weight combination
 *   beta * L_fwpdc + (1 - beta) * (|l_fwpdc| / |l_vdc|) * L_vdc.
 */
struct JointConfig
{
    double beta = 0.5;
    double epsilon_ratio = 1e-12;

    void validate() const;
};

/// Squared vertex distance ||V3d(p) - V3d(p_gt)||^2 over all 3N coordinates.
LossOutput vdc(const model::BasisSet& basis, const model::ParamVec& p, const model::ParamVec& p_gt);

/**
 * Per-parameter importance weights of the weighted parameter distance, from
 * the brute-force definition: for every scalar i the ground truth is
 * degraded in position i only, the mesh is reconstructed, and the weight is
 * the distance to the ground-truth mesh. Weights are divided by their
 * maximum; all-zero when p == p_gt.
 *
 * Reconstructs the mesh once per parameter. Reference implementation only.
 */
Eigen::VectorXd wpdc_weights_naive(const model::BasisSet& basis, const model::ParamVec& p,
                                   const model::ParamVec& p_gt);

/**
 * The same weights from a single reconstruction of the ground-truth shape.
 *
 * For a T entry in column c < 3 the degraded mesh differs from the ground
 * truth by dT * S_gt(c, :), for the translation column by dT * ones(N), and
 * for alpha_i by dalpha_i * T_gt[:3,:3] * A(:, i). With T_gt = f [R | t] the
 * last norm is f * |dalpha_i| * ||A(:, i)||, with f read from T_gt.
 */
Eigen::VectorXd fwpdc_weights(const model::BasisSet& basis, const model::ParamVec& p,
                              const model::ParamVec& p_gt);

/// ||w * (p - p_gt)||^2 with fixed weights; gradient 2 w^2 (p - p_gt).
LossOutput weighted_parameter_distance(const Eigen::VectorXd& weights, const model::ParamVec& p,
                                       const model::ParamVec& p_gt);

LossOutput wpdc_naive(const model::BasisSet& basis, const model::ParamVec& p, const model::ParamVec& p_gt);
LossOutput fwpdc(const model::BasisSet& basis, const model::ParamVec& p, const model::ParamVec& p_gt);

/// Mean squared error over the 136 landmark coordinates; gradient w.r.t. pred.
LossOutput landmark_regression_loss(const Eigen::VectorXd& pred_lmk, const Eigen::VectorXd& gt_lmk);

/**
 * Fixed-weight combination of fWPDC and VDC. The magnitude ratio
 * |l_fwpdc| / |l_vdc| is evaluated on the current values and treated as a
 * constant in the gradient.
 */
LossOutput vanilla_joint(const model::BasisSet& basis, const model::ParamVec& p, const model::ParamVec& p_gt,
                         const JointConfig& cfg);

/// |numerator| / max(|denominator|, epsilon).
double magnitude_ratio(double numerator, double denominator, double epsilon);

} /* namespace loss */
} /* namespace facereg */

#endif /* FACEREG_LOSS_LOSSES_HPP */
