/*
 * facereg - 3D morphable model parameter regression toolkit.
 *
 * File: include/facereg/meta/meta_joint.hpp
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

#ifndef FACEREG_META_META_JOINT_HPP
#define FACEREG_META_META_JOINT_HPP

#include "facereg/nn/regressor.hpp"
#include "facereg/train/batch_stream.hpp"
#include "facereg/train/objective.hpp"

#include <optional>
#include <string>
#include <vector>

namespace facereg {
namespace meta {

enum class Choice { fwpdc, vdc };

std::string to_string(Choice c);
Choice choice_from_string(const std::string& s);

struct SelectorRecord
{
    int outer_iteration = 0;
    Choice chosen = Choice::fwpdc;
    double meta_test_error_f = 0.0;
    double meta_test_error_v = 0.0;
};

using SelectorTrace = std::vector<SelectorRecord>;

/// The winner for a pair of meta-test errors; ties go to fWPDC.
Choice select(double meta_test_error_f, double meta_test_error_v);

/// Network weights together with their momentum buffers.
struct LearnerState
{
    nn::RegressorWeights weights;
    nn::RegressorWeights velocity;

    static LearnerState fresh(nn::RegressorWeights w);
};

/**
 * Look-ahead configuration. Each branch runs k SGD steps with its own loss
 * and optimizer settings; the "f" branch is fWPDC and the "v" branch VDC by
 * default. Branch losses are overridable to build controlled experiments.
 */
struct MetaConfig
{
    int k = 10;
    bool lrr_enabled = false;
    nn::SgdConfig sgd_f;
    nn::SgdConfig sgd_v;
    train::ParamLoss loss_f = train::ParamLoss::fwpdc;
    train::ParamLoss loss_v = train::ParamLoss::vdc;

    void validate() const;
};

struct MetaStepResult
{
    LearnerState state;
    SelectorRecord record;
    /// Meta-test batch used for the selection.
    train::Batch meta_test;
};

/**
 * One outer iteration: draw k meta-train batches and one disjoint meta-test
 * batch, roll both branches forward k steps from the same starting state,
 * judge them by mean VDC on the meta-test batch (landmark loss excluded) and
 * keep the better clone together with its momentum buffer.
 *
 * Returns nullopt, leaving `state` untouched, when the stream cannot supply
 * k + 1 batches.
 */
std::optional<MetaStepResult> meta_joint_step(const LearnerState& state, train::BatchStream& stream,
                                              const MetaConfig& cfg, const train::LossContext& ctx,
                                              int outer_iteration);

/// Header line plus one row per record: outer_iteration,chosen,meta_test_error_f,meta_test_error_v.
std::string export_trace(const SelectorTrace& trace);

/// Inverse of export_trace.
SelectorTrace parse_trace(const std::string& text);

} /* namespace meta */
} /* namespace facereg */

#endif /* FACEREG_META_META_JOINT_HPP */
