/*
 * facereg - 3D morphable model parameter regression toolkit.
 *
 * File: src/trainer.cpp
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
#include "facereg/train/trainer.hpp"

#include "facereg/train/batch_stream.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace facereg {
namespace train {

std::string to_string(LossMode mode)
{
    switch (mode) {
    case LossMode::vdc:
        return "vdc";
    case LossMode::fwpdc:
        return "fwpdc";
    case LossMode::vdc_from_fwpdc:
        return "vdc_from_fwpdc";
    case LossMode::vanilla_joint:
        return "vanilla_joint";
    case LossMode::meta_joint:
        return "meta_joint";
    case LossMode::meta_joint_lrr:
        return "meta_joint_lrr";
    }
    return "unknown";
}

LossMode loss_mode_from_string(const std::string& name)
{
    for (LossMode m : {LossMode::vdc, LossMode::fwpdc, LossMode::vdc_from_fwpdc, LossMode::vanilla_joint,
                       LossMode::meta_joint, LossMode::meta_joint_lrr}) {
        if (to_string(m) == name)
            return m;
    }
    throw std::invalid_argument("unknown loss mode '" + name +
                                "' (expected vdc, fwpdc, vdc_from_fwpdc, vanilla_joint, meta_joint or meta_joint_lrr)");
}

void TrainConfig::validate() const
{
    if (iterations < 1 || batch_size < 1 || hidden_dim < 1)
        throw std::invalid_argument("TrainConfig: iterations, batch_size and hidden_dim must be positive");
    if (!(lr_fwpdc >= 0.0) || !(lr_vdc >= 0.0))
        throw std::invalid_argument("TrainConfig: learning rates must be nonnegative");
    if (!(switch_fraction >= 0.0 && switch_fraction <= 1.0))
        throw std::invalid_argument("TrainConfig: switch_fraction must lie in [0, 1]");
    if (k < 1)
        throw std::invalid_argument("TrainConfig: k must be at least 1");
    if (eval_every < 0 || eval_samples < 0)
        throw std::invalid_argument("TrainConfig: eval_every and eval_samples must be nonnegative");
    loss::JointConfig{beta, 1e-12}.validate();
    if (svs) {
        ranges.validate();
        if (batch_size % ranges.n_frames != 0)
            throw std::invalid_argument("TrainConfig: batch_size must be a multiple of n_frames with svs");
    }
}

TrainResult train_supervised(const model::BasisSet& basis, const std::vector<Sample>& pool,
                             const model::NormStats& stats, const TrainConfig& cfg, std::uint64_t seed)
{
    cfg.validate();
    if (pool.empty())
        throw std::invalid_argument("train_supervised: empty pool");
    const LossContext ctx{basis, stats};
    const int input_dim = static_cast<int>(pool.front().image.size());

    // Distinct streams for weight init and batch order, both derived from the seed.
    TrainResult result;
    meta::LearnerState state = meta::LearnerState::fresh(
        nn::init_regressor(input_dim, cfg.hidden_dim, basis.num_params(), 2 * model::num_landmarks, seed));
    {
        Eigen::VectorXd mean_lmk = Eigen::VectorXd::Zero(2 * model::num_landmarks);
        for (const auto& s : pool)
            mean_lmk += s.lmk_gt;
        state.weights.b_lmk = mean_lmk / static_cast<double>(pool.size());
    }

    PoolStream stream(pool, cfg.batch_size, seed ^ 0x9e3779b97f4a7c15ULL);
    if (cfg.svs)
        stream.enable_synthesis(basis, cfg.ranges);

    const std::size_t n_eval =
        cfg.eval_samples == 0 ? pool.size() : std::min(pool.size(), static_cast<std::size_t>(cfg.eval_samples));
    const Batch eval_set(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n_eval));
    auto record = [&](int iteration) {
        result.curve.push_back({iteration, mean_vertex_error(state.weights, eval_set, ctx)});
    };

    nn::SgdConfig sgd_f{cfg.lr_fwpdc, cfg.momentum, cfg.weight_decay, cfg.batch_size};
    nn::SgdConfig sgd_v{cfg.lr_vdc, cfg.momentum, cfg.weight_decay, cfg.batch_size};

    record(0);
    const bool meta_mode = cfg.mode == LossMode::meta_joint || cfg.mode == LossMode::meta_joint_lrr;
    if (meta_mode) {
        meta::MetaConfig mc;
        mc.k = cfg.k;
        mc.lrr_enabled = cfg.mode == LossMode::meta_joint_lrr || cfg.lrr;
        mc.sgd_f = sgd_f;
        mc.sgd_v = sgd_v;
        const int outer = std::max(1, cfg.iterations / cfg.k);
        for (int i = 0; i < outer; ++i) {
            auto step = meta::meta_joint_step(state, stream, mc, ctx, i);
            if (!step)
                break;
            state = std::move(step->state);
            result.trace.push_back(step->record);
            const int done = (i + 1) * cfg.k;
            const int prev = i * cfg.k;
            if (cfg.eval_every > 0 && done / cfg.eval_every != prev / cfg.eval_every && i + 1 < outer)
                record(done);
        }
        record(outer * cfg.k);
    } else {
        const int switch_at = static_cast<int>(std::lround(cfg.switch_fraction * cfg.iterations));
        for (int it = 0; it < cfg.iterations; ++it) {
            ObjectiveConfig obj;
            obj.lrr = cfg.lrr;
            obj.joint.beta = cfg.beta;
            const nn::SgdConfig* sgd = &sgd_f;
            switch (cfg.mode) {
            case LossMode::vdc:
                obj.loss = ParamLoss::vdc;
                sgd = &sgd_v;
                break;
            case LossMode::fwpdc:
                obj.loss = ParamLoss::fwpdc;
                break;
            case LossMode::vdc_from_fwpdc:
                obj.loss = it < switch_at ? ParamLoss::fwpdc : ParamLoss::vdc;
                sgd = it < switch_at ? &sgd_f : &sgd_v;
                break;
            case LossMode::vanilla_joint:
                obj.loss = ParamLoss::vanilla_joint;
                break;
            default:
                throw std::logic_error("train_supervised: unreachable loss mode");
            }
            auto batch = stream.next();
            if (!batch)
                break;
            const BatchObjective o = evaluate_objective(state.weights, *batch, ctx, obj);
            state.weights = nn::sgd_step(state.weights, o.grads, *sgd, state.velocity);
            if (cfg.eval_every > 0 && (it + 1) % cfg.eval_every == 0 && it + 1 < cfg.iterations)
                record(it + 1);
        }
        record(cfg.iterations);
    }
    result.weights = std::move(state.weights);
    return result;
}

} /* namespace train */
} /* namespace facereg */
