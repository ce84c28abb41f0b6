/*
 * facereg - 3D morphable model parameter regression toolkit.
 *
 * File: src/objective.cpp
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
#include "facereg/train/objective.hpp"

#include <cmath>
#include <stdexcept>

namespace facereg {
namespace train {

std::vector<Sample> make_samples(const model::BasisSet& basis, const std::vector<model::ParamVec>& params,
                                 int image_size)
{
    std::vector<Sample> out;
    out.reserve(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        const model::VertexSet v = model::project_2d(model::reconstruct_vertices(basis, params[i]));
        out.push_back(Sample{model::render_pointsplat(v, image_size, image_size).pixels, params[i],
                             model::sample_landmarks(v, basis), static_cast<std::uint64_t>(i)});
    }
    return out;
}

std::string to_string(ParamLoss loss)
{
    switch (loss) {
    case ParamLoss::vdc:
        return "vdc";
    case ParamLoss::fwpdc:
        return "fwpdc";
    case ParamLoss::vanilla_joint:
        return "vanilla_joint";
    }
    return "unknown";
}

Eigen::MatrixXd stack_images(const Batch& batch)
{
    if (batch.empty())
        throw std::invalid_argument("stack_images: empty batch");
    Eigen::MatrixXd x(batch.front().image.size(), static_cast<Eigen::Index>(batch.size()));
    for (std::size_t i = 0; i < batch.size(); ++i)
        x.col(static_cast<Eigen::Index>(i)) = batch[i].image;
    return x;
}

std::vector<model::ParamVec> predict(const nn::RegressorWeights& w, const Eigen::MatrixXd& images,
                                     const model::NormStats& stats)
{
    const Eigen::MatrixXd z = nn::predict_params(w, images);
    std::vector<model::ParamVec> out;
    out.reserve(static_cast<std::size_t>(z.cols()));
    for (Eigen::Index i = 0; i < z.cols(); ++i)
        out.push_back(model::denormalize_params(model::ParamVec::from_flat(z.col(i), true), stats));
    return out;
}

BatchObjective evaluate_objective(const nn::RegressorWeights& w, const Batch& batch, const LossContext& ctx,
                                  const ObjectiveConfig& cfg, const FrozenCoefficients* frozen, bool with_grad)
{
    if (batch.empty())
        throw std::invalid_argument("evaluate_objective: empty batch");
    if (w.param_dim() != ctx.basis.num_params())
        throw std::invalid_argument("evaluate_objective: parameter head size does not match the basis");
    if (cfg.lrr && w.lmk_dim() != 2 * model::num_landmarks)
        throw std::invalid_argument("evaluate_objective: landmark regularization needs a 136-d landmark head");
    const std::size_t n = batch.size();
    if (frozen) {
        const bool need_w = cfg.loss != ParamLoss::vdc;
        const bool need_r = cfg.loss == ParamLoss::vanilla_joint;
        if ((need_w && frozen->wpdc_weights.size() != n) || (need_r && frozen->joint_ratios.size() != n))
            throw std::invalid_argument("evaluate_objective: frozen coefficients do not match the batch");
    }
    const double inv_b = 1.0 / static_cast<double>(n);

    const nn::ForwardResult fw = nn::forward(w, stack_images(batch));
    Eigen::MatrixXd grad_p = Eigen::MatrixXd::Zero(w.param_dim(), static_cast<Eigen::Index>(n));
    Eigen::MatrixXd grad_l = Eigen::MatrixXd::Zero(w.lmk_dim(), static_cast<Eigen::Index>(n));

    BatchObjective out;
    for (std::size_t i = 0; i < n; ++i) {
        const auto col = static_cast<Eigen::Index>(i);
        const model::ParamVec p =
            model::denormalize_params(model::ParamVec::from_flat(fw.p_norm.col(col), true), ctx.stats);
        const model::ParamVec& gt = batch[i].p_gt;

        loss::LossOutput term;
        if (cfg.loss == ParamLoss::vdc) {
            term = loss::vdc(ctx.basis, p, gt);
        } else {
            Eigen::VectorXd weights = frozen ? frozen->wpdc_weights[i] : loss::fwpdc_weights(ctx.basis, p, gt);
            term = loss::weighted_parameter_distance(weights, p, gt);
            if (cfg.loss == ParamLoss::vanilla_joint) {
                const loss::LossOutput v = loss::vdc(ctx.basis, p, gt);
                const double ratio =
                    frozen ? frozen->joint_ratios[i] : loss::magnitude_ratio(term.value, v.value, cfg.joint.epsilon_ratio);
                term.value = cfg.joint.beta * term.value + (1.0 - cfg.joint.beta) * ratio * v.value;
                term.grad = cfg.joint.beta * term.grad + (1.0 - cfg.joint.beta) * ratio * v.grad;
                out.frozen.joint_ratios.push_back(ratio);
            }
            out.frozen.wpdc_weights.push_back(std::move(weights));
        }
        out.param_loss += inv_b * term.value;
        if (with_grad)
            grad_p.col(col) = inv_b * term.grad.cwiseProduct(ctx.stats.sigma);
    }

    double ratio = 0.0;
    if (cfg.lrr) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto col = static_cast<Eigen::Index>(i);
            const loss::LossOutput l = loss::landmark_regression_loss(fw.lmk.col(col), batch[i].lmk_gt);
            out.lrr_loss += inv_b * l.value;
            if (with_grad)
                grad_l.col(col) = inv_b * l.grad;
        }
        ratio = frozen ? frozen->lrr_ratio : loss::magnitude_ratio(out.param_loss, out.lrr_loss, cfg.epsilon_ratio);
        grad_l *= ratio;
    }
    out.frozen.lrr_ratio = ratio;
    out.total = out.param_loss + ratio * out.lrr_loss;
    if (with_grad)
        out.grads = nn::backward(w, fw.cache, grad_p, grad_l);
    return out;
}

double mean_vdc(const nn::RegressorWeights& w, const Batch& batch, const LossContext& ctx)
{
    ObjectiveConfig cfg;
    cfg.loss = ParamLoss::vdc;
    return evaluate_objective(w, batch, ctx, cfg, nullptr, false).param_loss;
}

double mean_vertex_error(const nn::RegressorWeights& w, const Batch& batch, const LossContext& ctx)
{
    if (batch.empty())
        throw std::invalid_argument("mean_vertex_error: empty batch");
    const auto preds = predict(w, stack_images(batch), ctx.stats);
    const double n = static_cast<double>(ctx.basis.num_vertices());
    double total = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const Eigen::Matrix3Xd d = model::reconstruct_vertices(ctx.basis, preds[i]).coords3d -
                                   model::reconstruct_vertices(ctx.basis, batch[i].p_gt).coords3d;
        total += std::sqrt(d.squaredNorm() / n);
    }
    return total / static_cast<double>(batch.size());
}

} /* namespace train */
} /* namespace facereg */
