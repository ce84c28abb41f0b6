/*
 * facereg - 3D morphable model parameter regression toolkit.
 *
 * File: src/losses.cpp
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
#include "facereg/loss/losses.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace facereg {
namespace loss {

using model::BasisSet;
using model::ParamVec;

namespace {

void check_pair(const BasisSet& basis, const ParamVec& p, const ParamVec& p_gt, const char* who)
{
    if (p.normalized || p_gt.normalized)
        throw model::StateError(std::string(who) + ": losses take denormalized parameters");
    if (p.alpha.size() != basis.num_alpha() || p_gt.alpha.size() != basis.num_alpha())
        throw std::invalid_argument(std::string(who) + ": parameter dimension does not match basis (" +
                                    std::to_string(basis.num_alpha()) + " coefficients)");
}

Eigen::VectorXd normalize_by_max(Eigen::VectorXd w)
{
    const double z = w.size() > 0 ? w.maxCoeff() : 0.0;
    if (z > 0.0)
        w /= z;
    else
        w.setZero();
    return w;
}

} // namespace

void JointConfig::validate() const
{
    if (!(beta >= 0.0 && beta <= 1.0))
        throw std::invalid_argument("JointConfig: beta must lie in [0, 1]");
    if (!(epsilon_ratio > 0.0))
        throw std::invalid_argument("JointConfig: epsilon_ratio must be positive");
}

double magnitude_ratio(double numerator, double denominator, double epsilon)
{
    return std::abs(numerator) / std::max(std::abs(denominator), epsilon);
}

LossOutput vdc(const BasisSet& basis, const ParamVec& p, const ParamVec& p_gt)
{
    check_pair(basis, p, p_gt, "vdc");
    const Eigen::Index n = basis.num_vertices();
    const Eigen::Matrix3Xd s = basis.shape(p.alpha);
    const Eigen::Matrix3Xd s_gt = basis.shape(p_gt.alpha);
    const Eigen::Matrix3d rot = p.T.leftCols<3>();

    Eigen::Matrix3Xd residual = (rot * s).colwise() + p.T.col(3);
    residual -= (p_gt.T.leftCols<3>() * s_gt).colwise() + p_gt.T.col(3);

    LossOutput out;
    out.value = residual.squaredNorm();
    out.grad.resize(p.size());

    // dL/dT = 2 R [S; 1]^T
    Eigen::Matrix<double, 3, 4> g_t;
    g_t.leftCols<3>() = 2.0 * residual * s.transpose();
    g_t.col(3) = 2.0 * residual.rowwise().sum();
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 4; ++c)
            out.grad[r * 4 + c] = g_t(r, c);

    // dL/dalpha = 2 A^T vec(T33^T R)
    if (basis.num_alpha() > 0) {
        const Eigen::Matrix3Xd back = rot.transpose() * residual;
        const Eigen::Map<const Eigen::VectorXd> flat(back.data(), 3 * n);
        out.grad.tail(basis.num_alpha()) = 2.0 * (basis.basis().transpose() * flat);
    }
    return out;
}

Eigen::VectorXd wpdc_weights_naive(const BasisSet& basis, const ParamVec& p, const ParamVec& p_gt)
{
    check_pair(basis, p, p_gt, "wpdc_naive");
    const Eigen::Matrix3Xd v_gt = model::reconstruct_vertices(basis, p_gt).coords3d;
    const Eigen::VectorXd flat_p = p.flat();
    const Eigen::VectorXd flat_gt = p_gt.flat();
    Eigen::VectorXd w(flat_p.size());
    for (Eigen::Index i = 0; i < flat_p.size(); ++i) {
        Eigen::VectorXd degraded = flat_gt;
        degraded[i] = flat_p[i];
        const Eigen::Matrix3Xd v = model::reconstruct_vertices(basis, ParamVec::from_flat(degraded)).coords3d;
        w[i] = (v - v_gt).norm();
    }
    return normalize_by_max(std::move(w));
}

Eigen::VectorXd fwpdc_weights(const BasisSet& basis, const ParamVec& p, const ParamVec& p_gt)
{
    check_pair(basis, p, p_gt, "fwpdc");
    const Eigen::Matrix3Xd s_gt = basis.shape(p_gt.alpha);
    const double sqrt_n = std::sqrt(static_cast<double>(basis.num_vertices()));
    const Eigen::Vector3d row_norms = s_gt.rowwise().norm();

    Eigen::VectorXd w(p.size());
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c)
            w[r * 4 + c] = std::abs(p.T(r, c) - p_gt.T(r, c)) * row_norms[c];
        w[r * 4 + 3] = std::abs(p.T(r, 3) - p_gt.T(r, 3)) * sqrt_n;
    }
    const double f = model::scale_of(p_gt.T);
    w.tail(basis.num_alpha()) =
        f * (p.alpha - p_gt.alpha).cwiseAbs().cwiseProduct(basis.column_norms());
    return normalize_by_max(std::move(w));
}

LossOutput weighted_parameter_distance(const Eigen::VectorXd& weights, const ParamVec& p, const ParamVec& p_gt)
{
    if (weights.size() != p.size() || p.size() != p_gt.size())
        throw std::invalid_argument("weighted_parameter_distance: length mismatch");
    const Eigen::VectorXd diff = p.flat() - p_gt.flat();
    const Eigen::VectorXd w2 = weights.cwiseAbs2();
    LossOutput out;
    out.value = w2.dot(diff.cwiseAbs2());
    out.grad = 2.0 * w2.cwiseProduct(diff);
    return out;
}

LossOutput wpdc_naive(const BasisSet& basis, const ParamVec& p, const ParamVec& p_gt)
{
    return weighted_parameter_distance(wpdc_weights_naive(basis, p, p_gt), p, p_gt);
}

LossOutput fwpdc(const BasisSet& basis, const ParamVec& p, const ParamVec& p_gt)
{
    return weighted_parameter_distance(fwpdc_weights(basis, p, p_gt), p, p_gt);
}

LossOutput landmark_regression_loss(const Eigen::VectorXd& pred_lmk, const Eigen::VectorXd& gt_lmk)
{
    if (pred_lmk.size() != gt_lmk.size() || pred_lmk.size() == 0)
        throw std::invalid_argument("landmark_regression_loss: expected two vectors of equal nonzero length, got " +
                                    std::to_string(pred_lmk.size()) + " and " + std::to_string(gt_lmk.size()));
    const Eigen::VectorXd diff = pred_lmk - gt_lmk;
    const double n = static_cast<double>(diff.size());
    LossOutput out;
    out.value = diff.squaredNorm() / n;
    out.grad = (2.0 / n) * diff;
    return out;
}

LossOutput vanilla_joint(const BasisSet& basis, const ParamVec& p, const ParamVec& p_gt, const JointConfig& cfg)
{
    cfg.validate();
    const LossOutput f = fwpdc(basis, p, p_gt);
    const LossOutput v = vdc(basis, p, p_gt);
    const double ratio = magnitude_ratio(f.value, v.value, cfg.epsilon_ratio);
    LossOutput out;
    out.value = cfg.beta * f.value + (1.0 - cfg.beta) * ratio * v.value;
    out.grad = cfg.beta * f.grad + (1.0 - cfg.beta) * ratio * v.grad;
    return out;
}

} /* namespace loss */
} /* namespace facereg */
