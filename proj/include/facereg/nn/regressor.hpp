/*
 * facereg - 3D morphable model parameter regression toolkit.
 *
 * File: include/facereg/nn/regressor.hpp
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

#ifndef FACEREG_NN_REGRESSOR_HPP
#define FACEREG_NN_REGRESSOR_HPP

#include "Eigen/Core"

#include <cstdint>
#include <functional>

namespace facereg {
namespace nn {

enum class Activation : std::uint8_t { relu = 1 };

/**
 * One hidden layer shared by two affine heads:
 *
 *   h       = relu(W1 x + b1)
 *   p_norm  = W_param h + b_param     (Z-scored 3DMM parameters)
 *   lmk     = W_lmk h + b_lmk         (flattened 2D landmarks, training only)
 *
 * The landmark head may be empty (zero rows), which is how inference runs.
 * The same struct holds gradients and momentum buffers.
 */
struct RegressorWeights
{
    Eigen::MatrixXd W1;
    Eigen::VectorXd b1;
    Eigen::MatrixXd W_param;
    Eigen::VectorXd b_param;
    Eigen::MatrixXd W_lmk;
    Eigen::VectorXd b_lmk;
    Activation activation = Activation::relu;
    /// Bumped by every update; forward caches remember it.
    std::uint64_t generation = 0;

    int input_dim() const { return static_cast<int>(W1.cols()); }
    int hidden_dim() const { return static_cast<int>(W1.rows()); }
    int param_dim() const { return static_cast<int>(W_param.rows()); }
    int lmk_dim() const { return static_cast<int>(W_lmk.rows()); }

    /// Throws std::invalid_argument on inconsistent shapes or non-finite entries.
    void validate() const;

    /// Total number of scalars.
    Eigen::Index size() const;
};

/// Same shapes, all zeros.
RegressorWeights zeros_like(const RegressorWeights& w);

/// Visits the six tensors of two equally shaped weight sets pairwise.
void for_each_tensor(RegressorWeights& a, const RegressorWeights& b,
                     const std::function<void(Eigen::Ref<Eigen::MatrixXd>, const Eigen::Ref<const Eigen::MatrixXd>&)>& fn);

/// He-initialized hidden layer; heads drawn with a small standard deviation.
RegressorWeights init_regressor(int input_dim, int hidden_dim, int param_dim, int lmk_dim, std::uint64_t seed);

/// Activations kept for the backward pass. Columns are samples.
struct ForwardCache
{
    Eigen::MatrixXd input;
    Eigen::MatrixXd pre_activation;
    Eigen::MatrixXd hidden;
    const RegressorWeights* owner = nullptr;
    std::uint64_t generation = 0;
};

struct ForwardResult
{
    Eigen::MatrixXd p_norm; ///< param_dim x B
    Eigen::MatrixXd lmk;    ///< lmk_dim x B
    ForwardCache cache;
};

/// Batched forward pass; inputs are the columns of `images`.
ForwardResult forward(const RegressorWeights& w, const Eigen::MatrixXd& images);

/// Single-sample forward pass.
ForwardResult forward(const RegressorWeights& w, const Eigen::VectorXd& image);

/// Parameter head only, as used at inference time.
Eigen::MatrixXd predict_params(const RegressorWeights& w, const Eigen::MatrixXd& images);

/**
 * Exact gradients of a scalar loss whose derivatives with respect to the two
 * head outputs are supplied (columns are samples, summed over the batch).
 * Throws std::logic_error when the cache does not come from a forward pass
 * of these very weights.
 */
RegressorWeights backward(const RegressorWeights& w, const ForwardCache& cache, const Eigen::MatrixXd& grad_p_norm,
                          const Eigen::MatrixXd& grad_lmk);

struct SgdConfig
{
    double learning_rate = 0.01;
    double momentum = 0.9;
    double weight_decay = 0.0005;
    int batch_size = 128;

    void validate() const;
};

/**
 * Classical momentum with L2 weight decay folded into the gradient before the
 * buffer update:  v <- m v + (g + wd w);  w <- w - lr v.
 * `velocity` is updated in place and must have the shapes of `w`.
 */
RegressorWeights sgd_step(const RegressorWeights& w, const RegressorWeights& grads, const SgdConfig& cfg,
                          RegressorWeights& velocity);

} /* namespace nn */
} /* namespace facereg */

#endif /* FACEREG_NN_REGRESSOR_HPP */
