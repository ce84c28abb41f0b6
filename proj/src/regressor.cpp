/*
 * facereg - 3D morphable model parameter regression toolkit.
 *
 * File: src/regressor.cpp
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
#include "facereg/nn/regressor.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace facereg {
namespace nn {

void RegressorWeights::validate() const
{
    const auto h = W1.rows();
    if (b1.size() != h || W_param.cols() != h || W_lmk.cols() != h || b_param.size() != W_param.rows() ||
        b_lmk.size() != W_lmk.rows())
        throw std::invalid_argument("RegressorWeights: inconsistent tensor shapes");
    if (!W1.allFinite() || !b1.allFinite() || !W_param.allFinite() || !b_param.allFinite() || !W_lmk.allFinite() ||
        !b_lmk.allFinite())
        throw std::invalid_argument("RegressorWeights: non-finite entry");
}

Eigen::Index RegressorWeights::size() const
{
    return W1.size() + b1.size() + W_param.size() + b_param.size() + W_lmk.size() + b_lmk.size();
}

RegressorWeights zeros_like(const RegressorWeights& w)
{
    RegressorWeights z;
    z.W1 = Eigen::MatrixXd::Zero(w.W1.rows(), w.W1.cols());
    z.b1 = Eigen::VectorXd::Zero(w.b1.size());
    z.W_param = Eigen::MatrixXd::Zero(w.W_param.rows(), w.W_param.cols());
    z.b_param = Eigen::VectorXd::Zero(w.b_param.size());
    z.W_lmk = Eigen::MatrixXd::Zero(w.W_lmk.rows(), w.W_lmk.cols());
    z.b_lmk = Eigen::VectorXd::Zero(w.b_lmk.size());
    z.activation = w.activation;
    return z;
}

void for_each_tensor(RegressorWeights& a, const RegressorWeights& b,
                     const std::function<void(Eigen::Ref<Eigen::MatrixXd>, const Eigen::Ref<const Eigen::MatrixXd>&)>& fn)
{
    fn(a.W1, b.W1);
    fn(a.b1, b.b1);
    fn(a.W_param, b.W_param);
    fn(a.b_param, b.b_param);
    fn(a.W_lmk, b.W_lmk);
    fn(a.b_lmk, b.b_lmk);
}

RegressorWeights init_regressor(int input_dim, int hidden_dim, int param_dim, int lmk_dim, std::uint64_t seed)
{
    if (input_dim <= 0 || hidden_dim <= 0 || param_dim <= 0 || lmk_dim < 0)
        throw std::invalid_argument("init_regressor: dimensions must be positive");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto fill = [&](Eigen::MatrixXd& m, double stddev) {
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            for (Eigen::Index r = 0; r < m.rows(); ++r)
                m(r, c) = stddev * gauss(rng);
    };
    RegressorWeights w;
    w.W1.resize(hidden_dim, input_dim);
    fill(w.W1, std::sqrt(2.0 / input_dim));
    w.b1 = Eigen::VectorXd::Zero(hidden_dim);
    w.W_param.resize(param_dim, hidden_dim);
    fill(w.W_param, 0.1 / std::sqrt(static_cast<double>(hidden_dim)));
    w.b_param = Eigen::VectorXd::Zero(param_dim);
    w.W_lmk.resize(lmk_dim, hidden_dim);
    fill(w.W_lmk, 0.1 / std::sqrt(static_cast<double>(hidden_dim)));
    w.b_lmk = Eigen::VectorXd::Zero(lmk_dim);
    return w;
}

ForwardResult forward(const RegressorWeights& w, const Eigen::MatrixXd& images)
{
    if (images.rows() != w.input_dim())
        throw std::invalid_argument("forward: input has " + std::to_string(images.rows()) + " entries, network expects " +
                                    std::to_string(w.input_dim()));
    ForwardResult out;
    out.cache.input = images;
    out.cache.pre_activation = (w.W1 * images).colwise() + w.b1;
    out.cache.hidden = out.cache.pre_activation.cwiseMax(0.0);
    out.p_norm = (w.W_param * out.cache.hidden).colwise() + w.b_param;
    out.lmk = (w.W_lmk * out.cache.hidden).colwise() + w.b_lmk;
    out.cache.owner = &w;
    out.cache.generation = w.generation;
    return out;
}

ForwardResult forward(const RegressorWeights& w, const Eigen::VectorXd& image)
{
    return forward(w, Eigen::MatrixXd(image));
}

Eigen::MatrixXd predict_params(const RegressorWeights& w, const Eigen::MatrixXd& images)
{
    if (images.rows() != w.input_dim())
        throw std::invalid_argument("predict_params: input has " + std::to_string(images.rows()) +
                                    " entries, network expects " + std::to_string(w.input_dim()));
    const Eigen::MatrixXd hidden = ((w.W1 * images).colwise() + w.b1).cwiseMax(0.0);
    return (w.W_param * hidden).colwise() + w.b_param;
}

RegressorWeights backward(const RegressorWeights& w, const ForwardCache& cache, const Eigen::MatrixXd& grad_p_norm,
                          const Eigen::MatrixXd& grad_lmk)
{
    if (cache.owner != &w || cache.generation != w.generation)
        throw std::logic_error("backward: forward cache was produced by different or since-updated weights");
    const auto batch = cache.input.cols();
    if (grad_p_norm.rows() != w.param_dim() || grad_p_norm.cols() != batch || grad_lmk.rows() != w.lmk_dim() ||
        grad_lmk.cols() != batch)
        throw std::invalid_argument("backward: output gradient shapes do not match the forward pass");

    RegressorWeights g;
    g.activation = w.activation;
    g.W_param = grad_p_norm * cache.hidden.transpose();
    g.b_param = grad_p_norm.rowwise().sum();
    g.W_lmk = grad_lmk * cache.hidden.transpose();
    g.b_lmk = grad_lmk.rowwise().sum();

    Eigen::MatrixXd grad_hidden = w.W_param.transpose() * grad_p_norm;
    if (w.lmk_dim() > 0)
        grad_hidden += w.W_lmk.transpose() * grad_lmk;
    const Eigen::MatrixXd grad_pre =
        grad_hidden.cwiseProduct((cache.pre_activation.array() > 0.0).cast<double>().matrix());
    g.W1 = grad_pre * cache.input.transpose();
    g.b1 = grad_pre.rowwise().sum();
    return g;
}

void SgdConfig::validate() const
{
    if (!(learning_rate >= 0.0) || !(momentum >= 0.0 && momentum < 1.0) || !(weight_decay >= 0.0) || batch_size <= 0)
        throw std::invalid_argument("SgdConfig: learning_rate >= 0, momentum in [0, 1), weight_decay >= 0 and "
                                    "batch_size > 0 required");
}

RegressorWeights sgd_step(const RegressorWeights& w, const RegressorWeights& grads, const SgdConfig& cfg,
                          RegressorWeights& velocity)
{
    RegressorWeights next = w;
    RegressorWeights g = grads;
    // g <- g + wd * w
    for_each_tensor(g, w, [&](Eigen::Ref<Eigen::MatrixXd> gi, const Eigen::Ref<const Eigen::MatrixXd>& wi) {
        gi += cfg.weight_decay * wi;
    });
    for_each_tensor(velocity, g, [&](Eigen::Ref<Eigen::MatrixXd> vi, const Eigen::Ref<const Eigen::MatrixXd>& gi) {
        vi = cfg.momentum * vi + gi;
    });
    for_each_tensor(next, velocity, [&](Eigen::Ref<Eigen::MatrixXd> wi, const Eigen::Ref<const Eigen::MatrixXd>& vi) {
        wi -= cfg.learning_rate * vi;
    });
    next.generation = w.generation + 1;
    return next;
}

} /* namespace nn */
} /* namespace facereg */
