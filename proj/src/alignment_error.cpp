/*
 * facereg - 3D morphable model parameter regression toolkit.
 *
 * File: src/alignment_error.cpp
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
#include "facereg/metrics/alignment_error.hpp"

#include <cmath>
#include <numeric>

namespace facereg {
namespace metrics {

namespace {

void check_landmark_pair(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const char* who)
{
    if (a.size() != b.size() || a.size() == 0 || a.size() % 2 != 0)
        throw std::invalid_argument(std::string(who) + ": expected two flattened (x, y) vectors of equal even length");
}

} // namespace

std::string to_string(NormalizerKind kind)
{
    return kind == NormalizerKind::bbox_sqrt_area ? "bbox" : "interocular";
}

NormalizerKind normalizer_from_string(const std::string& name)
{
    if (name == "bbox")
        return NormalizerKind::bbox_sqrt_area;
    if (name == "interocular")
        return NormalizerKind::outer_interocular;
    throw std::invalid_argument("unknown normalizer '" + name + "' (expected bbox or interocular)");
}

double bbox_size(const Eigen::VectorXd& lmk)
{
    if (lmk.size() == 0 || lmk.size() % 2 != 0)
        throw std::invalid_argument("bbox_size: expected a flattened (x, y) vector");
    const Eigen::Map<const Eigen::Matrix2Xd> pts(lmk.data(), 2, lmk.size() / 2);
    const Eigen::Vector2d extent = pts.rowwise().maxCoeff() - pts.rowwise().minCoeff();
    const double area = extent.x() * extent.y();
    if (!(area > 0.0))
        throw DegenerateInputError("bbox_size: ground-truth landmarks span a zero-area box");
    return std::sqrt(area);
}

double interocular_distance(const Eigen::VectorXd& lmk, int left, int right)
{
    const Eigen::Index k = lmk.size() / 2;
    if (left < 0 || right < 0 || left >= k || right >= k)
        throw std::invalid_argument("interocular_distance: eye-corner index out of range");
    const double d = std::hypot(lmk[2 * left] - lmk[2 * right], lmk[2 * left + 1] - lmk[2 * right + 1]);
    if (!(d > 0.0))
        throw DegenerateInputError("interocular_distance: outer eye corners coincide");
    return d;
}

double normalizer_of(const Eigen::VectorXd& gt_lmk, NormalizerKind kind)
{
    return kind == NormalizerKind::bbox_sqrt_area ? bbox_size(gt_lmk) : interocular_distance(gt_lmk);
}

double nme_sparse(const Eigen::VectorXd& pred_lmk, const Eigen::VectorXd& gt_lmk, double normalizer)
{
    check_landmark_pair(pred_lmk, gt_lmk, "nme_sparse");
    if (!(normalizer > 0.0))
        throw DegenerateInputError("nme_sparse: normalizer must be positive");
    const Eigen::Index k = pred_lmk.size() / 2;
    const Eigen::Map<const Eigen::Matrix2Xd> p(pred_lmk.data(), 2, k);
    const Eigen::Map<const Eigen::Matrix2Xd> g(gt_lmk.data(), 2, k);
    return (p - g).colwise().norm().mean() / normalizer * 100.0;
}

double nme_sparse(const Eigen::VectorXd& pred_lmk, const Eigen::VectorXd& gt_lmk, NormalizerKind kind)
{
    check_landmark_pair(pred_lmk, gt_lmk, "nme_sparse");
    return nme_sparse(pred_lmk, gt_lmk, normalizer_of(gt_lmk, kind));
}

double nme_dense(const model::VertexSet& pred, const model::VertexSet& gt, double normalizer, bool use_2d)
{
    if (pred.coords3d.cols() != gt.coords3d.cols())
        throw std::invalid_argument("nme_dense: vertex counts differ");
    if (pred.coords3d.cols() == 0)
        throw std::invalid_argument("nme_dense: empty vertex sets");
    if (!(normalizer > 0.0))
        throw DegenerateInputError("nme_dense: normalizer must be positive");
    const Eigen::Matrix3Xd diff = pred.coords3d - gt.coords3d;
    const double mean = use_2d ? diff.topRows<2>().colwise().norm().mean() : diff.colwise().norm().mean();
    return mean / normalizer * 100.0;
}

double stability(const std::vector<Eigen::VectorXd>& pred_seq, const std::vector<Eigen::VectorXd>& gt_seq)
{
    if (pred_seq.size() != gt_seq.size())
        throw std::invalid_argument("stability: prediction and ground-truth sequences differ in length");
    if (pred_seq.size() < 2)
        throw std::invalid_argument("stability: need at least two frames");
    double total = 0.0;
    for (std::size_t t = 1; t < pred_seq.size(); ++t) {
        check_landmark_pair(pred_seq[t], gt_seq[t], "stability");
        check_landmark_pair(pred_seq[t - 1], gt_seq[t - 1], "stability");
        const Eigen::VectorXd dq = pred_seq[t] - pred_seq[t - 1];
        const Eigen::VectorXd dp = gt_seq[t] - gt_seq[t - 1];
        const Eigen::VectorXd diff = dp - dq;
        const Eigen::Map<const Eigen::Matrix2Xd> d(diff.data(), 2, diff.size() / 2);
        total += d.colwise().norm().mean() / bbox_size(gt_seq[t]) * 100.0;
    }
    return total / static_cast<double>(pred_seq.size() - 1);
}

EvalReport make_report(std::vector<double> per_sample_nme, NormalizerKind kind, std::optional<double> stability)
{
    EvalReport r;
    r.per_sample_nme = std::move(per_sample_nme);
    r.normalizer_kind = kind;
    r.stability = stability;
    if (!r.per_sample_nme.empty())
        r.nme_mean = std::accumulate(r.per_sample_nme.begin(), r.per_sample_nme.end(), 0.0) /
                     static_cast<double>(r.per_sample_nme.size());
    return r;
}

} /* namespace metrics */
} /* namespace facereg */
