/*
 * facereg - 3D morphable model parameter regression toolkit.
 *
 * File: include/facereg/metrics/alignment_error.hpp
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

#ifndef FACEREG_METRICS_ALIGNMENT_ERROR_HPP
#define FACEREG_METRICS_ALIGNMENT_ERROR_HPP

#include "facereg/model/morphable_model.hpp"

#include "Eigen/Core"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace facereg {
namespace metrics {

/// Input whose normalizer would be zero (collapsed box, coincident eye corners).
class DegenerateInputError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

enum class NormalizerKind { bbox_sqrt_area, outer_interocular };

std::string to_string(NormalizerKind kind);
NormalizerKind normalizer_from_string(const std::string& name);

/// Outer eye corners in the 68-point layout (0-based).
inline constexpr int left_outer_eye = 36;
inline constexpr int right_outer_eye = 45;

/// sqrt(width * height) of the tight box around the flattened (x, y) points.
double bbox_size(const Eigen::VectorXd& lmk);

/// Distance between two landmarks of a flattened (x, y) vector.
double interocular_distance(const Eigen::VectorXd& lmk, int left = left_outer_eye, int right = right_outer_eye);

/// Normalizer for `kind`, measured on the ground truth.
double normalizer_of(const Eigen::VectorXd& gt_lmk, NormalizerKind kind);

/**
 * Mean landmark distance over K landmarks (vectors of length 2K) divided by
 * `normalizer`, in percent.
 */
double nme_sparse(const Eigen::VectorXd& pred_lmk, const Eigen::VectorXd& gt_lmk, double normalizer);

/// Same with the normalizer taken from the ground truth.
double nme_sparse(const Eigen::VectorXd& pred_lmk, const Eigen::VectorXd& gt_lmk, NormalizerKind kind);

/// Mean per-vertex distance (3D, or 2D when `use_2d`) divided by `normalizer`, in percent.
double nme_dense(const model::VertexSet& pred, const model::VertexSet& gt, double normalizer, bool use_2d = false);

/**
 * Adjacent-frame stability: for each frame pair (t-1, t) the landmark-mean
 * norm of (p_t - p_{t-1}) - (q_t - q_{t-1}), divided by the bounding-box size
 * of ground-truth frame t, in percent; averaged over pairs.
 */
double stability(const std::vector<Eigen::VectorXd>& pred_seq, const std::vector<Eigen::VectorXd>& gt_seq);

struct EvalReport
{
    double nme_mean = 0.0;
    std::vector<double> per_sample_nme;
    NormalizerKind normalizer_kind = NormalizerKind::bbox_sqrt_area;
    std::optional<double> stability;
};

/// Builds a report from per-sample NME values (mean computed here).
EvalReport make_report(std::vector<double> per_sample_nme, NormalizerKind kind,
                       std::optional<double> stability = std::nullopt);

} /* namespace metrics */
} /* namespace facereg */

#endif /* FACEREG_METRICS_ALIGNMENT_ERROR_HPP */
