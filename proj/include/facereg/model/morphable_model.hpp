/*
 * facereg - 3D morphable model parameter regression toolkit.
 *
 * File: include/facereg/model/morphable_model.hpp
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

#ifndef FACEREG_MODEL_MORPHABLE_MODEL_HPP
#define FACEREG_MODEL_MORPHABLE_MODEL_HPP

#include "Eigen/Core"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace facereg {
namespace model {

/// Number of sparse landmarks sampled from the dense mesh.
inline constexpr int num_landmarks = 68;

/// Raised when an operation is applied to a value in the wrong state
/// (normalizing twice, sampling landmarks before projection, ...).
class StateError : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

/**
 * A linear PCA shape model: mean shape plus identity and expression bases.
 *
 * Vertices are stored interleaved (x0, y0, z0, x1, ...), so a 3N-vector maps
 * onto a column-major 3 x N matrix without copying. The identity columns come
 * first in the combined basis A = [A_id, A_exp].
 *
 * Instances are immutable; the constructor validates every invariant and
 * caches the column norms of A.
 */
class BasisSet
{
public:
    BasisSet(Eigen::Matrix3Xd mean_shape, Eigen::MatrixXd basis_id, Eigen::MatrixXd basis_exp,
             std::vector<std::uint32_t> landmark_indices);

    int num_vertices() const { return static_cast<int>(mean_shape_.cols()); }
    int d_id() const { return d_id_; }
    int d_exp() const { return d_exp_; }
    int num_alpha() const { return d_id_ + d_exp_; }
    /// 12 + D_id + D_exp.
    int num_params() const { return 12 + num_alpha(); }

    const Eigen::Matrix3Xd& mean_shape() const { return mean_shape_; }
    /// Combined 3N x (D_id + D_exp) basis.
    const Eigen::MatrixXd& basis() const { return basis_; }
    Eigen::MatrixXd basis_id() const { return basis_.leftCols(d_id_); }
    Eigen::MatrixXd basis_exp() const { return basis_.rightCols(d_exp_); }
    const std::vector<std::uint32_t>& landmark_indices() const { return landmark_indices_; }
    /// ||A(:, i)|| for every column.
    const Eigen::VectorXd& column_norms() const { return column_norms_; }

    /// S = S_mean + A * alpha as a 3 x N matrix.
    Eigen::Matrix3Xd shape(const Eigen::VectorXd& alpha) const;

private:
    Eigen::Matrix3Xd mean_shape_;
    Eigen::MatrixXd basis_;
    int d_id_ = 0;
    int d_exp_ = 0;
    std::vector<std::uint32_t> landmark_indices_;
    Eigen::VectorXd column_norms_;
};

/**
 * Regression target p = [T, alpha]: a 3x4 similarity transform f * [R | t]
 * and the stacked identity/expression coefficients.
 *
 * The flat form is T in row-major order followed by alpha. That ordering is
 * shared by normalization, the losses and every file format.
 */
struct ParamVec
{
    Eigen::Matrix<double, 3, 4> T = Eigen::Matrix<double, 3, 4>::Zero();
    Eigen::VectorXd alpha;
    bool normalized = false;

    int size() const { return 12 + static_cast<int>(alpha.size()); }

    Eigen::VectorXd flat() const;
    static ParamVec from_flat(const Eigen::VectorXd& flat, bool normalized = false);

    /// Identity transform [I | 0] with zero coefficients.
    static ParamVec identity(int num_alpha);
};

/// Per-scalar Z-score statistics over the flat parameter layout.
struct NormStats
{
    Eigen::VectorXd mu;
    Eigen::VectorXd sigma;

    /// Throws std::invalid_argument if sizes differ or any sigma <= 0.
    void validate() const;
};

struct VertexSet
{
    Eigen::Matrix3Xd coords3d;
    std::optional<Eigen::Matrix2Xd> coords2d;
};

/// Row-major grayscale image with values in [0, 1].
struct GrayImage
{
    int width = 0;
    int height = 0;
    Eigen::VectorXd pixels;

    double& at(int x, int y) { return pixels[static_cast<Eigen::Index>(y) * width + x]; }
    double at(int x, int y) const { return pixels[static_cast<Eigen::Index>(y) * width + x]; }
};

/// V3d(p) = T * [S_mean + A * alpha; 1]. Requires a denormalized p.
VertexSet reconstruct_vertices(const BasisSet& basis, const ParamVec& p);

/// Orthographic projection: keeps the first two rows of coords3d.
VertexSet project_2d(VertexSet v);

ParamVec normalize_params(const ParamVec& p, const NormStats& stats);
ParamVec denormalize_params(const ParamVec& p, const NormStats& stats);

/// Keeps the leading d_id identity and d_exp expression columns.
BasisSet truncate_basis(const BasisSet& basis, int d_id, int d_exp);

/// Gathers the landmark columns of coords2d as (x1, y1, ..., x68, y68).
Eigen::VectorXd sample_landmarks(const VertexSet& v, const BasisSet& basis);

/// Convenience: landmarks of reconstruct -> project -> sample.
Eigen::VectorXd landmarks_of(const BasisSet& basis, const ParamVec& p);

inline constexpr int default_image_size = 32;

/**
 * Point-splat rendering: every projected vertex whose rounded pixel is inside
 * the image increments that pixel; the result is divided by the maximum count.
 */
GrayImage render_pointsplat(const VertexSet& v, int width = default_image_size,
                            int height = default_image_size);

/**
 * Seeded synthetic stand-in for a PCA face model. The mean shape lies on an
 * ellipsoid; basis columns are orthonormalized random directions scaled by
 * amplitude * sqrt(N) / (1 + j). All values are rounded to float precision so
 * the model survives a round-trip through the 32-bit container format.
 */
BasisSet generate_synthetic_basis(int num_vertices, int d_id, int d_exp, std::uint64_t seed,
                                  double amplitude = 0.1);

/// Similarity transform f * [R | t] as a 3x4 matrix.
Eigen::Matrix<double, 3, 4> similarity_transform(double scale, const Eigen::Matrix3d& rotation,
                                                 const Eigen::Vector3d& translation);

/// Rotation from yaw (about y), pitch (about x) and roll (about z), in radians.
Eigen::Matrix3d rotation_from_angles(double yaw, double pitch, double roll);

/// Mean Euclidean norm of the rows of T's 3x3 part; equals f for T = f [R | t].
double scale_of(const Eigen::Matrix<double, 3, 4>& T);

} /* namespace model */
} /* namespace facereg */

#endif /* FACEREG_MODEL_MORPHABLE_MODEL_HPP */
