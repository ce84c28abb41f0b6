/*
 * facereg - 3D morphable model parameter regression toolkit.
 *
 * File: src/morphable_model.cpp
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
#include "facereg/model/morphable_model.hpp"

#include "Eigen/Geometry"
#include "Eigen/QR"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace facereg {
namespace model {

namespace {

bool all_finite(const Eigen::Ref<const Eigen::MatrixXd>& m)
{
    return m.allFinite();
}

double round_to_float(double x)
{
    return static_cast<double>(static_cast<float>(x));
}

} // namespace

BasisSet::BasisSet(Eigen::Matrix3Xd mean_shape, Eigen::MatrixXd basis_id, Eigen::MatrixXd basis_exp,
                   std::vector<std::uint32_t> landmark_indices)
    : mean_shape_(std::move(mean_shape)), landmark_indices_(std::move(landmark_indices))
{
    const Eigen::Index rows = 3 * mean_shape_.cols();
    if (mean_shape_.cols() == 0)
        throw std::invalid_argument("BasisSet: mean shape has no vertices");
    if (basis_id.rows() != rows && basis_id.cols() != 0)
        throw std::invalid_argument("BasisSet: identity basis has " + std::to_string(basis_id.rows()) +
                                    " rows, expected " + std::to_string(rows));
    if (basis_exp.rows() != rows && basis_exp.cols() != 0)
        throw std::invalid_argument("BasisSet: expression basis has " + std::to_string(basis_exp.rows()) +
                                    " rows, expected " + std::to_string(rows));
    if (landmark_indices_.size() != static_cast<std::size_t>(num_landmarks))
        throw std::invalid_argument("BasisSet: expected 68 landmark indices, got " +
                                    std::to_string(landmark_indices_.size()));
    for (auto idx : landmark_indices_) {
        if (idx >= static_cast<std::uint32_t>(mean_shape_.cols()))
            throw std::invalid_argument("BasisSet: landmark index " + std::to_string(idx) + " out of range");
    }
    d_id_ = static_cast<int>(basis_id.cols());
    d_exp_ = static_cast<int>(basis_exp.cols());
    basis_.resize(rows, d_id_ + d_exp_);
    if (d_id_ > 0)
        basis_.leftCols(d_id_) = basis_id;
    if (d_exp_ > 0)
        basis_.rightCols(d_exp_) = basis_exp;

    if (!all_finite(mean_shape_) || !all_finite(basis_))
        throw std::invalid_argument("BasisSet: non-finite value in mean shape or basis");
    column_norms_ = basis_.colwise().norm().transpose();
    for (Eigen::Index j = 0; j < column_norms_.size(); ++j) {
        if (column_norms_[j] == 0.0)
            throw std::invalid_argument("BasisSet: basis column " + std::to_string(j) + " is zero");
    }
}

Eigen::Matrix3Xd BasisSet::shape(const Eigen::VectorXd& alpha) const
{
    if (alpha.size() != num_alpha())
        throw std::invalid_argument("shape: alpha has " + std::to_string(alpha.size()) +
                                    " entries, basis has " + std::to_string(num_alpha()));
    Eigen::Matrix3Xd s = mean_shape_;
    if (num_alpha() > 0) {
        const Eigen::VectorXd offset = basis_ * alpha;
        s += Eigen::Map<const Eigen::Matrix3Xd>(offset.data(), 3, mean_shape_.cols());
    }
    return s;
}

Eigen::VectorXd ParamVec::flat() const
{
    Eigen::VectorXd v(size());
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 4; ++c)
            v[r * 4 + c] = T(r, c);
    v.tail(alpha.size()) = alpha;
    return v;
}

ParamVec ParamVec::from_flat(const Eigen::VectorXd& flat, bool normalized)
{
    if (flat.size() < 12)
        throw std::invalid_argument("ParamVec: flat vector shorter than 12");
    ParamVec p;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 4; ++c)
            p.T(r, c) = flat[r * 4 + c];
    p.alpha = flat.tail(flat.size() - 12);
    p.normalized = normalized;
    return p;
}

ParamVec ParamVec::identity(int num_alpha)
{
    ParamVec p;
    p.T.leftCols<3>().setIdentity();
    p.alpha = Eigen::VectorXd::Zero(num_alpha);
    return p;
}

void NormStats::validate() const
{
    if (mu.size() != sigma.size())
        throw std::invalid_argument("NormStats: mu and sigma differ in length");
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
        if (!(sigma[i] > 0.0) || !std::isfinite(sigma[i]))
            throw std::invalid_argument("NormStats: sigma[" + std::to_string(i) + "] is not positive");
    }
    if (!mu.allFinite())
        throw std::invalid_argument("NormStats: non-finite mu");
}

VertexSet reconstruct_vertices(const BasisSet& basis, const ParamVec& p)
{
    if (p.normalized)
        throw StateError("reconstruct_vertices: parameters are still normalized");
    if (p.alpha.size() != basis.num_alpha())
        throw std::invalid_argument("reconstruct_vertices: alpha has " + std::to_string(p.alpha.size()) +
                                    " entries, basis expects " + std::to_string(basis.num_alpha()));
    const Eigen::Matrix3Xd s = basis.shape(p.alpha);
    VertexSet v;
    v.coords3d = (p.T.leftCols<3>() * s).colwise() + p.T.col(3);
    return v;
}

VertexSet project_2d(VertexSet v)
{
    v.coords2d = v.coords3d.topRows<2>();
    return v;
}

ParamVec normalize_params(const ParamVec& p, const NormStats& stats)
{
    stats.validate();
    if (p.normalized)
        throw StateError("normalize_params: parameters are already normalized");
    if (stats.mu.size() != p.size())
        throw std::invalid_argument("normalize_params: stats length does not match parameter count");
    const Eigen::VectorXd z = (p.flat() - stats.mu).cwiseQuotient(stats.sigma);
    return ParamVec::from_flat(z, true);
}

ParamVec denormalize_params(const ParamVec& p, const NormStats& stats)
{
    stats.validate();
    if (!p.normalized)
        throw StateError("denormalize_params: parameters are not normalized");
    if (stats.mu.size() != p.size())
        throw std::invalid_argument("denormalize_params: stats length does not match parameter count");
    const Eigen::VectorXd x = p.flat().cwiseProduct(stats.sigma) + stats.mu;
    return ParamVec::from_flat(x, false);
}

BasisSet truncate_basis(const BasisSet& basis, int d_id, int d_exp)
{
    if (d_id < 0 || d_exp < 0 || d_id > basis.d_id() || d_exp > basis.d_exp())
        throw std::invalid_argument("truncate_basis: requested " + std::to_string(d_id) + "/" +
                                    std::to_string(d_exp) + " but basis has " + std::to_string(basis.d_id()) +
                                    "/" + std::to_string(basis.d_exp()));
    const Eigen::Index rows = basis.basis().rows();
    Eigen::MatrixXd id = basis.basis().leftCols(basis.d_id()).leftCols(d_id);
    Eigen::MatrixXd ex = basis.basis().rightCols(basis.d_exp()).leftCols(d_exp);
    if (d_id == 0)
        id.resize(rows, 0);
    if (d_exp == 0)
        ex.resize(rows, 0);
    return BasisSet(basis.mean_shape(), std::move(id), std::move(ex), basis.landmark_indices());
}

Eigen::VectorXd sample_landmarks(const VertexSet& v, const BasisSet& basis)
{
    if (!v.coords2d)
        throw StateError("sample_landmarks: vertices have not been projected");
    const auto& idx = basis.landmark_indices();
    Eigen::VectorXd out(2 * idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        out[2 * i] = (*v.coords2d)(0, idx[i]);
        out[2 * i + 1] = (*v.coords2d)(1, idx[i]);
    }
    return out;
}

Eigen::VectorXd landmarks_of(const BasisSet& basis, const ParamVec& p)
{
    return sample_landmarks(project_2d(reconstruct_vertices(basis, p)), basis);
}

GrayImage render_pointsplat(const VertexSet& v, int width, int height)
{
    if (width <= 0 || height <= 0)
        throw std::invalid_argument("render_pointsplat: image size must be positive");
    if (!v.coords2d)
        throw StateError("render_pointsplat: vertices have not been projected");
    GrayImage img;
    img.width = width;
    img.height = height;
    img.pixels = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(width) * height);
    const auto& uv = *v.coords2d;
    for (Eigen::Index i = 0; i < uv.cols(); ++i) {
        const double px = std::floor(uv(0, i) + 0.5);
        const double py = std::floor(uv(1, i) + 0.5);
        if (px >= 0 && px < width && py >= 0 && py < height)
            img.at(static_cast<int>(px), static_cast<int>(py)) += 1.0;
    }
    const double peak = img.pixels.size() > 0 ? img.pixels.maxCoeff() : 0.0;
    if (peak > 0.0)
        img.pixels /= peak;
    return img;
}

BasisSet generate_synthetic_basis(int num_vertices, int d_id, int d_exp, std::uint64_t seed, double amplitude)
{
    if (num_vertices <= 0 || d_id < 0 || d_exp < 0)
        throw std::invalid_argument("generate_synthetic_basis: invalid dimensions");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    // Mean shape: uniform directions pushed onto an ellipsoid.
    const Eigen::Vector3d radii(1.0, 1.25, 0.8);
    Eigen::Matrix3Xd mean(3, num_vertices);
    for (int i = 0; i < num_vertices; ++i) {
        Eigen::Vector3d d(gauss(rng), gauss(rng), gauss(rng));
        while (d.norm() < 1e-9)
            d = Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng));
        d.normalize();
        mean.col(i) = d.cwiseProduct(radii).unaryExpr(&round_to_float);
    }

    const Eigen::Index rows = 3 * static_cast<Eigen::Index>(num_vertices);
    const int total = d_id + d_exp;
    Eigen::MatrixXd raw(rows, total);
    for (Eigen::Index c = 0; c < total; ++c)
        for (Eigen::Index r = 0; r < rows; ++r)
            raw(r, c) = gauss(rng);

    // Orthonormalize in blocks of at most 3N columns (a 3N-dim space cannot
    // hold more orthonormal directions).
    Eigen::MatrixXd dirs(rows, total);
    for (Eigen::Index start = 0; start < total; start += rows) {
        const Eigen::Index width = std::min<Eigen::Index>(rows, total - start);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(raw.middleCols(start, width));
        Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(rows, width);
        dirs.middleCols(start, width) = q;
    }

    const double base = amplitude * std::sqrt(static_cast<double>(num_vertices));
    Eigen::MatrixXd id(rows, d_id);
    Eigen::MatrixXd ex(rows, d_exp);
    for (int j = 0; j < d_id; ++j)
        id.col(j) = (dirs.col(j) * (base / (1.0 + j))).unaryExpr(&round_to_float);
    for (int j = 0; j < d_exp; ++j)
        ex.col(j) = (dirs.col(d_id + j) * (0.5 * base / (1.0 + j))).unaryExpr(&round_to_float);

    std::vector<std::uint32_t> lmk(num_landmarks);
    if (num_vertices >= num_landmarks) {
        std::vector<std::uint32_t> all(static_cast<std::size_t>(num_vertices));
        std::iota(all.begin(), all.end(), 0u);
        std::shuffle(all.begin(), all.end(), rng);
        std::copy_n(all.begin(), num_landmarks, lmk.begin());
    } else {
        for (int i = 0; i < num_landmarks; ++i)
            lmk[i] = static_cast<std::uint32_t>(i % num_vertices);
    }
    return BasisSet(std::move(mean), std::move(id), std::move(ex), std::move(lmk));
}

Eigen::Matrix<double, 3, 4> similarity_transform(double scale, const Eigen::Matrix3d& rotation,
                                                 const Eigen::Vector3d& translation)
{
    Eigen::Matrix<double, 3, 4> T;
    T.leftCols<3>() = scale * rotation;
    T.col(3) = scale * translation;
    return T;
}

Eigen::Matrix3d rotation_from_angles(double yaw, double pitch, double roll)
{
    const Eigen::Matrix3d ry = Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitY()).toRotationMatrix();
    const Eigen::Matrix3d rx = Eigen::AngleAxisd(pitch, Eigen::Vector3d::UnitX()).toRotationMatrix();
    const Eigen::Matrix3d rz = Eigen::AngleAxisd(roll, Eigen::Vector3d::UnitZ()).toRotationMatrix();
    return rz * rx * ry;
}

double scale_of(const Eigen::Matrix<double, 3, 4>& T)
{
    return (T.row(0).head<3>().norm() + T.row(1).head<3>().norm() + T.row(2).head<3>().norm()) / 3.0;
}

} /* namespace model */
} /* namespace facereg */
