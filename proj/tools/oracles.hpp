/*
 * facereg - 3D morphable model parameter regression toolkit.
 *
 * File: tools/oracles.hpp
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

#ifndef FACEREG_TOOLS_ORACLES_HPP
#define FACEREG_TOOLS_ORACLES_HPP

/*
 * Reference implementations written with plain loops. They share no code
 * with the library beyond the data containers, so agreement between the two
 * is evidence rather than tautology.
 */

#include "facereg/model/morphable_model.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace facereg {
namespace oracle {

/// Vertices of p as a flat 3N vector (x0 y0 z0 x1 ...), per-vertex loops.
inline std::vector<double> vertices(const model::BasisSet& basis, const model::ParamVec& p)
{
    const int n = basis.num_vertices();
    const int d = basis.num_alpha();
    const Eigen::MatrixXd& a = basis.basis();
    const Eigen::Matrix3Xd& mean = basis.mean_shape();
    std::vector<double> out(static_cast<std::size_t>(3 * n));
    for (int v = 0; v < n; ++v) {
        double s[3];
        for (int c = 0; c < 3; ++c) {
            double acc = mean(c, v);
            for (int j = 0; j < d; ++j)
                acc += a(3 * v + c, j) * p.alpha[j];
            s[c] = acc;
        }
        for (int r = 0; r < 3; ++r)
            out[static_cast<std::size_t>(3 * v + r)] =
                p.T(r, 0) * s[0] + p.T(r, 1) * s[1] + p.T(r, 2) * s[2] + p.T(r, 3);
    }
    return out;
}

inline double squared_distance(const std::vector<double>& a, const std::vector<double>& b)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        acc += (a[i] - b[i]) * (a[i] - b[i]);
    return acc;
}

inline double vdc(const model::BasisSet& basis, const model::ParamVec& p, const model::ParamVec& pg)
{
    return squared_distance(vertices(basis, p), vertices(basis, pg));
}

/// Brute-force weighted parameter distance: degrade the ground truth one element at a time.
inline double wpdc(const model::BasisSet& basis, const model::ParamVec& p, const model::ParamVec& pg)
{
    const Eigen::VectorXd fp = p.flat();
    const Eigen::VectorXd fg = pg.flat();
    const std::vector<double> vg = vertices(basis, pg);
    std::vector<double> w(static_cast<std::size_t>(fp.size()));
    double z = 0.0;
    for (Eigen::Index i = 0; i < fp.size(); ++i) {
        Eigen::VectorXd de = fg;
        de[i] = fp[i];
        w[static_cast<std::size_t>(i)] = std::sqrt(squared_distance(vertices(basis, model::ParamVec::from_flat(de)), vg));
        z = std::max(z, w[static_cast<std::size_t>(i)]);
    }
    if (z == 0.0)
        return 0.0;
    double value = 0.0;
    for (Eigen::Index i = 0; i < fp.size(); ++i) {
        const double t = w[static_cast<std::size_t>(i)] / z * (fp[i] - fg[i]);
        value += t * t;
    }
    return value;
}

/// Landmarks (x0 y0 x1 y1 ...) of p by projecting only the landmark vertices.
inline std::vector<double> landmarks(const model::BasisSet& basis, const model::ParamVec& p)
{
    const std::vector<double> v = vertices(basis, p);
    std::vector<double> out;
    for (std::uint32_t idx : basis.landmark_indices()) {
        out.push_back(v[3 * idx]);
        out.push_back(v[3 * idx + 1]);
    }
    return out;
}

/// Central differences of f at x with step h.
inline Eigen::VectorXd central_gradient(const std::function<double(const Eigen::VectorXd&)>& f, Eigen::VectorXd x,
                                        double h = 1e-5)
{
    Eigen::VectorXd g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double x0 = x[i];
        x[i] = x0 + h;
        const double up = f(x);
        x[i] = x0 - h;
        const double down = f(x);
        x[i] = x0;
        g[i] = (up - down) / (2.0 * h);
    }
    return g;
}

/// ||a - b|| / max(||a||, ||b||, floor).
inline double relative_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double floor = 1e-12)
{
    return (a - b).norm() / std::max({a.norm(), b.norm(), floor});
}

/// Scaled rotation with uniformly drawn angles plus a translation.
inline Eigen::Matrix<double, 3, 4> random_similarity(std::mt19937_64& rng, double scale_lo, double scale_hi)
{
    std::uniform_real_distribution<double> ang(-3.14159, 3.14159);
    std::uniform_real_distribution<double> sc(scale_lo, scale_hi);
    std::uniform_real_distribution<double> tr(-20.0, 20.0);
    const Eigen::Matrix3d r = (Eigen::AngleAxisd(ang(rng), Eigen::Vector3d::UnitZ()) *
                               Eigen::AngleAxisd(ang(rng), Eigen::Vector3d::UnitX()) *
                               Eigen::AngleAxisd(ang(rng), Eigen::Vector3d::UnitY()))
                                  .toRotationMatrix();
    Eigen::Matrix<double, 3, 4> t;
    t.leftCols<3>() = sc(rng) * r;
    t.col(3) = Eigen::Vector3d(tr(rng), tr(rng), tr(rng));
    return t;
}

inline Eigen::VectorXd random_vector(std::mt19937_64& rng, Eigen::Index n, double stddev)
{
    std::normal_distribution<double> g(0.0, stddev);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v[i] = g(rng);
    return v;
}

} /* namespace oracle */
} /* namespace facereg */

#endif /* FACEREG_TOOLS_ORACLES_HPP */
