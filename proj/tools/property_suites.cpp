/*
 * facereg - 3D morphable model parameter regression toolkit.
 *
 * File: tools/property_suites.cpp
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
#include "property_suites.hpp"

#include "oracles.hpp"

#include "facereg/io/dataset.hpp"
#include "facereg/io/formats.hpp"
#include "facereg/loss/losses.hpp"
#include "facereg/meta/meta_joint.hpp"
#include "facereg/metrics/alignment_error.hpp"
#include "facereg/nn/regressor.hpp"
#include "facereg/synth/video_synthesis.hpp"
#include "facereg/train/objective.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>
#include <utility>

namespace facereg {
namespace checks {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x)
{
    std::ostringstream os;
    os.precision(3);
    os << x;
    return os.str();
}

std::pair<int, int> split_alpha(int d)
{
    const int d_exp = std::max(1, d / 5);
    return {d - d_exp, d_exp};
}

model::ParamVec random_truth(std::mt19937_64& rng, int num_alpha)
{
    model::ParamVec p;
    p.T = oracle::random_similarity(rng, 0.5, 2.0);
    p.alpha = oracle::random_vector(rng, num_alpha, 1.0);
    return p;
}

/// General (not necessarily similarity) perturbation of every scalar.
model::ParamVec random_prediction(std::mt19937_64& rng, const model::ParamVec& truth)
{
    model::ParamVec p = truth;
    std::normal_distribution<double> g(0.0, 1.0);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 4; ++c)
            p.T(r, c) += (c == 3 ? 2.0 : 0.1) * g(rng);
    p.alpha += oracle::random_vector(rng, truth.alpha.size(), 0.5);
    return p;
}

struct TensorView
{
    double* data;
    Eigen::Index size;
};

std::array<TensorView, 6> views(nn::RegressorWeights& w)
{
    return {TensorView{w.W1.data(), w.W1.size()},           TensorView{w.b1.data(), w.b1.size()},
            TensorView{w.W_param.data(), w.W_param.size()}, TensorView{w.b_param.data(), w.b_param.size()},
            TensorView{w.W_lmk.data(), w.W_lmk.size()},     TensorView{w.b_lmk.data(), w.b_lmk.size()}};
}

Eigen::VectorXd flatten(nn::RegressorWeights w)
{
    Eigen::VectorXd out(w.size());
    Eigen::Index k = 0;
    for (const auto& v : views(w))
        for (Eigen::Index i = 0; i < v.size; ++i)
            out[k++] = v.data[i];
    return out;
}

} // namespace

SuiteResult fwpdc_equivalence(int instances, std::uint64_t seed)
{
    const auto t0 = Clock::now();
    const std::array<int, 4> sizes{5, 50, 500, 10000};
    const std::array<int, 3> dims{4, 10, 50};
    std::map<std::pair<int, int>, model::BasisSet> bases;
    std::mt19937_64 rng(seed);

    double worst_value = 0.0, worst_grad = 0.0, worst_oracle = 0.0;
    int count = 0;
    for (int i = 0; i < instances; ++i) {
        const int n = sizes[static_cast<std::size_t>(i) % sizes.size()];
        const int d = dims[static_cast<std::size_t>(i / static_cast<int>(sizes.size())) % dims.size()];
        auto it = bases.find({n, d});
        if (it == bases.end()) {
            const auto [d_id, d_exp] = split_alpha(d);
            it = bases.emplace(std::make_pair(n, d), model::generate_synthetic_basis(n, d_id, d_exp, seed + 17 * n + d))
                     .first;
        }
        const model::BasisSet& basis = it->second;
        const model::ParamVec pg = random_truth(rng, basis.num_alpha());
        const model::ParamVec p = random_prediction(rng, pg);

        const loss::LossOutput fast = loss::fwpdc(basis, p, pg);
        const loss::LossOutput naive = loss::wpdc_naive(basis, p, pg);
        worst_value = std::max(worst_value, std::abs(fast.value - naive.value) / std::max(naive.value, 1e-12));
        worst_grad = std::max(worst_grad, oracle::relative_error(fast.grad, naive.grad));
        if (n <= 500) {
            const double ref = oracle::wpdc(basis, p, pg);
            worst_oracle = std::max(worst_oracle, std::abs(naive.value - ref) / std::max(ref, 1e-12));
        }
        ++count;
    }
    SuiteResult r;
    r.pass = count >= 200 && worst_value <= 1e-9 && worst_grad <= 1e-9 && worst_oracle <= 1e-9;
    r.detail = std::to_string(count) + " instances, max rel value dev " + fmt(worst_value) + ", grad dev " +
               fmt(worst_grad) + ", naive vs loop oracle " + fmt(worst_oracle);
    r.seconds = seconds_since(t0);
    return r;
}

BenchResult bench_fwpdc(int num_vertices, int num_alpha, int batch, int repeats, std::uint64_t seed)
{
    const auto [d_id, d_exp] = split_alpha(num_alpha);
    const model::BasisSet basis = model::generate_synthetic_basis(num_vertices, d_id, d_exp, seed);
    std::mt19937_64 rng(seed + 1);
    std::vector<model::ParamVec> truth, pred;
    for (int b = 0; b < batch; ++b) {
        truth.push_back(random_truth(rng, basis.num_alpha()));
        pred.push_back(random_prediction(rng, truth.back()));
    }

    std::vector<double> naive_ms, fast_ms;
    BenchResult out;
    std::vector<double> naive_values(static_cast<std::size_t>(batch)), fast_values(static_cast<std::size_t>(batch));
    for (int r = 0; r < repeats; ++r) {
        auto t0 = Clock::now();
        for (int b = 0; b < batch; ++b)
            naive_values[static_cast<std::size_t>(b)] = loss::wpdc_naive(basis, pred[static_cast<std::size_t>(b)],
                                                                         truth[static_cast<std::size_t>(b)])
                                                            .value;
        naive_ms.push_back(1e3 * seconds_since(t0));
        t0 = Clock::now();
        for (int b = 0; b < batch; ++b)
            fast_values[static_cast<std::size_t>(b)] =
                loss::fwpdc(basis, pred[static_cast<std::size_t>(b)], truth[static_cast<std::size_t>(b)]).value;
        fast_ms.push_back(1e3 * seconds_since(t0));
        for (int b = 0; b < batch; ++b) {
            const double nv = naive_values[static_cast<std::size_t>(b)];
            out.max_rel_deviation =
                std::max(out.max_rel_deviation, std::abs(fast_values[static_cast<std::size_t>(b)] - nv) / std::max(nv, 1e-12));
        }
    }
    auto median = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        const std::size_t m = v.size() / 2;
        return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
    };
    out.naive_ms = median(naive_ms);
    out.fast_ms = median(fast_ms);
    out.speedup = out.naive_ms / out.fast_ms;
    return out;
}

SuiteResult gradient_integrity(int instances, std::uint64_t seed)
{
    const auto t0 = Clock::now();
    constexpr double tol = 1e-4;
    const model::BasisSet basis = model::generate_synthetic_basis(30, 4, 2, seed);
    std::mt19937_64 rng(seed + 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::map<std::string, double> worst;
    std::map<std::string, int> counts;
    auto note = [&](const std::string& family, double err) {
        worst[family] = std::max(worst[family], err);
        ++counts[family];
    };

    for (int i = 0; i < instances; ++i) {
        const model::ParamVec pg = random_truth(rng, basis.num_alpha());
        const model::ParamVec p = random_prediction(rng, pg);
        const Eigen::VectorXd x = p.flat();
        auto as_p = [](const Eigen::VectorXd& v) { return model::ParamVec::from_flat(v); };

        const loss::LossOutput v = loss::vdc(basis, p, pg);
        note("vdc", oracle::relative_error(
                        v.grad, oracle::central_gradient([&](const Eigen::VectorXd& y) { return oracle::vdc(basis, as_p(y), pg); }, x)));

        const Eigen::VectorXd w = loss::fwpdc_weights(basis, p, pg);
        const loss::LossOutput f = loss::fwpdc(basis, p, pg);
        auto frozen_f = [&](const Eigen::VectorXd& y) {
            return loss::weighted_parameter_distance(w, as_p(y), pg).value;
        };
        note("fwpdc", oracle::relative_error(f.grad, oracle::central_gradient(frozen_f, x)));

        loss::JointConfig jc;
        jc.beta = unit(rng);
        const loss::LossOutput j = loss::vanilla_joint(basis, p, pg, jc);
        const double ratio = std::abs(f.value) / std::max(std::abs(v.value), jc.epsilon_ratio);
        auto frozen_j = [&](const Eigen::VectorXd& y) {
            return jc.beta * frozen_f(y) + (1.0 - jc.beta) * ratio * oracle::vdc(basis, as_p(y), pg);
        };
        note("vanilla_joint", oracle::relative_error(j.grad, oracle::central_gradient(frozen_j, x)));

        const Eigen::VectorXd lg = oracle::random_vector(rng, 136, 10.0);
        const Eigen::VectorXd lp = lg + oracle::random_vector(rng, 136, 1.0);
        const loss::LossOutput l = loss::landmark_regression_loss(lp, lg);
        note("lrr", oracle::relative_error(
                        l.grad, oracle::central_gradient(
                                    [&](const Eigen::VectorXd& y) {
                                        double acc = 0.0;
                                        for (Eigen::Index k = 0; k < y.size(); ++k)
                                            acc += (y[k] - lg[k]) * (y[k] - lg[k]);
                                        return acc / 136.0;
                                    },
                                    lp)));
    }

    // End-to-end: loss -> heads -> weights on a 16-input, 4-hidden network.
    model::NormStats stats;
    stats.mu = random_truth(rng, basis.num_alpha()).flat();
    stats.sigma = Eigen::VectorXd::Constant(basis.num_params(), 1.0) + oracle::random_vector(rng, basis.num_params(), 0.2).cwiseAbs();
    const train::LossContext ctx{basis, stats};
    const std::array<train::ParamLoss, 3> losses{train::ParamLoss::vdc, train::ParamLoss::fwpdc,
                                                 train::ParamLoss::vanilla_joint};
    for (int i = 0; i < instances; ++i) {
        nn::RegressorWeights net = nn::init_regressor(16, 4, basis.num_params(), 136, seed + 100 + i);
        for (auto& t : views(net))
            for (Eigen::Index k = 0; k < t.size; ++k)
                t.data[k] += 0.3 * std::normal_distribution<double>(0.0, 1.0)(rng);
        train::Batch batch;
        for (int b = 0; b < 2; ++b) {
            train::Sample s;
            s.image = Eigen::VectorXd::NullaryExpr(16, [&] { return unit(rng); });
            s.p_gt = random_truth(rng, basis.num_alpha());
            s.lmk_gt = oracle::random_vector(rng, 136, 5.0);
            batch.push_back(s);
        }
        train::ObjectiveConfig cfg;
        cfg.loss = losses[static_cast<std::size_t>(i) % losses.size()];
        cfg.lrr = (i / 3) % 2 == 1;
        cfg.joint.beta = 0.5;
        const train::BatchObjective o = train::evaluate_objective(net, batch, ctx, cfg);
        const Eigen::VectorXd analytic = flatten(o.grads);

        nn::RegressorWeights probe = net;
        auto tensors = views(probe);
        Eigen::VectorXd numeric(analytic.size());
        Eigen::Index k = 0;
        for (auto& t : tensors) {
            for (Eigen::Index e = 0; e < t.size; ++e, ++k) {
                const double orig = t.data[e];
                const double h = 1e-5;
                t.data[e] = orig + h;
                const double up = train::evaluate_objective(probe, batch, ctx, cfg, &o.frozen, false).total;
                t.data[e] = orig - h;
                const double down = train::evaluate_objective(probe, batch, ctx, cfg, &o.frozen, false).total;
                t.data[e] = orig;
                numeric[k] = (up - down) / (2.0 * h);
            }
        }
        note("network", oracle::relative_error(analytic, numeric));
    }

    SuiteResult r;
    r.pass = true;
    std::ostringstream os;
    for (const auto& [family, err] : worst) {
        const bool ok = err <= tol && counts[family] >= 50;
        r.pass = r.pass && ok;
        os << family << " " << counts[family] << "x max " << fmt(err) << (ok ? "" : " (FAIL)") << "; ";
    }
    r.detail = os.str();
    r.seconds = seconds_since(t0);
    return r;
}

SuiteResult synthesis_consistency(int clips, std::uint64_t seed)
{
    const auto t0 = Clock::now();
    const model::BasisSet basis = model::generate_synthetic_basis(500, 40, 10, seed);
    const io::Dataset stills = io::generate_dataset(basis, static_cast<std::size_t>(clips), io::ParamPrior{}, seed + 1);
    const synth::PerturbRanges ranges;
    synth::PerturbRanges clean = ranges;
    clean.noise_sigma = 0.0;
    clean.blur_len = 1;
    synth::PerturbRanges heavy = ranges;
    heavy.noise_sigma = 0.3;
    heavy.blur_len = 7;
    const Eigen::Vector2d center(16.0, 16.0);

    double worst_label = 0.0, worst_commute = 0.0, worst_rigid = 0.0;
    int label_mismatch = 0, photometry_missing = 0, bad_length = 0;
    std::mt19937_64 drng(seed + 2);
    for (int c = 0; c < clips; ++c) {
        const model::ParamVec& still = stills.params[static_cast<std::size_t>(c)];
        std::mt19937_64 r1(seed + 1000 + c), r2(seed + 1000 + c), r3(seed + 1000 + c);
        const synth::SyntheticClip clip = synth::synthesize_clip(basis, still, ranges, r1, c);
        const synth::SyntheticClip plain = synth::synthesize_clip(basis, still, clean, r2, c);
        const synth::SyntheticClip noisy = synth::synthesize_clip(basis, still, heavy, r3, c);
        if (clip.frames.size() != 8)
            ++bad_length;
        for (std::size_t f = 0; f < clip.frames.size(); ++f) {
            const auto& fr = clip.frames[f];
            const std::vector<double> ref = oracle::landmarks(basis, fr.p_gt);
            for (std::size_t k = 0; k < ref.size(); ++k)
                worst_label = std::max(worst_label, std::abs(fr.lmk_gt[static_cast<Eigen::Index>(k)] - ref[k]));
            for (const auto* other : {&plain, &noisy}) {
                const auto& o = other->frames[f];
                if (o.p_gt.flat() != fr.p_gt.flat() || o.lmk_gt != fr.lmk_gt)
                    ++label_mismatch;
            }
            if (f > 0 && plain.frames[f].image.pixels == fr.image.pixels)
                ++photometry_missing;
        }

        // In-plane similarity commutes with projection.
        std::uniform_real_distribution<double> s(0.9, 1.1), th(-0.2, 0.2), t(-5.0, 5.0);
        synth::InplaneDelta d{s(drng), th(drng), t(drng), t(drng)};
        const std::vector<double> before = oracle::landmarks(basis, still);
        const std::vector<double> after = oracle::landmarks(basis, synth::inplane_transform(still, d, center));
        const double cs = std::cos(d.theta), sn = std::sin(d.theta);
        for (std::size_t k = 0; k + 1 < before.size(); k += 2) {
            const double x = before[k] - center.x(), y = before[k + 1] - center.y();
            const double ex = d.scale * (cs * x - sn * y) + center.x() + d.tx;
            const double ey = d.scale * (sn * x + cs * y) + center.y() + d.ty;
            worst_commute = std::max({worst_commute, std::abs(after[k] - ex), std::abs(after[k + 1] - ey)});
        }

        // Out-of-plane rotation is rigid in 3D.
        std::uniform_real_distribution<double> ang(-0.5, 0.5);
        const std::vector<double> v0 = oracle::vertices(basis, still);
        const std::vector<double> v1 = oracle::vertices(basis, synth::outofplane_transform(still, ang(drng), ang(drng)));
        for (int a = 0; a < 40; ++a) {
            const std::size_t i = 3 * static_cast<std::size_t>(a * 7 % basis.num_vertices());
            const std::size_t j = 3 * static_cast<std::size_t>((a * 13 + 5) % basis.num_vertices());
            auto dist = [&](const std::vector<double>& v) {
                return std::sqrt((v[i] - v[j]) * (v[i] - v[j]) + (v[i + 1] - v[j + 1]) * (v[i + 1] - v[j + 1]) +
                                 (v[i + 2] - v[j + 2]) * (v[i + 2] - v[j + 2]));
            };
            const double d0 = dist(v0);
            if (d0 > 0.0)
                worst_rigid = std::max(worst_rigid, std::abs(dist(v1) - d0) / d0);
        }
    }
    SuiteResult r;
    r.pass = worst_label <= 1e-9 && worst_commute <= 1e-9 && worst_rigid <= 1e-9 && label_mismatch == 0 &&
             photometry_missing == 0 && bad_length == 0;
    r.detail = std::to_string(clips) + " clips: label err " + fmt(worst_label) + ", photometric label changes " +
               std::to_string(label_mismatch) + ", in-plane commutation err " + fmt(worst_commute) +
               ", rigidity err " + fmt(worst_rigid);
    r.seconds = seconds_since(t0);
    return r;
}

SuiteResult metric_sanity()
{
    const auto t0 = Clock::now();
    std::vector<std::string> failed;
    auto expect = [&](bool ok, const std::string& what) {
        if (!ok)
            failed.push_back(what);
    };
    auto near = [](double a, double b, double tol = 1e-12) { return std::abs(a - b) <= tol; };

    // 68 landmarks spanning a 100 x 100 box.
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    Eigen::VectorXd gt(136);
    for (int i = 0; i < 68; ++i) {
        gt[2 * i] = u(rng);
        gt[2 * i + 1] = u(rng);
    }
    gt.head<2>() << 0.0, 0.0;
    gt.segment<2>(2) << 100.0, 100.0;

    expect(metrics::nme_sparse(gt, gt, metrics::NormalizerKind::bbox_sqrt_area) == 0.0, "nme pred=gt");
    Eigen::VectorXd off = gt;
    for (int i = 0; i < 68; ++i) {
        off[2 * i] += 3.0;
        off[2 * i + 1] += 4.0;
    }
    expect(near(metrics::nme_sparse(off, gt, metrics::NormalizerKind::bbox_sqrt_area), 5.0), "nme (3,4) offset");
    Eigen::VectorXd one_p(2), one_g(2);
    one_p << 1.0, 2.0;
    one_g << 4.0, 6.0;
    expect(near(metrics::nme_sparse(one_p, one_g, 10.0), 50.0), "nme single landmark");
    expect(near(metrics::nme_sparse(one_p, one_g, 1.0), 500.0), "nme unit normalizer");

    Eigen::VectorXd shifted_p = off, shifted_g = gt;
    for (int i = 0; i < 68; ++i) {
        shifted_p[2 * i] += 17.25;
        shifted_g[2 * i] += 17.25;
    }
    expect(near(metrics::nme_sparse(shifted_p, shifted_g, metrics::NormalizerKind::bbox_sqrt_area), 5.0, 1e-9),
           "nme translation invariance");

    bool degenerate = false;
    try {
        metrics::nme_sparse(gt, Eigen::VectorXd::Zero(136), metrics::NormalizerKind::bbox_sqrt_area);
    } catch (const metrics::DegenerateInputError&) {
        degenerate = true;
    }
    expect(degenerate, "degenerate bbox error");

    model::VertexSet a, b;
    a.coords3d = Eigen::Matrix3Xd::NullaryExpr(3, 50, [&] { return u(rng); });
    b.coords3d = a.coords3d;
    expect(metrics::nme_dense(a, b, 3.0) == 0.0, "dense identical");
    b.coords3d.row(1).array() += 2.5;
    expect(near(metrics::nme_dense(b, a, 2.5), 100.0), "dense uniform offset");
    b.coords3d = Eigen::Matrix3Xd::NullaryExpr(3, 50, [&] { return u(rng); });
    double loop = 0.0;
    for (int v = 0; v < 50; ++v) {
        const double dx = a.coords3d(0, v) - b.coords3d(0, v), dy = a.coords3d(1, v) - b.coords3d(1, v),
                     dz = a.coords3d(2, v) - b.coords3d(2, v);
        loop += std::sqrt(dx * dx + dy * dy + dz * dz);
    }
    expect(near(metrics::nme_dense(a, b, 7.0), loop / 50.0 / 7.0 * 100.0, 1e-10), "dense loop oracle");

    // Stability: constant bias on a dyadic grid cancels exactly.
    std::vector<Eigen::VectorXd> seq, biased, alternating, statics;
    std::uniform_int_distribution<int> grid(0, 6400);
    for (int t = 0; t < 6; ++t) {
        Eigen::VectorXd f(136);
        for (int i = 0; i < 136; ++i)
            f[i] = grid(rng) / 64.0;
        f.head<2>() << 0.0, 0.0;
        f.segment<2>(2) << 100.0, 100.0;
        seq.push_back(f);
        Eigen::VectorXd g = f;
        for (int i = 0; i < 68; ++i) {
            g[2 * i] += 1.5;
            g[2 * i + 1] -= 0.75;
        }
        biased.push_back(g);
        statics.push_back(gt);
        Eigen::VectorXd h = gt;
        for (int i = 0; i < 68; ++i)
            h[2 * i] += (t % 2 == 0 ? 1.0 : -1.0);
        alternating.push_back(h);
    }
    expect(metrics::stability(biased, seq) == 0.0, "stability constant bias exactly zero");
    expect(metrics::stability(seq, seq) == 0.0, "stability pred=gt");
    expect(near(metrics::stability(alternating, statics), 2.0), "stability alternating +-1 px");

    const metrics::EvalReport rep = metrics::make_report({1.0, 2.0, 6.0}, metrics::NormalizerKind::bbox_sqrt_area);
    expect(near(rep.nme_mean, 3.0), "report mean");

    SuiteResult r;
    r.pass = failed.empty();
    std::ostringstream os;
    os << "13 metric checks";
    for (const auto& f : failed)
        os << "; failed: " << f;
    r.detail = os.str();
    r.seconds = seconds_since(t0);
    return r;
}

SuiteResult format_robustness(int fuzz_inputs, std::uint64_t seed)
{
    const auto t0 = Clock::now();
    std::vector<std::string> failed;
    auto expect = [&](bool ok, const std::string& what) {
        if (!ok)
            failed.push_back(what);
    };
    std::mt19937_64 rng(seed);

    // Basis round-trips at random sizes.
    for (int i = 0; i < 5; ++i) {
        std::uniform_int_distribution<int> n(1, 300), d(1, 12);
        const model::BasisSet b = model::generate_synthetic_basis(n(rng), d(rng), d(rng), seed + i);
        const io::Bytes bytes = io::serialize_basis(b);
        const model::BasisSet back = io::parse_basis(bytes);
        expect(io::serialize_basis(back) == bytes, "basis bitwise round-trip");
        expect(back.mean_shape() == b.mean_shape() && back.basis() == b.basis() &&
                   back.landmark_indices() == b.landmark_indices(),
               "basis value round-trip");
    }

    // Fuzzing.
    const model::BasisSet small = model::generate_synthetic_basis(20, 4, 2, seed);
    const io::Bytes valid = io::serialize_basis(small);
    int typed = 0, accepted = 0, untyped = 0;
    std::uniform_int_distribution<int> byte(0, 255);
    for (int i = 0; i < fuzz_inputs; ++i) {
        io::Bytes m = valid;
        const int kind = i % 6;
        bool must_fail = false;
        if (kind == 0) {
            m.resize(std::uniform_int_distribution<std::size_t>(0, valid.size() - 1)(rng));
            must_fail = true;
        } else if (kind == 1) {
            const int flips = std::uniform_int_distribution<int>(1, 8)(rng);
            for (int f = 0; f < flips; ++f)
                m[std::uniform_int_distribution<std::size_t>(0, m.size() - 1)(rng)] = static_cast<std::uint8_t>(byte(rng));
        } else if (kind == 2) {
            for (std::size_t k = 0; k < 14; ++k)
                if (byte(rng) < 64)
                    m[k] = static_cast<std::uint8_t>(byte(rng));
        } else if (kind == 3) {
            const int extra = std::uniform_int_distribution<int>(1, 64)(rng);
            for (int e = 0; e < extra; ++e)
                m.push_back(static_cast<std::uint8_t>(byte(rng)));
            must_fail = true;
        } else if (kind == 4) {
            m.resize(std::uniform_int_distribution<std::size_t>(0, 2 * valid.size())(rng));
            for (auto& x : m)
                x = static_cast<std::uint8_t>(byte(rng));
        } else {
            // Huge declared sizes with a short payload.
            m[6] = m[7] = m[8] = m[9] = 0xff;
            m[10] = m[11] = 0xff;
            must_fail = true;
        }
        try {
            const model::BasisSet parsed = io::parse_basis(m);
            if (must_fail || io::serialize_basis(parsed) != m)
                ++untyped;
            else
                ++accepted;
        } catch (const io::ParseError&) {
            ++typed;
        } catch (...) {
            ++untyped;
        }
    }
    expect(untyped == 0, std::to_string(untyped) + " fuzz inputs escaped typed errors");

    try {
        io::Bytes bad = valid;
        bad[0] = 'X';
        io::parse_basis(bad);
        expect(false, "corrupted magic accepted");
    } catch (const io::ParseError& e) {
        expect(e.field() == "magic", "corrupted magic names field 'magic'");
    }

    // Parameters, clips, checkpoint, report, manifest, traces, curves.
    const model::BasisSet basis = model::generate_synthetic_basis(60, 6, 3, seed + 9);
    const io::Dataset ds = io::generate_dataset(basis, 12, io::ParamPrior{}, seed + 10);
    const auto params_back = io::parse_params(io::serialize_params(ds.params));
    bool params_ok = params_back.size() == ds.params.size();
    for (std::size_t i = 0; params_ok && i < ds.params.size(); ++i)
        params_ok = params_back[i].flat() == ds.params[i].flat();
    expect(params_ok, "params text round-trip");

    std::vector<synth::SyntheticClip> clips;
    for (int c = 0; c < 3; ++c)
        clips.push_back(synth::synthesize_clip(basis, ds.params[static_cast<std::size_t>(c)], synth::PerturbRanges{}, rng, c));
    const io::Bytes clip_bytes = io::serialize_clips(clips);
    const auto clips_back = io::parse_clips(clip_bytes);
    expect(io::serialize_clips(clips_back) == clip_bytes, "clip bitwise round-trip");

    const nn::RegressorWeights w = nn::init_regressor(1024, 64, basis.num_params(), 136, seed);
    const io::Bytes wb = io::serialize_weights(w);
    const nn::RegressorWeights wback = io::parse_weights(wb);
    expect(io::serialize_weights(wback) == wb && wback.W1 == w.W1 && wback.b_lmk == w.b_lmk, "checkpoint round-trip");
    bool truncated_typed = true;
    for (std::size_t cut : {std::size_t{0}, std::size_t{3}, std::size_t{20}, wb.size() / 2, wb.size() - 1}) {
        try {
            io::parse_weights(io::Bytes(wb.begin(), wb.begin() + static_cast<std::ptrdiff_t>(cut)));
            truncated_typed = false;
        } catch (const io::ParseError&) {
        } catch (...) {
            truncated_typed = false;
        }
    }
    expect(truncated_typed, "truncated checkpoints raise typed errors");

    const metrics::EvalReport rep =
        metrics::make_report({0.1, 1.0 / 3.0, 2.5e-7}, metrics::NormalizerKind::outer_interocular, 0.123456789012345678);
    const metrics::EvalReport rep_back = io::parse_report(io::serialize_report(rep));
    expect(rep_back.nme_mean == rep.nme_mean && rep_back.per_sample_nme == rep.per_sample_nme &&
               rep_back.normalizer_kind == rep.normalizer_kind && rep_back.stability == rep.stability,
           "report round-trip");

    const io::DatasetManifest man_back = io::parse_manifest(io::serialize_manifest(ds.manifest));
    expect(man_back.seed == ds.manifest.seed && man_back.count == ds.manifest.count &&
               man_back.stats.mu == ds.manifest.stats.mu && man_back.stats.sigma == ds.manifest.stats.sigma &&
               man_back.prior.yaw.lo == ds.manifest.prior.yaw.lo,
           "manifest round-trip");

    meta::SelectorTrace trace;
    expect(meta::parse_trace(meta::export_trace(trace)).empty(), "empty trace round-trip");
    trace.push_back({0, meta::Choice::fwpdc, 1.0 / 3.0, 2.0});
    trace.push_back({1, meta::Choice::vdc, 5.0, 0.1});
    const auto trace_back = meta::parse_trace(meta::export_trace(trace));
    expect(trace_back.size() == 2 && trace_back[1].chosen == meta::Choice::vdc &&
               trace_back[0].meta_test_error_f == 1.0 / 3.0,
           "trace round-trip");

    const std::vector<io::CurveRow> curve{{0, 3.5}, {100, 1.0 / 7.0}};
    const auto curve_back = io::parse_curve(io::serialize_curve(curve));
    expect(curve_back.size() == 2 && curve_back[1].vertex_error == curve[1].vertex_error, "curve round-trip");

    SuiteResult r;
    r.pass = failed.empty();
    std::ostringstream os;
    os << fuzz_inputs << " fuzzed containers: " << typed << " typed errors, " << accepted << " valid re-encodings, "
       << untyped << " escapes";
    for (const auto& f : failed)
        os << "; failed: " << f;
    r.detail = os.str();
    r.seconds = seconds_since(t0);
    return r;
}

} /* namespace checks */
} /* namespace facereg */
