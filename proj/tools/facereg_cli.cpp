/*
 * facereg - 3D morphable model parameter regression toolkit.
 *
 * File: tools/facereg_cli.cpp
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

// Command-line front end: data generation, training, evaluation, benchmarks
// and the property self-checks. Errors go to stderr as a single line
//   facereg: error kind=<usage|parse|runtime> message="..."
// with exit code 2 for usage errors (bad flags or paths) and 1 otherwise.

#include "property_suites.hpp"

#include "facereg/io/dataset.hpp"
#include "facereg/io/formats.hpp"
#include "facereg/metrics/alignment_error.hpp"
#include "facereg/train/trainer.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

using namespace facereg;
namespace fs = std::filesystem;

namespace {

/// Bad flag values or unusable paths; reported with exit code 2.
class UsageError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// FACEREG_LOG: 0 silent, 1 progress (default), 2 verbose.
int log_level()
{
    static const int level = [] {
        const char* env = std::getenv("FACEREG_LOG");
        return env ? std::atoi(env) : 1;
    }();
    return level;
}

void log(int level, const std::string& msg)
{
    if (log_level() >= level)
        std::cerr << "facereg: " << msg << '\n';
}

std::string quoted(const std::string& s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c == '\n' ? ' ' : c;
    }
    return out + '"';
}

int fail(const char* kind, const std::string& message, int code)
{
    std::cerr << "facereg: error kind=" << kind << " message=" << quoted(message) << '\n';
    return code;
}

void require_output_dir(const std::string& path)
{
    const fs::path parent = fs::absolute(path).parent_path();
    if (!fs::is_directory(parent))
        throw UsageError("output directory does not exist: " + parent.string());
}

io::Bytes read_input(const std::string& path)
{
    try {
        return io::read_bytes(path);
    } catch (const io::ParseError&) {
        throw;
    } catch (const std::runtime_error& e) {
        throw UsageError(e.what());
    }
}

std::string read_input_text(const std::string& path)
{
    try {
        return io::read_text(path);
    } catch (const std::runtime_error& e) {
        throw UsageError(e.what());
    }
}

struct LoadedData
{
    io::DatasetManifest manifest;
    std::vector<model::ParamVec> params;
};

LoadedData load_data(const std::string& manifest_path)
{
    LoadedData d;
    d.manifest = io::parse_manifest(read_input_text(manifest_path));
    const fs::path params = fs::path(manifest_path).parent_path() / d.manifest.params_file;
    d.params = io::parse_params(read_input_text(params.string()));
    if (d.params.size() != d.manifest.count)
        throw io::ParseError("count", 0,
                             "manifest declares " + std::to_string(d.manifest.count) + " samples, params file holds " +
                                 std::to_string(d.params.size()));
    return d;
}

void check_dims(const model::BasisSet& basis, const LoadedData& d)
{
    if (!d.params.empty() && d.params.front().size() != basis.num_params())
        throw UsageError("dataset parameters have " + std::to_string(d.params.front().size()) +
                         " entries, basis expects " + std::to_string(basis.num_params()));
}

// gen-basis -------------------------------------------------------------------

struct GenBasisArgs
{
    int vertices = 500;
    int d_id = 40;
    int d_exp = 10;
    std::uint64_t seed = 7;
    std::string out;
};

void run_gen_basis(const GenBasisArgs& a)
{
    require_output_dir(a.out);
    const auto basis = model::generate_synthetic_basis(a.vertices, a.d_id, a.d_exp, a.seed);
    io::write_bytes(a.out, io::serialize_basis(basis));
    log(1, "wrote basis N=" + std::to_string(a.vertices) + " D=" + std::to_string(a.d_id) + "/" +
               std::to_string(a.d_exp) + " to " + a.out);
}

// gen-data --------------------------------------------------------------------

struct GenDataArgs
{
    std::string basis;
    std::size_t count = 2000;
    std::uint64_t seed = 11;
    std::string out_dir;
    std::size_t clips = 0;
    int n_frames = 8;
};

void run_gen_data(const GenDataArgs& a)
{
    if (!fs::is_directory(a.out_dir))
        throw UsageError("output directory does not exist: " + a.out_dir);
    const auto basis = io::parse_basis(read_input(a.basis));
    io::Dataset ds = io::generate_dataset(basis, a.count, io::ParamPrior{}, a.seed);
    ds.manifest.params_file = "params.csv";
    ds.manifest.ranges.n_frames = a.n_frames;
    ds.manifest.ranges.validate();
    io::write_text((fs::path(a.out_dir) / "params.csv").string(), io::serialize_params(ds.params));
    io::write_text((fs::path(a.out_dir) / "manifest.json").string(), io::serialize_manifest(ds.manifest));
    log(1, "wrote " + std::to_string(a.count) + " samples to " + a.out_dir);

    if (a.clips > 0) {
        // Clips expand the first samples; their geometry stream is separate from the dataset seed stream.
        std::mt19937_64 rng(a.seed ^ 0x5bd1e995ULL);
        std::vector<synth::SyntheticClip> clips;
        for (std::size_t i = 0; i < std::min(a.clips, ds.params.size()); ++i)
            clips.push_back(synth::synthesize_clip(basis, ds.params[i], ds.manifest.ranges, rng, i,
                                                   ds.manifest.prior.image_size, ds.manifest.prior.image_size));
        io::write_bytes((fs::path(a.out_dir) / "clips.m3cl").string(), io::serialize_clips(clips));
        log(1, "wrote " + std::to_string(clips.size()) + " clips");
    }
}

// train -----------------------------------------------------------------------

struct TrainArgs
{
    std::string basis;
    std::string data;
    std::string loss = "fwpdc";
    train::TrainConfig cfg;
    double lr = -1.0;
    double lr_vdc = -1.0;
    std::uint64_t seed = 1;
    std::string out;
    std::string curve;
    std::string trace;
};

void run_train(TrainArgs a)
{
    require_output_dir(a.out);
    if (!a.curve.empty())
        require_output_dir(a.curve);
    if (!a.trace.empty())
        require_output_dir(a.trace);
    try {
        a.cfg.mode = train::loss_mode_from_string(a.loss);
        if (a.lr >= 0.0)
            a.cfg.lr_fwpdc = a.cfg.lr_vdc = a.lr;
        if (a.lr_vdc >= 0.0)
            a.cfg.lr_vdc = a.lr_vdc;
        a.cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    const auto basis = io::parse_basis(read_input(a.basis));
    const LoadedData d = load_data(a.data);
    check_dims(basis, d);
    const auto pool = train::make_samples(basis, d.params, d.manifest.prior.image_size);
    log(1, "training " + a.loss + " for " + std::to_string(a.cfg.iterations) + " iterations on " +
               std::to_string(pool.size()) + " samples");
    const auto r = train::train_supervised(basis, pool, d.manifest.stats, a.cfg, a.seed);

    io::write_bytes(a.out, io::serialize_weights(r.weights));
    if (!a.curve.empty()) {
        std::vector<io::CurveRow> rows;
        for (const auto& p : r.curve)
            rows.push_back({p.iteration, p.vertex_error});
        io::write_text(a.curve, io::serialize_curve(rows));
    }
    const bool meta = a.cfg.mode == train::LossMode::meta_joint || a.cfg.mode == train::LossMode::meta_joint_lrr;
    if (meta) {
        const std::string path = a.trace.empty() ? a.out + ".trace.csv" : a.trace;
        io::write_text(path, meta::export_trace(r.trace));
        log(1, "wrote selector trace (" + std::to_string(r.trace.size()) + " rows) to " + path);
    }
    std::printf("final_vertex_error %.17g\n", r.curve.back().vertex_error);
}

// eval ------------------------------------------------------------------------

struct EvalArgs
{
    std::string basis;
    std::string data;
    std::string clips;
    std::string checkpoint;
    std::string normalizer = "bbox";
    std::string out;
};

void run_eval(const EvalArgs& a)
{
    require_output_dir(a.out);
    metrics::NormalizerKind kind;
    try {
        kind = metrics::normalizer_from_string(a.normalizer);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const auto basis = io::parse_basis(read_input(a.basis));
    const LoadedData d = load_data(a.data);
    check_dims(basis, d);
    const auto w = io::parse_weights(read_input(a.checkpoint));
    if (w.param_dim() != basis.num_params())
        throw UsageError("checkpoint parameter head does not match the basis");

    auto predict_landmarks = [&](const Eigen::MatrixXd& images) {
        std::vector<Eigen::VectorXd> out;
        for (const auto& p : train::predict(w, images, d.manifest.stats))
            out.push_back(model::landmarks_of(basis, p));
        return out;
    };

    std::vector<double> nme;
    std::optional<double> stab;
    if (a.clips.empty()) {
        const auto samples = train::make_samples(basis, d.params, d.manifest.prior.image_size);
        const auto pred = predict_landmarks(train::stack_images(samples));
        for (std::size_t i = 0; i < samples.size(); ++i)
            nme.push_back(metrics::nme_sparse(pred[i], samples[i].lmk_gt, kind));
    } else {
        const auto clips = io::parse_clips(read_input(a.clips));
        double total = 0.0;
        int counted = 0;
        for (const auto& c : clips) {
            Eigen::MatrixXd images(c.frames.front().image.pixels.size(), static_cast<Eigen::Index>(c.frames.size()));
            std::vector<Eigen::VectorXd> gt;
            for (std::size_t f = 0; f < c.frames.size(); ++f) {
                images.col(static_cast<Eigen::Index>(f)) = c.frames[f].image.pixels;
                gt.push_back(c.frames[f].lmk_gt);
            }
            const auto pred = predict_landmarks(images);
            for (std::size_t f = 0; f < pred.size(); ++f)
                nme.push_back(metrics::nme_sparse(pred[f], gt[f], kind));
            if (pred.size() >= 2) {
                total += metrics::stability(pred, gt);
                ++counted;
            }
        }
        if (counted > 0)
            stab = total / counted;
    }
    const auto report = metrics::make_report(std::move(nme), kind, stab);
    io::write_text(a.out, io::serialize_report(report));
    std::printf("nme %.6f\n", report.nme_mean);
    if (report.stability)
        std::printf("stability %.6f\n", *report.stability);
}

// bench-fwpdc -----------------------------------------------------------------

struct BenchArgs
{
    int vertices = 10000;
    int dim = 50;
    int batch = 128;
    int repeats = 10;
    std::uint64_t seed = 5;
    std::string json_out;
};

void run_bench(const BenchArgs& a)
{
    if (!a.json_out.empty())
        require_output_dir(a.json_out);
    const auto b = checks::bench_fwpdc(a.vertices, a.dim, a.batch, a.repeats, a.seed);
    std::printf("%-10s %12s\n", "method", "batch_ms");
    std::printf("%-10s %12.3f\n", "wpdc", b.naive_ms);
    std::printf("%-10s %12.3f\n", "fwpdc", b.fast_ms);
    std::printf("speedup %.2f\nmax_rel_deviation %.3g\n", b.speedup, b.max_rel_deviation);
    if (!a.json_out.empty()) {
        nlohmann::json j{{"vertices", a.vertices}, {"dim", a.dim},         {"batch", a.batch},
                         {"repeats", a.repeats},   {"naive_ms", b.naive_ms}, {"fast_ms", b.fast_ms},
                         {"speedup", b.speedup},   {"max_rel_deviation", b.max_rel_deviation}};
        io::write_text(a.json_out, j.dump(2) + "\n");
    }
}

// selfcheck -------------------------------------------------------------------

int run_selfcheck(std::uint64_t seed, bool quick)
{
    struct Entry
    {
        const char* name;
        checks::SuiteResult result;
    };
    const int scale = quick ? 10 : 1;
    std::vector<Entry> entries;
    entries.push_back({"fwpdc_equivalence", checks::fwpdc_equivalence(216, seed)});
    entries.push_back({"gradient_integrity", checks::gradient_integrity(50, seed + 1)});
    entries.push_back({"synthesis_consistency", checks::synthesis_consistency(100 / scale, seed + 2)});
    entries.push_back({"metric_sanity", checks::metric_sanity()});
    entries.push_back({"format_robustness", checks::format_robustness(10000 / scale, seed + 3)});
    int failed = 0;
    for (const auto& e : entries) {
        std::printf("%s %s - %s (%.1fs)\n", e.result.pass ? "PASS" : "FAIL", e.name, e.result.detail.c_str(),
                    e.result.seconds);
        failed += !e.result.pass;
    }
    return failed == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"facereg: 3D morphable model parameter regression toolkit"};
    app.require_subcommand(1);

    GenBasisArgs gb;
    auto* c_gb = app.add_subcommand("gen-basis", "Write a synthetic basis container");
    c_gb->add_option("--vertices", gb.vertices, "Number of vertices")->check(CLI::PositiveNumber);
    c_gb->add_option("--d-id", gb.d_id, "Identity components")->check(CLI::NonNegativeNumber);
    c_gb->add_option("--d-exp", gb.d_exp, "Expression components")->check(CLI::NonNegativeNumber);
    c_gb->add_option("--seed", gb.seed, "RNG seed");
    c_gb->add_option("--out", gb.out, "Output basis file")->required();

    GenDataArgs gd;
    auto* c_gd = app.add_subcommand("gen-data", "Sample ground-truth parameters and fit normalization stats");
    c_gd->add_option("--basis", gd.basis, "Basis container")->required()->check(CLI::ExistingFile);
    c_gd->add_option("--count", gd.count, "Number of samples")->check(CLI::PositiveNumber);
    c_gd->add_option("--seed", gd.seed, "RNG seed");
    c_gd->add_option("--out-dir", gd.out_dir, "Directory for manifest.json and params.csv")->required();
    c_gd->add_option("--clips", gd.clips, "Also write this many synthesized clips to clips.m3cl");
    c_gd->add_option("--n-frames", gd.n_frames, "Frames per clip")->check(CLI::PositiveNumber);

    TrainArgs tr;
    auto* c_tr = app.add_subcommand("train", "Train a regressor");
    c_tr->add_option("--basis", tr.basis, "Basis container")->required()->check(CLI::ExistingFile);
    c_tr->add_option("--data", tr.data, "Dataset manifest")->required()->check(CLI::ExistingFile);
    c_tr->add_option("--loss", tr.loss,
                     "vdc | fwpdc | vdc_from_fwpdc | vanilla_joint | meta_joint | meta_joint_lrr");
    c_tr->add_option("--iterations", tr.cfg.iterations, "SGD steps")->check(CLI::PositiveNumber);
    tr.cfg.batch_size = 128;
    c_tr->add_option("--batch", tr.cfg.batch_size, "Batch size")->check(CLI::PositiveNumber);
    c_tr->add_option("--hidden", tr.cfg.hidden_dim, "Hidden units")->check(CLI::PositiveNumber);
    c_tr->add_option("--lr", tr.lr, "Learning rate for every loss");
    c_tr->add_option("--lr-fwpdc", tr.cfg.lr_fwpdc, "Learning rate for fWPDC and vanilla joint");
    c_tr->add_option("--lr-vdc", tr.lr_vdc, "Learning rate for VDC (overrides --lr)");
    c_tr->add_option("--momentum", tr.cfg.momentum, "SGD momentum");
    c_tr->add_option("--weight-decay", tr.cfg.weight_decay, "L2 weight decay");
    c_tr->add_option("--beta", tr.cfg.beta, "Vanilla joint weight of fWPDC");
    c_tr->add_option("--switch-fraction", tr.cfg.switch_fraction, "vdc_from_fwpdc switch point");
    c_tr->add_option("--k", tr.cfg.k, "Meta look-ahead steps")->check(CLI::PositiveNumber);
    c_tr->add_flag("--lrr", tr.cfg.lrr, "Landmark-regression regularization");
    c_tr->add_flag("--svs", tr.cfg.svs, "Short-video synthesis of every batch");
    c_tr->add_option("--n-frames", tr.cfg.ranges.n_frames, "Frames per synthesized clip");
    c_tr->add_option("--noise-sigma", tr.cfg.ranges.noise_sigma, "Synthesis noise standard deviation");
    c_tr->add_option("--blur-len", tr.cfg.ranges.blur_len, "Synthesis motion blur length");
    c_tr->add_option("--eval-every", tr.cfg.eval_every, "Curve sampling period");
    c_tr->add_option("--eval-samples", tr.cfg.eval_samples, "Samples used for the curve (0: all)");
    c_tr->add_option("--seed", tr.seed, "RNG seed");
    c_tr->add_option("--out", tr.out, "Output checkpoint")->required();
    c_tr->add_option("--curve", tr.curve, "Output error curve (CSV)");
    c_tr->add_option("--trace", tr.trace, "Output selector trace (meta modes; default <out>.trace.csv)");

    EvalArgs ev;
    auto* c_ev = app.add_subcommand("eval", "Evaluate a checkpoint");
    c_ev->add_option("--basis", ev.basis, "Basis container")->required()->check(CLI::ExistingFile);
    c_ev->add_option("--data", ev.data, "Dataset manifest (samples and normalization stats)")
        ->required()
        ->check(CLI::ExistingFile);
    c_ev->add_option("--clips", ev.clips, "Evaluate on these clips instead, adding stability")
        ->check(CLI::ExistingFile);
    c_ev->add_option("--checkpoint", ev.checkpoint, "Weights")->required()->check(CLI::ExistingFile);
    c_ev->add_option("--normalizer", ev.normalizer, "bbox | interocular");
    c_ev->add_option("--out", ev.out, "Output report (JSON)")->required();

    BenchArgs be;
    auto* c_be = app.add_subcommand("bench-fwpdc", "Time WPDC against fWPDC");
    c_be->add_option("--vertices", be.vertices, "Number of vertices")->check(CLI::PositiveNumber);
    c_be->add_option("--dim", be.dim, "Coefficient count")->check(CLI::PositiveNumber);
    c_be->add_option("--batch", be.batch, "Batch size")->check(CLI::PositiveNumber);
    c_be->add_option("--repeats", be.repeats, "Timed repeats (median reported)")->check(CLI::PositiveNumber);
    c_be->add_option("--seed", be.seed, "RNG seed");
    c_be->add_option("--json", be.json_out, "Also write the result as JSON");

    std::uint64_t sc_seed = 20261015;
    bool sc_quick = false;
    auto* c_sc = app.add_subcommand("selfcheck", "Run the property suites");
    c_sc->add_option("--seed", sc_seed, "RNG seed");
    c_sc->add_flag("--quick", sc_quick, "Reduced instance counts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("usage", e.what(), 2);
    }

    try {
        if (*c_gb)
            run_gen_basis(gb);
        else if (*c_gd)
            run_gen_data(gd);
        else if (*c_tr)
            run_train(tr);
        else if (*c_ev)
            run_eval(ev);
        else if (*c_be)
            run_bench(be);
        else if (*c_sc)
            return run_selfcheck(sc_seed, sc_quick);
    } catch (const UsageError& e) {
        return fail("usage", e.what(), 2);
    } catch (const io::ParseError& e) {
        return fail("parse", e.what(), 1);
    } catch (const std::invalid_argument& e) {
        return fail("usage", e.what(), 2);
    } catch (const std::exception& e) {
        return fail("runtime", e.what(), 1);
    }
    return 0;
}
