/*
 * facereg - 3D morphable model parameter regression toolkit.
 *
 * File: src/formats.cpp
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
#include "facereg/io/formats.hpp"

#include <json.hpp>

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

namespace facereg {
namespace io {

namespace {

using json = nlohmann::json;

constexpr char basis_magic[4] = {'M', '3', 'D', 'M'};
constexpr char clip_magic[4] = {'M', '3', 'C', 'L'};
constexpr char weights_magic[4] = {'M', '3', 'R', 'W'};
constexpr std::uint16_t clip_version = 1;
constexpr std::uint16_t weights_version = 1;

class Writer
{
public:
    void magic(const char (&m)[4]) { out_.insert(out_.end(), m, m + 4); }

    template <typename U>
    void uint(U v)
    {
        for (std::size_t i = 0; i < sizeof(U); ++i)
            out_.push_back(static_cast<std::uint8_t>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xffu));
    }

    void f32(double v) { uint(std::bit_cast<std::uint32_t>(static_cast<float>(v))); }
    void f64(double v) { uint(std::bit_cast<std::uint64_t>(v)); }

    void f64s(const double* p, Eigen::Index n)
    {
        for (Eigen::Index i = 0; i < n; ++i)
            f64(p[i]);
    }

    Bytes take() { return std::move(out_); }

private:
    Bytes out_;
};

class Reader
{
public:
    explicit Reader(const Bytes& b) : b_(b) {}

    std::size_t offset() const { return pos_; }
    std::size_t remaining() const { return b_.size() - pos_; }

    void magic(const char (&m)[4])
    {
        need(4, "magic");
        if (std::memcmp(b_.data() + pos_, m, 4) != 0)
            throw ParseError("magic", pos_, "expected '" + std::string(m, 4) + "'");
        pos_ += 4;
    }

    template <typename U>
    U uint(const char* field)
    {
        need(sizeof(U), field);
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < sizeof(U); ++i)
            v |= static_cast<std::uint64_t>(b_[pos_ + i]) << (8 * i);
        pos_ += sizeof(U);
        return static_cast<U>(v);
    }

    double f32(const char* field) { return static_cast<double>(std::bit_cast<float>(uint<std::uint32_t>(field))); }
    double f64(const char* field) { return std::bit_cast<double>(uint<std::uint64_t>(field)); }

    void f64s(double* p, Eigen::Index n, const char* field)
    {
        need(static_cast<std::size_t>(n) * 8, field);
        for (Eigen::Index i = 0; i < n; ++i)
            p[i] = f64(field);
    }

    /// Fails unless exactly `bytes` remain.
    void expect_exact(std::uint64_t bytes, const char* field) const
    {
        if (remaining() != bytes)
            throw ParseError(field, pos_,
                             "declared payload of " + std::to_string(bytes) + " bytes but " +
                                 std::to_string(remaining()) + " remain");
    }

    void expect_end() const
    {
        if (remaining() != 0)
            throw ParseError("trailer", pos_, std::to_string(remaining()) + " unexpected trailing bytes");
    }

private:
    void need(std::size_t n, const char* field) const
    {
        if (remaining() < n)
            throw ParseError(field, pos_, "truncated: need " + std::to_string(n) + " bytes, have " +
                                              std::to_string(remaining()));
    }

    const Bytes& b_;
    std::size_t pos_ = 0;
};

/// a * b with a guard against u64 overflow; sizes beyond any file are rejected as inconsistent.
std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, const char* field, std::size_t offset)
{
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
        throw ParseError(field, offset, "declared size overflows");
    return a * b;
}

json vec_to_json(const Eigen::VectorXd& v)
{
    return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd vec_from_json(const json& j)
{
    const auto v = j.get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json interval_to_json(const synth::Interval& i)
{
    return json::array({i.lo, i.hi});
}

synth::Interval interval_from_json(const json& j)
{
    if (!j.is_array() || j.size() != 2)
        throw json::type_error::create(302, "interval must be a two-element array", &j);
    return {j[0].get<double>(), j[1].get<double>()};
}

} // namespace

Bytes serialize_basis(const model::BasisSet& basis)
{
    const auto& lmk = basis.landmark_indices();
    Writer w;
    w.magic(basis_magic);
    w.uint<std::uint16_t>(basis_version);
    w.uint<std::uint32_t>(static_cast<std::uint32_t>(basis.num_vertices()));
    w.uint<std::uint16_t>(static_cast<std::uint16_t>(basis.d_id()));
    w.uint<std::uint16_t>(static_cast<std::uint16_t>(basis.d_exp()));
    for (std::uint32_t i : lmk)
        w.uint<std::uint32_t>(i);
    const auto& mean = basis.mean_shape();
    for (Eigen::Index i = 0; i < mean.size(); ++i)
        w.f32(mean.data()[i]);
    const auto& a = basis.basis();
    for (Eigen::Index i = 0; i < a.size(); ++i)
        w.f32(a.data()[i]);
    return w.take();
}

model::BasisSet parse_basis(const Bytes& bytes)
{
    Reader r(bytes);
    r.magic(basis_magic);
    const std::size_t version_at = r.offset();
    const auto version = r.uint<std::uint16_t>("version");
    if (version != basis_version)
        throw ParseError("version", version_at, "unsupported version " + std::to_string(version));
    const std::size_t n_at = r.offset();
    const std::uint64_t n = r.uint<std::uint32_t>("N");
    const std::uint64_t d_id = r.uint<std::uint16_t>("D_id");
    const std::uint64_t d_exp = r.uint<std::uint16_t>("D_exp");
    if (n == 0)
        throw ParseError("N", n_at, "vertex count must be positive");
    std::vector<std::uint32_t> lmk(model::num_landmarks);
    for (auto& i : lmk) {
        const std::size_t at = r.offset();
        i = r.uint<std::uint32_t>("landmarks");
        if (i >= n)
            throw ParseError("landmarks", at, "index " + std::to_string(i) + " out of range");
    }

    const std::uint64_t rows = 3 * n;
    const std::uint64_t floats = checked_mul(rows, 1 + d_id + d_exp, "payload", r.offset());
    r.expect_exact(checked_mul(floats, 4, "payload", r.offset()), "payload");

    Eigen::Matrix3Xd mean(3, static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < mean.size(); ++i)
        mean.data()[i] = r.f32("mean_shape");
    Eigen::MatrixXd id(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(d_id));
    for (Eigen::Index i = 0; i < id.size(); ++i)
        id.data()[i] = r.f32("basis_id");
    Eigen::MatrixXd ex(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(d_exp));
    for (Eigen::Index i = 0; i < ex.size(); ++i)
        ex.data()[i] = r.f32("basis_exp");
    try {
        return model::BasisSet(std::move(mean), std::move(id), std::move(ex), std::move(lmk));
    } catch (const std::logic_error& e) {
        throw ParseError("payload", 0, e.what());
    }
}

std::string serialize_params(const std::vector<model::ParamVec>& params)
{
    const int dim = params.empty() ? 0 : params.front().size();
    std::ostringstream os;
    os << "params," << params.size() << ',' << dim << '\n';
    for (const auto& p : params) {
        if (p.size() != dim)
            throw std::invalid_argument("serialize_params: records differ in dimension");
        if (p.normalized)
            throw std::invalid_argument("serialize_params: records must be denormalized");
        const Eigen::VectorXd f = p.flat();
        for (Eigen::Index i = 0; i < f.size(); ++i)
            os << (i ? "," : "") << format_double(f[i]);
        os << '\n';
    }
    return os.str();
}

std::vector<model::ParamVec> parse_params(const std::string& text)
{
    const auto lines = split_lines(text);
    if (lines.empty())
        throw ParseError("header", 1, "missing header");
    const auto head = split(lines[0], ',');
    if (head.size() != 3 || head[0] != "params")
        throw ParseError("header", 1, "expected 'params,<count>,<dim>'");
    const long long count = parse_int(head[1], "count", 1);
    const long long dim = parse_int(head[2], "dim", 1);
    if (count < 0 || (count > 0 && dim < 12))
        throw ParseError("header", 1, "invalid count or dimension");
    if (static_cast<std::size_t>(count) + 1 != lines.size())
        throw ParseError("count", 1,
                         "header declares " + std::to_string(count) + " records, found " +
                             std::to_string(lines.size() - 1));
    std::vector<model::ParamVec> out;
    out.reserve(static_cast<std::size_t>(count));
    for (std::size_t l = 1; l < lines.size(); ++l) {
        const auto cells = split(lines[l], ',');
        if (static_cast<long long>(cells.size()) != dim)
            throw ParseError("record", l + 1, "expected " + std::to_string(dim) + " values");
        Eigen::VectorXd f(dim);
        for (long long i = 0; i < dim; ++i)
            f[i] = parse_double(cells[static_cast<std::size_t>(i)], "value", l + 1);
        out.push_back(model::ParamVec::from_flat(f, false));
    }
    return out;
}

Bytes serialize_clips(const std::vector<synth::SyntheticClip>& clips)
{
    int width = 0, height = 0, pdim = 0, ldim = 0;
    for (const auto& c : clips) {
        if (!c.frames.empty()) {
            const auto& f = c.frames.front();
            width = f.image.width;
            height = f.image.height;
            pdim = f.p_gt.size();
            ldim = static_cast<int>(f.lmk_gt.size());
            break;
        }
    }
    Writer w;
    w.magic(clip_magic);
    w.uint<std::uint16_t>(clip_version);
    w.uint<std::uint32_t>(static_cast<std::uint32_t>(clips.size()));
    w.uint<std::uint32_t>(static_cast<std::uint32_t>(width));
    w.uint<std::uint32_t>(static_cast<std::uint32_t>(height));
    w.uint<std::uint32_t>(static_cast<std::uint32_t>(pdim));
    w.uint<std::uint32_t>(static_cast<std::uint32_t>(ldim));
    for (const auto& c : clips) {
        w.uint<std::uint64_t>(c.source_id);
        w.uint<std::uint32_t>(static_cast<std::uint32_t>(c.frames.size()));
        for (const auto& f : c.frames) {
            if (f.image.width != width || f.image.height != height || f.p_gt.size() != pdim ||
                f.lmk_gt.size() != ldim || f.image.pixels.size() != static_cast<Eigen::Index>(width) * height)
                throw std::invalid_argument("serialize_clips: frames differ in shape");
            if (f.p_gt.normalized)
                throw std::invalid_argument("serialize_clips: frame parameters must be denormalized");
            w.f64s(f.image.pixels.data(), f.image.pixels.size());
            const Eigen::VectorXd p = f.p_gt.flat();
            w.f64s(p.data(), p.size());
            w.f64s(f.lmk_gt.data(), f.lmk_gt.size());
        }
    }
    return w.take();
}

std::vector<synth::SyntheticClip> parse_clips(const Bytes& bytes)
{
    Reader r(bytes);
    r.magic(clip_magic);
    const std::size_t version_at = r.offset();
    const auto version = r.uint<std::uint16_t>("version");
    if (version != clip_version)
        throw ParseError("version", version_at, "unsupported version " + std::to_string(version));
    const std::uint64_t n_clips = r.uint<std::uint32_t>("clip_count");
    const std::uint64_t width = r.uint<std::uint32_t>("width");
    const std::uint64_t height = r.uint<std::uint32_t>("height");
    const std::size_t pdim_at = r.offset();
    const std::uint64_t pdim = r.uint<std::uint32_t>("param_dim");
    const std::uint64_t ldim = r.uint<std::uint32_t>("lmk_dim");
    const std::uint64_t pixels = checked_mul(width, height, "width", pdim_at);
    const std::uint64_t frame_bytes =
        checked_mul(pixels + pdim + ldim, 8, "frame", r.offset()); // u32 sums cannot overflow u64
    if (n_clips > 0 && pdim < 12)
        throw ParseError("param_dim", pdim_at, "parameter dimension below 12");
    // Every clip needs at least a 12-byte header; rejects absurd counts before reserving.
    if (n_clips > r.remaining() / 12)
        throw ParseError("clip_count", r.offset(), "more clips declared than bytes available");

    std::vector<synth::SyntheticClip> clips;
    clips.reserve(static_cast<std::size_t>(n_clips));
    for (std::uint64_t c = 0; c < n_clips; ++c) {
        synth::SyntheticClip clip;
        clip.source_id = r.uint<std::uint64_t>("source_id");
        const std::size_t frames_at = r.offset();
        const std::uint64_t n_frames = r.uint<std::uint32_t>("frame_count");
        if (checked_mul(n_frames, frame_bytes, "frame_count", frames_at) > r.remaining())
            throw ParseError("frame_count", frames_at, "truncated: frames exceed remaining bytes");
        clip.frames.resize(static_cast<std::size_t>(n_frames));
        for (auto& f : clip.frames) {
            f.image.width = static_cast<int>(width);
            f.image.height = static_cast<int>(height);
            f.image.pixels.resize(static_cast<Eigen::Index>(pixels));
            r.f64s(f.image.pixels.data(), f.image.pixels.size(), "pixels");
            Eigen::VectorXd p(static_cast<Eigen::Index>(pdim));
            r.f64s(p.data(), p.size(), "params");
            f.p_gt = model::ParamVec::from_flat(p, false);
            f.lmk_gt.resize(static_cast<Eigen::Index>(ldim));
            r.f64s(f.lmk_gt.data(), f.lmk_gt.size(), "landmarks");
        }
        clips.push_back(std::move(clip));
    }
    r.expect_end();
    return clips;
}

Bytes serialize_weights(const nn::RegressorWeights& w)
{
    w.validate();
    Writer out;
    out.magic(weights_magic);
    out.uint<std::uint16_t>(weights_version);
    out.uint<std::uint8_t>(static_cast<std::uint8_t>(w.activation));
    out.uint<std::uint32_t>(static_cast<std::uint32_t>(w.input_dim()));
    out.uint<std::uint32_t>(static_cast<std::uint32_t>(w.hidden_dim()));
    out.uint<std::uint32_t>(static_cast<std::uint32_t>(w.param_dim()));
    out.uint<std::uint32_t>(static_cast<std::uint32_t>(w.lmk_dim()));
    out.uint<std::uint64_t>(w.generation);
    out.f64s(w.W1.data(), w.W1.size());
    out.f64s(w.b1.data(), w.b1.size());
    out.f64s(w.W_param.data(), w.W_param.size());
    out.f64s(w.b_param.data(), w.b_param.size());
    out.f64s(w.W_lmk.data(), w.W_lmk.size());
    out.f64s(w.b_lmk.data(), w.b_lmk.size());
    return out.take();
}

nn::RegressorWeights parse_weights(const Bytes& bytes)
{
    Reader r(bytes);
    r.magic(weights_magic);
    const std::size_t version_at = r.offset();
    const auto version = r.uint<std::uint16_t>("version");
    if (version != weights_version)
        throw ParseError("version", version_at, "unsupported version " + std::to_string(version));
    const std::size_t act_at = r.offset();
    const auto act = r.uint<std::uint8_t>("activation");
    if (act != static_cast<std::uint8_t>(nn::Activation::relu))
        throw ParseError("activation", act_at, "unknown activation " + std::to_string(act));
    const std::size_t dims_at = r.offset();
    const std::uint64_t in = r.uint<std::uint32_t>("input_dim");
    const std::uint64_t hid = r.uint<std::uint32_t>("hidden_dim");
    const std::uint64_t pd = r.uint<std::uint32_t>("param_dim");
    const std::uint64_t ld = r.uint<std::uint32_t>("lmk_dim");
    if (in == 0 || hid == 0 || pd == 0 || ld == 0)
        throw ParseError("dims", dims_at, "dimensions must be positive");
    nn::RegressorWeights w;
    w.activation = nn::Activation::relu;
    w.generation = r.uint<std::uint64_t>("generation");
    const std::uint64_t scalars = checked_mul(hid, in + 1, "dims", dims_at) +
                                  checked_mul(pd + ld, hid + 1, "dims", dims_at);
    r.expect_exact(checked_mul(scalars, 8, "dims", dims_at), "payload");

    const auto I = static_cast<Eigen::Index>(in), H = static_cast<Eigen::Index>(hid);
    const auto P = static_cast<Eigen::Index>(pd), L = static_cast<Eigen::Index>(ld);
    w.W1.resize(H, I);
    w.b1.resize(H);
    w.W_param.resize(P, H);
    w.b_param.resize(P);
    w.W_lmk.resize(L, H);
    w.b_lmk.resize(L);
    r.f64s(w.W1.data(), w.W1.size(), "W1");
    r.f64s(w.b1.data(), w.b1.size(), "b1");
    r.f64s(w.W_param.data(), w.W_param.size(), "W_param");
    r.f64s(w.b_param.data(), w.b_param.size(), "b_param");
    r.f64s(w.W_lmk.data(), w.W_lmk.size(), "W_lmk");
    r.f64s(w.b_lmk.data(), w.b_lmk.size(), "b_lmk");
    try {
        w.validate();
    } catch (const std::logic_error& e) {
        throw ParseError("payload", dims_at, e.what());
    }
    return w;
}

std::string serialize_report(const metrics::EvalReport& report)
{
    json j;
    j["nme_mean"] = report.nme_mean;
    j["per_sample_nme"] = report.per_sample_nme;
    j["normalizer_kind"] = metrics::to_string(report.normalizer_kind);
    j["stability"] = report.stability ? json(*report.stability) : json(nullptr);
    return j.dump(2) + "\n";
}

metrics::EvalReport parse_report(const std::string& text)
{
    metrics::EvalReport r;
    const char* field = "document";
    try {
        const json j = json::parse(text);
        field = "nme_mean";
        r.nme_mean = j.at("nme_mean").get<double>();
        field = "per_sample_nme";
        r.per_sample_nme = j.at("per_sample_nme").get<std::vector<double>>();
        field = "normalizer_kind";
        r.normalizer_kind = metrics::normalizer_from_string(j.at("normalizer_kind").get<std::string>());
        field = "stability";
        if (j.contains("stability") && !j.at("stability").is_null())
            r.stability = j.at("stability").get<double>();
    } catch (const json::parse_error& e) {
        throw ParseError(field, e.byte, e.what());
    } catch (const std::exception& e) {
        throw ParseError(field, 0, e.what());
    }
    return r;
}

std::string serialize_manifest(const DatasetManifest& m)
{
    const auto& p = m.prior;
    const auto& g = m.ranges;
    json j;
    j["seed"] = m.seed;
    j["count"] = m.count;
    j["prior"] = {{"base_scale", p.base_scale},
                  {"scale_range", interval_to_json(p.scale_range)},
                  {"yaw_deg", interval_to_json(p.yaw)},
                  {"pitch_deg", interval_to_json(p.pitch)},
                  {"roll_deg", interval_to_json(p.roll)},
                  {"center_jitter", p.center_jitter},
                  {"alpha_std", p.alpha_std},
                  {"image_size", p.image_size}};
    j["ranges"] = {{"scale", interval_to_json(g.scale)},
                   {"rot_inplane_deg", interval_to_json(g.rot_inplane)},
                   {"trans_px", interval_to_json(g.trans)},
                   {"yaw_deg", interval_to_json(g.yaw)},
                   {"pitch_deg", interval_to_json(g.pitch)},
                   {"noise_sigma", g.noise_sigma},
                   {"blur_len", g.blur_len},
                   {"n_frames", g.n_frames}};
    j["stats"] = {{"mu", vec_to_json(m.stats.mu)}, {"sigma", vec_to_json(m.stats.sigma)}};
    j["params_file"] = m.params_file;
    return j.dump(2) + "\n";
}

DatasetManifest parse_manifest(const std::string& text)
{
    DatasetManifest m;
    const char* field = "document";
    try {
        const json j = json::parse(text);
        field = "seed";
        m.seed = j.at("seed").get<std::uint64_t>();
        field = "count";
        m.count = j.at("count").get<std::size_t>();
        field = "prior";
        const json& p = j.at("prior");
        m.prior.base_scale = p.at("base_scale").get<double>();
        m.prior.scale_range = interval_from_json(p.at("scale_range"));
        m.prior.yaw = interval_from_json(p.at("yaw_deg"));
        m.prior.pitch = interval_from_json(p.at("pitch_deg"));
        m.prior.roll = interval_from_json(p.at("roll_deg"));
        m.prior.center_jitter = p.at("center_jitter").get<double>();
        m.prior.alpha_std = p.at("alpha_std").get<double>();
        m.prior.image_size = p.at("image_size").get<int>();
        field = "ranges";
        const json& g = j.at("ranges");
        m.ranges.scale = interval_from_json(g.at("scale"));
        m.ranges.rot_inplane = interval_from_json(g.at("rot_inplane_deg"));
        m.ranges.trans = interval_from_json(g.at("trans_px"));
        m.ranges.yaw = interval_from_json(g.at("yaw_deg"));
        m.ranges.pitch = interval_from_json(g.at("pitch_deg"));
        m.ranges.noise_sigma = g.at("noise_sigma").get<double>();
        m.ranges.blur_len = g.at("blur_len").get<int>();
        m.ranges.n_frames = g.at("n_frames").get<int>();
        field = "stats";
        m.stats.mu = vec_from_json(j.at("stats").at("mu"));
        m.stats.sigma = vec_from_json(j.at("stats").at("sigma"));
        field = "params_file";
        m.params_file = j.at("params_file").get<std::string>();
    } catch (const json::parse_error& e) {
        throw ParseError(field, e.byte, e.what());
    } catch (const std::exception& e) {
        throw ParseError(field, 0, e.what());
    }
    if (m.count == 0)
        throw ParseError("count", 0, "sample count must be positive");
    try {
        m.stats.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError("stats", 0, e.what());
    }
    return m;
}

std::string serialize_curve(const std::vector<CurveRow>& rows)
{
    std::ostringstream os;
    os << "iteration,vertex_error\n";
    for (const auto& r : rows)
        os << r.iteration << ',' << format_double(r.vertex_error) << '\n';
    return os.str();
}

std::vector<CurveRow> parse_curve(const std::string& text)
{
    const auto lines = split_lines(text);
    if (lines.empty() || lines.front() != "iteration,vertex_error")
        throw ParseError("header", 1, "expected 'iteration,vertex_error'");
    std::vector<CurveRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty())
            continue;
        const auto cells = split(lines[i], ',');
        if (cells.size() != 2)
            throw ParseError("row", i + 1, "expected 2 cells");
        rows.push_back({static_cast<int>(parse_int(cells[0], "iteration", i + 1)),
                        parse_double(cells[1], "vertex_error", i + 1)});
    }
    return rows;
}

Bytes read_bytes(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open '" + path + "' for reading");
    return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_bytes(const std::string& path, const Bytes& bytes)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw std::runtime_error("write to '" + path + "' failed");
}

std::string read_text(const std::string& path)
{
    const Bytes b = read_bytes(path);
    return std::string(b.begin(), b.end());
}

void write_text(const std::string& path, const std::string& text)
{
    write_bytes(path, Bytes(text.begin(), text.end()));
}

} /* namespace io */
} /* namespace facereg */
