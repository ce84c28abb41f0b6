/*
 * facereg - 3D morphable model parameter regression toolkit.
 *
 * File: include/facereg/io/formats.hpp
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

#ifndef FACEREG_IO_FORMATS_HPP
#define FACEREG_IO_FORMATS_HPP

#include "facereg/io/dataset.hpp"
#include "facereg/io/text.hpp"
#include "facereg/metrics/alignment_error.hpp"
#include "facereg/model/morphable_model.hpp"
#include "facereg/nn/regressor.hpp"
#include "facereg/synth/video_synthesis.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace facereg {
namespace io {

using Bytes = std::vector<std::uint8_t>;

/*
 * Basis container, little-endian:
 *   "M3DM" | version u16 | N u32 | D_id u16 | D_exp u16 | 68 x u32 landmarks |
 *   f32 mean (3N) | f32 basis_id (3N x D_id, column-major) | f32 basis_exp.
 * Coordinates are stored vertex-interleaved (x0 y0 z0 x1 ...).
 */
inline constexpr std::uint16_t basis_version = 1;

/// Values are narrowed to f32; bases produced by generate_synthetic_basis are f32-exact.
Bytes serialize_basis(const model::BasisSet& basis);
model::BasisSet parse_basis(const Bytes& bytes);

/// Text records: header "params,<count>,<dim>", then one row of %.17g values per ParamVec.
std::string serialize_params(const std::vector<model::ParamVec>& params);
std::vector<model::ParamVec> parse_params(const std::string& text);

/*
 * Clip container, little-endian f64 payload:
 *   "M3CL" | version u16 | clip count u32 | width u32 | height u32 | param dim u32 | lmk dim u32 |
 *   per clip: source_id u64 | frame count u32 | per frame: pixels, flat params, landmarks.
 */
Bytes serialize_clips(const std::vector<synth::SyntheticClip>& clips);
std::vector<synth::SyntheticClip> parse_clips(const Bytes& bytes);

/*
 * Weight checkpoint, little-endian f64 payload:
 *   "M3RW" | version u16 | activation u8 | input u32 | hidden u32 | param u32 | lmk u32 | generation u64 |
 *   W1 b1 W_param b_param W_lmk b_lmk (column-major).
 */
Bytes serialize_weights(const nn::RegressorWeights& w);
nn::RegressorWeights parse_weights(const Bytes& bytes);

std::string serialize_report(const metrics::EvalReport& report);
metrics::EvalReport parse_report(const std::string& text);

std::string serialize_manifest(const DatasetManifest& manifest);
DatasetManifest parse_manifest(const std::string& text);

/// "iteration,vertex_error" rows.
struct CurveRow
{
    int iteration = 0;
    double vertex_error = 0.0;
};
std::string serialize_curve(const std::vector<CurveRow>& rows);
std::vector<CurveRow> parse_curve(const std::string& text);

/// Throws std::runtime_error when the file cannot be opened or written.
Bytes read_bytes(const std::string& path);
void write_bytes(const std::string& path, const Bytes& bytes);
std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

} /* namespace io */
} /* namespace facereg */

#endif /* FACEREG_IO_FORMATS_HPP */
