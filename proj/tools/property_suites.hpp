/*
 * facereg - 3D morphable model parameter regression toolkit.
 *
 * File: tools/property_suites.hpp
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

#ifndef FACEREG_TOOLS_PROPERTY_SUITES_HPP
#define FACEREG_TOOLS_PROPERTY_SUITES_HPP

#include <cstdint>
#include <string>

namespace facereg {
namespace checks {

struct SuiteResult
{
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

/// fwpdc against the brute-force weighted distance over a grid of basis sizes.
SuiteResult fwpdc_equivalence(int instances, std::uint64_t seed);

struct BenchResult
{
    double naive_ms = 0.0; ///< median batch time
    double fast_ms = 0.0;
    double speedup = 0.0;
    double max_rel_deviation = 0.0;
};

/// Median-of-`repeats` batch timing of wpdc_naive versus fwpdc.
BenchResult bench_fwpdc(int num_vertices, int num_alpha, int batch, int repeats, std::uint64_t seed);

/// Analytic gradients of every loss and of the end-to-end network against central differences.
SuiteResult gradient_integrity(int instances_per_family, std::uint64_t seed);

/// Label consistency, photometric invariance and in-plane commutation of synthesized clips.
SuiteResult synthesis_consistency(int clips, std::uint64_t seed);

/// Hand-computed metric examples and invariances.
SuiteResult metric_sanity();

/// Fuzzed and truncated basis containers plus round-trips of every format.
SuiteResult format_robustness(int fuzz_inputs, std::uint64_t seed);

} /* namespace checks */
} /* namespace facereg */

#endif /* FACEREG_TOOLS_PROPERTY_SUITES_HPP */
