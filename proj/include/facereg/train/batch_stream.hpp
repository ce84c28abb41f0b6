/*
 * facereg - 3D morphable model parameter regression toolkit.
 *
 * File: include/facereg/train/batch_stream.hpp
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

#ifndef FACEREG_TRAIN_BATCH_STREAM_HPP
#define FACEREG_TRAIN_BATCH_STREAM_HPP

#include "facereg/synth/video_synthesis.hpp"
#include "facereg/train/objective.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace facereg {
namespace train {

/// Source of mini-batches. A group of batches never shares a still sample.
class BatchStream
{
public:
    virtual ~BatchStream() = default;

    /// `count` mutually disjoint batches, or nullopt once the stream is exhausted.
    virtual std::optional<std::vector<Batch>> next_group(int count) = 0;

    std::optional<Batch> next();
};

/**
 * Epoch-shuffled batches over a fixed pool of stills. With short-video
 * synthesis enabled every batch holds batch_size / n_frames stills, each
 * expanded into a contiguous clip of n_frames samples.
 */
class PoolStream : public BatchStream
{
public:
    PoolStream(const std::vector<Sample>& pool, int batch_size, std::uint64_t seed);

    /// Turns on clip expansion; batch_size must be a multiple of ranges.n_frames.
    void enable_synthesis(const model::BasisSet& basis, const synth::PerturbRanges& ranges);

    /// Stop after this many batches in total.
    void set_limit(std::size_t max_batches) { limit_ = max_batches; }

    std::optional<std::vector<Batch>> next_group(int count) override;

    std::size_t batches_served() const { return served_; }

private:
    std::vector<std::size_t> take(std::size_t n);
    Batch build(const std::vector<std::size_t>& stills);

    const std::vector<Sample>& pool_;
    int batch_size_;
    std::mt19937_64 rng_;
    std::vector<std::size_t> order_;
    std::size_t cursor_ = 0;
    std::optional<std::size_t> limit_;
    std::size_t served_ = 0;
    const model::BasisSet* basis_ = nullptr;
    synth::PerturbRanges ranges_;
};

} /* namespace train */
} /* namespace facereg */

#endif /* FACEREG_TRAIN_BATCH_STREAM_HPP */
