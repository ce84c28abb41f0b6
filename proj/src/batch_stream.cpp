/*
 * facereg - 3D morphable model parameter regression toolkit.
 *
 * File: src/batch_stream.cpp
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
#include "facereg/train/batch_stream.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace facereg {
namespace train {

std::optional<Batch> BatchStream::next()
{
    auto group = next_group(1);
    if (!group)
        return std::nullopt;
    return std::move(group->front());
}

PoolStream::PoolStream(const std::vector<Sample>& pool, int batch_size, std::uint64_t seed)
    : pool_(pool), batch_size_(batch_size), rng_(seed)
{
    if (pool_.empty())
        throw std::invalid_argument("PoolStream: empty pool");
    if (batch_size_ <= 0)
        throw std::invalid_argument("PoolStream: batch size must be positive");
    order_.resize(pool_.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::shuffle(order_.begin(), order_.end(), rng_);
}

void PoolStream::enable_synthesis(const model::BasisSet& basis, const synth::PerturbRanges& ranges)
{
    ranges.validate();
    if (batch_size_ % ranges.n_frames != 0)
        throw std::invalid_argument("PoolStream: batch size " + std::to_string(batch_size_) +
                                    " is not a multiple of the clip length " + std::to_string(ranges.n_frames));
    basis_ = &basis;
    ranges_ = ranges;
}

std::vector<std::size_t> PoolStream::take(std::size_t n)
{
    if (n > pool_.size())
        throw std::invalid_argument("PoolStream: a disjoint group of " + std::to_string(n) +
                                    " stills does not fit into a pool of " + std::to_string(pool_.size()));
    if (cursor_ + n > order_.size()) {
        std::shuffle(order_.begin(), order_.end(), rng_);
        cursor_ = 0;
    }
    std::vector<std::size_t> out(order_.begin() + static_cast<std::ptrdiff_t>(cursor_),
                                 order_.begin() + static_cast<std::ptrdiff_t>(cursor_ + n));
    cursor_ += n;
    return out;
}

Batch PoolStream::build(const std::vector<std::size_t>& stills)
{
    Batch batch;
    batch.reserve(static_cast<std::size_t>(batch_size_));
    if (!basis_) {
        for (auto idx : stills)
            batch.push_back(pool_[idx]);
        return batch;
    }
    const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(pool_.front().image.size()))));
    for (auto idx : stills) {
        const synth::SyntheticClip clip =
            synth::synthesize_clip(*basis_, pool_[idx].p_gt, ranges_, rng_, pool_[idx].id, side, side);
        for (const auto& f : clip.frames)
            batch.push_back(Sample{f.image.pixels, f.p_gt, f.lmk_gt, pool_[idx].id});
    }
    return batch;
}

std::optional<std::vector<Batch>> PoolStream::next_group(int count)
{
    if (count <= 0)
        throw std::invalid_argument("PoolStream: group size must be positive");
    if (limit_ && served_ + static_cast<std::size_t>(count) > *limit_)
        return std::nullopt;
    const std::size_t per_batch =
        basis_ ? static_cast<std::size_t>(batch_size_ / ranges_.n_frames) : static_cast<std::size_t>(batch_size_);
    const std::vector<std::size_t> all = take(per_batch * static_cast<std::size_t>(count));
    std::vector<Batch> group;
    group.reserve(static_cast<std::size_t>(count));
    for (int b = 0; b < count; ++b) {
        std::vector<std::size_t> stills(all.begin() + static_cast<std::ptrdiff_t>(b * per_batch),
                                        all.begin() + static_cast<std::ptrdiff_t>((b + 1) * per_batch));
        group.push_back(build(stills));
    }
    served_ += static_cast<std::size_t>(count);
    return group;
}

} /* namespace train */
} /* namespace facereg */
