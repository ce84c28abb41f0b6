/*
 * facereg - 3D morphable model parameter regression toolkit.
 *
 * File: src/meta_joint.cpp
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
#include "facereg/meta/meta_joint.hpp"

#include "facereg/io/text.hpp"

#include <sstream>
#include <stdexcept>

namespace facereg {
namespace meta {

namespace {

const char* const trace_header = "outer_iteration,chosen,meta_test_error_f,meta_test_error_v";

LearnerState rollout(LearnerState s, const std::vector<train::Batch>& batches, int k, train::ParamLoss loss,
                     bool lrr, const nn::SgdConfig& sgd, const train::LossContext& ctx)
{
    train::ObjectiveConfig obj;
    obj.loss = loss;
    obj.lrr = lrr;
    for (int j = 0; j < k; ++j) {
        const train::BatchObjective o = train::evaluate_objective(s.weights, batches[static_cast<std::size_t>(j)], ctx, obj);
        s.weights = nn::sgd_step(s.weights, o.grads, sgd, s.velocity);
    }
    return s;
}

} // namespace

std::string to_string(Choice c)
{
    return c == Choice::fwpdc ? "FWPDC" : "VDC";
}

Choice choice_from_string(const std::string& s)
{
    if (s == "FWPDC")
        return Choice::fwpdc;
    if (s == "VDC")
        return Choice::vdc;
    throw std::invalid_argument("unknown selector choice '" + s + "'");
}

Choice select(double meta_test_error_f, double meta_test_error_v)
{
    return meta_test_error_v < meta_test_error_f ? Choice::vdc : Choice::fwpdc;
}

LearnerState LearnerState::fresh(nn::RegressorWeights w)
{
    LearnerState s;
    s.velocity = nn::zeros_like(w);
    s.weights = std::move(w);
    return s;
}

void MetaConfig::validate() const
{
    if (k < 1)
        throw std::invalid_argument("MetaConfig: k must be at least 1");
    sgd_f.validate();
    sgd_v.validate();
}

std::optional<MetaStepResult> meta_joint_step(const LearnerState& state, train::BatchStream& stream,
                                              const MetaConfig& cfg, const train::LossContext& ctx,
                                              int outer_iteration)
{
    cfg.validate();
    auto group = stream.next_group(cfg.k + 1);
    if (!group)
        return std::nullopt;
    train::Batch meta_test = std::move(group->back());
    group->pop_back();

    // Fixed order: the fWPDC branch first, then the VDC branch.
    LearnerState f = rollout(state, *group, cfg.k, cfg.loss_f, cfg.lrr_enabled, cfg.sgd_f, ctx);
    LearnerState v = rollout(state, *group, cfg.k, cfg.loss_v, cfg.lrr_enabled, cfg.sgd_v, ctx);

    MetaStepResult out;
    out.record.outer_iteration = outer_iteration;
    out.record.meta_test_error_f = train::mean_vdc(f.weights, meta_test, ctx);
    out.record.meta_test_error_v = train::mean_vdc(v.weights, meta_test, ctx);
    out.record.chosen = select(out.record.meta_test_error_f, out.record.meta_test_error_v);
    out.state = out.record.chosen == Choice::fwpdc ? std::move(f) : std::move(v);
    out.meta_test = std::move(meta_test);
    return out;
}

std::string export_trace(const SelectorTrace& trace)
{
    std::ostringstream os;
    os << trace_header << '\n';
    for (const auto& r : trace) {
        os << r.outer_iteration << ',' << to_string(r.chosen) << ',' << io::format_double(r.meta_test_error_f) << ','
           << io::format_double(r.meta_test_error_v) << '\n';
    }
    return os.str();
}

SelectorTrace parse_trace(const std::string& text)
{
    const auto lines = io::split_lines(text);
    if (lines.empty() || lines.front() != trace_header)
        throw io::ParseError("header", 1, "expected '" + std::string(trace_header) + "'");
    SelectorTrace trace;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty())
            continue;
        const auto cells = io::split(lines[i], ',');
        if (cells.size() != 4)
            throw io::ParseError("row", i + 1, "expected 4 cells, found " + std::to_string(cells.size()));
        SelectorRecord r;
        r.outer_iteration = static_cast<int>(io::parse_int(cells[0], "outer_iteration", i + 1));
        try {
            r.chosen = choice_from_string(std::string(cells[1]));
        } catch (const std::invalid_argument& e) {
            throw io::ParseError("chosen", i + 1, e.what());
        }
        r.meta_test_error_f = io::parse_double(cells[2], "meta_test_error_f", i + 1);
        r.meta_test_error_v = io::parse_double(cells[3], "meta_test_error_v", i + 1);
        trace.push_back(r);
    }
    return trace;
}

} /* namespace meta */
} /* namespace facereg */
