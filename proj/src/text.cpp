/*
 * facereg - 3D morphable model parameter regression toolkit.
 *
 * File: src/text.cpp
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
#include "facereg/io/text.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace facereg {
namespace io {

ParseError::ParseError(std::string field, std::size_t offset, const std::string& what)
    : std::runtime_error("parse error in field '" + field + "' at offset " + std::to_string(offset) + ": " + what),
      field_(std::move(field)), offset_(offset)
{
}

std::string format_double(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double parse_double(std::string_view token, const std::string& field, std::size_t line)
{
    const std::string s(token);
    if (s.empty())
        throw ParseError(field, line, "empty number");
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    // Underflow to a subnormal also sets ERANGE; only overflow is an error.
    if (end != s.c_str() + s.size() || (errno == ERANGE && std::isinf(v)))
        throw ParseError(field, line, "not a number: '" + s + "'");
    return v;
}

long long parse_int(std::string_view token, const std::string& field, std::size_t line)
{
    const std::string s(token);
    if (s.empty())
        throw ParseError(field, line, "empty integer");
    char* end = nullptr;
    errno = 0;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (end != s.c_str() + s.size() || errno == ERANGE)
        throw ParseError(field, line, "not an integer: '" + s + "'");
    return v;
}

std::vector<std::string_view> split(std::string_view line, char delim)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(delim, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::vector<std::string_view> split_lines(std::string_view text)
{
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t pos = text.find('\n', start);
        if (pos == std::string_view::npos)
            pos = text.size();
        std::string_view l = text.substr(start, pos - start);
        if (!l.empty() && l.back() == '\r')
            l.remove_suffix(1);
        lines.push_back(l);
        start = pos + 1;
    }
    return lines;
}

} /* namespace io */
} /* namespace facereg */
