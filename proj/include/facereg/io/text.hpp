/*
 * facereg - 3D morphable model parameter regression toolkit.
 *
 * File: include/facereg/io/text.hpp
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

#ifndef FACEREG_IO_TEXT_HPP
#define FACEREG_IO_TEXT_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace facereg {
namespace io {

/**
 * Typed parse failure. `field` names the element being decoded and `offset`
 * is the byte offset (binary formats) or line number (text formats).
 */
class ParseError : public std::runtime_error
{
public:
    ParseError(std::string field, std::size_t offset, const std::string& what);

    const std::string& field() const { return field_; }
    std::size_t offset() const { return offset_; }

private:
    std::string field_;
    std::size_t offset_;
};

/// 17 significant digits; parses back to the identical double.
std::string format_double(double x);

/// Strict decimal parse of the whole token.
double parse_double(std::string_view token, const std::string& field, std::size_t line);

long long parse_int(std::string_view token, const std::string& field, std::size_t line);

std::vector<std::string_view> split(std::string_view line, char delim);

/// Lines without their terminators; a trailing empty line is dropped.
std::vector<std::string_view> split_lines(std::string_view text);

} /* namespace io */
} /* namespace facereg */

#endif /* FACEREG_IO_TEXT_HPP */
