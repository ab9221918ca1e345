// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rerisk::detail {

// RFC 4180 reader: quoted fields, doubled quotes, LF or CRLF line ends.
// A leading UTF-8 BOM is skipped. Throws MalformedInput on an unterminated
// quote, naming the line.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

// Quotes the field when it contains a separator, quote or line break.
std::string csv_field(std::string_view value);
std::string csv_row(const std::vector<std::string>& fields);

}  // namespace rerisk::detail
