#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace bubbleuq {

/// Shortest decimal text that parses back to exactly `v`. Non-finite values
/// print as "inf", "-inf" or "nan".
std::string format_double(double v);

/// Strict full-string parse; surrounding ASCII whitespace is ignored.
std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_int(std::string_view text);

std::string_view trim(std::string_view s);

} // namespace bubbleuq
