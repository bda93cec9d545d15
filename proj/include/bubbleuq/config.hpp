#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace bubbleuq {

/// "start:stop:step" (stop included when hit within 1e-9 of a step) or a
/// comma list "5,10,12.6". Throws ArgumentError.
std::vector<double> parse_range(std::string_view text);

/// Same, integer milestones.
std::vector<std::uint64_t> parse_milestones(std::string_view text);

/// `key = value` lines; '#' starts a comment; later keys override earlier
/// ones. Throws FormatError with the line number.
std::map<std::string, std::string> parse_config(std::istream& in);
std::map<std::string, std::string> load_config_file(const std::string& path);

} // namespace bubbleuq
