#pragma once

#include <stdexcept>
#include <string>

namespace bubbleuq {

/// Raised for invalid arguments or violated preconditions.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when an input file or stream is malformed. `offset()` names the
/// byte (PGM) or line (CSV) where parsing failed.
class FormatError : public std::runtime_error {
public:
    FormatError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " (at offset " + std::to_string(offset) + ")"),
          offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

} // namespace bubbleuq
