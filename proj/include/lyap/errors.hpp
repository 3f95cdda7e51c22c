#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lyap {

/// Syntax error in an expression or polynomial text. `offset` is the 0-based
/// byte position of the offending token (text.size() for premature end).
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t offset)
        : std::runtime_error(message + " (offset " + std::to_string(offset) + ")"),
          offset_(offset) {}

    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Evaluation left the function's domain (ln of a non-positive value,
/// negative base raised to a fractional power, non-finite result, ...).
class EvalDomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace lyap
