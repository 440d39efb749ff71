#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace geosat {

/// Malformed input text. `line` is 1-based (a row number for CSV input).
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_{line}
    {
    }

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace geosat
