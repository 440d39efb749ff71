#pragma once

// Line and token scanning shared by the text readers.

#include <charconv>
#include <cstdint>
#include <istream>
#include <iterator>
#include <optional>
#include <string>
#include <string_view>

namespace geosat::detail {

inline std::string slurp(std::istream& in)
{
    return std::string{std::istreambuf_iterator<char>{in}, std::istreambuf_iterator<char>{}};
}

/// Yields lines without their terminator (a trailing '\r' is dropped too).
class LineReader {
public:
    explicit LineReader(std::string_view text) : text_{text} {}

    std::optional<std::string_view> next()
    {
        if (pos_ >= text_.size()) {
            return std::nullopt;
        }
        const auto end = text_.find('\n', pos_);
        const auto stop = end == std::string_view::npos ? text_.size() : end;
        auto line = text_.substr(pos_, stop - pos_);
        pos_ = stop + 1;
        ++number_;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        return line;
    }

    [[nodiscard]] std::size_t number() const noexcept { return number_; }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t number_ = 0;
};

inline bool is_space(char c) noexcept
{
    return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v';
}

/// Splits a line into whitespace-separated tokens.
class Tokens {
public:
    explicit Tokens(std::string_view line) : line_{line} {}

    std::optional<std::string_view> next()
    {
        while (pos_ < line_.size() && is_space(line_[pos_])) {
            ++pos_;
        }
        if (pos_ >= line_.size()) {
            return std::nullopt;
        }
        const auto start = pos_;
        while (pos_ < line_.size() && !is_space(line_[pos_])) {
            ++pos_;
        }
        return line_.substr(start, pos_ - start);
    }

private:
    std::string_view line_;
    std::size_t pos_ = 0;
};

template <typename Int>
std::optional<Int> parse_int(std::string_view token)
{
    Int value{};
    const auto* first = token.data();
    const auto* last = token.data() + token.size();
    if (!token.empty() && token.front() == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || first == last) {
        return std::nullopt;
    }
    return value;
}

inline std::string_view trim(std::string_view s) noexcept
{
    while (!s.empty() && is_space(s.front())) {
        s.remove_prefix(1);
    }
    while (!s.empty() && is_space(s.back())) {
        s.remove_suffix(1);
    }
    return s;
}

} // namespace geosat::detail
