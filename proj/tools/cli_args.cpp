#include "cli_args.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

namespace geosat::cli {

namespace {

std::vector<std::string_view> split(std::string_view text, char sep)
{
    std::vector<std::string_view> parts;
    for (;;) {
        const auto pos = text.find(sep);
        parts.push_back(text.substr(0, pos));
        if (pos == std::string_view::npos) {
            return parts;
        }
        text.remove_prefix(pos + 1);
    }
}

template <typename T>
T number(std::string_view text)
{
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        throw std::invalid_argument(fmt::format("'{}' is not a valid number", text));
    }
    return value;
}

} // namespace

std::vector<std::uint32_t> parse_uint_list(std::string_view text)
{
    std::vector<std::uint32_t> values;
    for (const auto item : split(text, ',')) {
        const auto range = split(item, ':');
        if (range.size() == 1) {
            values.push_back(number<std::uint32_t>(item));
            continue;
        }
        if (range.size() > 3) {
            throw std::invalid_argument(fmt::format("bad range '{}'", item));
        }
        const auto lo = number<std::uint32_t>(range[0]);
        const auto hi = number<std::uint32_t>(range[1]);
        const auto step = range.size() == 3 ? number<std::uint32_t>(range[2]) : 1u;
        if (step == 0 || hi < lo) {
            throw std::invalid_argument(fmt::format("bad range '{}'", item));
        }
        for (std::uint64_t v = lo; v <= hi; v += step) {
            values.push_back(static_cast<std::uint32_t>(v));
        }
    }
    return values;
}

std::vector<double> parse_real_list(std::string_view text)
{
    std::vector<double> values;
    for (const auto item : split(text, ',')) {
        const auto range = split(item, ':');
        if (range.size() == 1) {
            values.push_back(number<double>(item));
            continue;
        }
        if (range.size() != 3) {
            throw std::invalid_argument(fmt::format("bad range '{}' (expected a:b:step)", item));
        }
        const auto lo = number<double>(range[0]);
        const auto hi = number<double>(range[1]);
        const auto step = number<double>(range[2]);
        if (!(step > 0.0) || hi < lo || !std::isfinite(lo) || !std::isfinite(hi)) {
            throw std::invalid_argument(fmt::format("bad range '{}'", item));
        }
        const auto count = static_cast<std::uint64_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
        for (std::uint64_t i = 0; i < count; ++i) {
            values.push_back(std::round((lo + static_cast<double>(i) * step) * 1e9) / 1e9);
        }
    }
    return values;
}

std::vector<std::optional<std::uint32_t>> parse_dimension_list(std::string_view text)
{
    std::vector<std::optional<std::uint32_t>> dims;
    for (const auto item : split(text, ',')) {
        if (item == "uniform") {
            dims.emplace_back(std::nullopt);
            continue;
        }
        for (const auto d : parse_uint_list(item)) {
            if (d == 0) {
                throw std::invalid_argument("dimension must be at least 1");
            }
            dims.emplace_back(d);
        }
    }
    return dims;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag)
{
    if (flag) {
        return *flag;
    }
    if (const char* env = std::getenv("GEOSAT_SEED"); env != nullptr && *env != '\0') {
        try {
            return number<std::uint64_t>(env);
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument(fmt::format("GEOSAT_SEED='{}' is not an unsigned integer", env));
        }
    }
    std::random_device device;
    return (static_cast<std::uint64_t>(device()) << 32) | device();
}

std::string instance_file_name(std::string_view model, std::uint32_t k, std::uint32_t n, std::uint32_t m,
                               std::optional<std::uint32_t> dimension, std::uint64_t seed,
                               std::uint32_t index)
{
    return fmt::format("inst_{}_k{}_n{}_m{}{}_s{}_i{}.cnf", model, k, n, m,
                       dimension ? fmt::format("_d{}", *dimension) : std::string{}, seed, index);
}

} // namespace geosat::cli
