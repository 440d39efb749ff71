#pragma once

// Value-list parsing shared by the geosat subcommands.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace geosat::cli {

/// Comma-separated integers and inclusive ranges `a:b` or `a:b:step`,
/// e.g. "1,3,5:9:2". Throws std::invalid_argument on bad syntax.
[[nodiscard]] std::vector<std::uint32_t> parse_uint_list(std::string_view text);

/// Comma-separated reals and inclusive ranges `a:b:step`, e.g.
/// "0.4:5.6:0.2". Range values are a + i * step rounded to nine decimals
/// so that they print as written.
[[nodiscard]] std::vector<double> parse_real_list(std::string_view text);

/// Like parse_uint_list, but the word `uniform` adds the uniform
/// pseudo-dimension (nullopt). Dimension 0 is rejected.
[[nodiscard]] std::vector<std::optional<std::uint32_t>> parse_dimension_list(std::string_view text);

/// `--seed` if given, else GEOSAT_SEED, else a fresh random seed.
/// Throws std::invalid_argument when GEOSAT_SEED is not an integer.
[[nodiscard]] std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag);

/// `inst_<model>_k<k>_n<n>_m<m>[_d<d>]_s<seed>_i<idx>.cnf`
[[nodiscard]] std::string instance_file_name(std::string_view model, std::uint32_t k, std::uint32_t n,
                                             std::uint32_t m, std::optional<std::uint32_t> dimension,
                                             std::uint64_t seed, std::uint32_t index);

} // namespace geosat::cli
