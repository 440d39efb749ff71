#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "geosat/formula.hpp"
#include "geosat/records.hpp"

namespace geosat {

/// Records sharing model, k, n and dimension. A nullopt dimension is the
/// uniform model.
struct GroupKey {
    Model model = Model::uniform;
    std::uint32_t k = 0;
    std::uint32_t n = 0;
    std::optional<std::uint32_t> dimension;

    [[nodiscard]] bool contains(const RunRecord& record) const noexcept;

    friend auto operator<=>(const GroupKey&, const GroupKey&) = default;
};

[[nodiscard]] GroupKey group_of(const RunRecord& record) noexcept;

/// Distinct groups of the records, sorted.
[[nodiscard]] std::vector<GroupKey> groups_of(std::span<const RunRecord> records);

struct VerdictCounts {
    std::size_t sat = 0;
    std::size_t unsat = 0;
    std::size_t timeout = 0;
    std::size_t error = 0;

    [[nodiscard]] std::size_t decided() const noexcept { return sat + unsat; }
    friend bool operator==(const VerdictCounts&, const VerdictCounts&) = default;
};

/// Verdict tallies of the group's records per density (m / n).
[[nodiscard]] std::map<double, VerdictCounts> density_counts(std::span<const RunRecord> records,
                                                             const GroupKey& group);

/// #SAT / (#SAT + #UNSAT) per density of the group. TIMEOUT and ERROR
/// records are left out; a density with no decided record has no entry.
/// Throws std::invalid_argument if the group has no records at all.
[[nodiscard]] std::map<double, double> satisfiable_ratio(std::span<const RunRecord> records,
                                                         const GroupKey& group);

struct CriticalDensity {
    double density = 0.0;
    double ratio = 0.0;

    friend bool operator==(const CriticalDensity&, const CriticalDensity&) = default;
};

/// The density whose ratio is closest to 1/2, the lowest one on ties.
/// Throws std::invalid_argument on an empty map.
[[nodiscard]] CriticalDensity estimate_critical_density(const std::map<double, double>& ratios);

struct ThresholdEstimate {
    GroupKey group;
    double critical_density = 0.0;
    double ratio_at_estimate = 0.0;
    std::map<double, std::size_t> sample_sizes; // decided records per density
    std::size_t timeouts = 0;

    friend bool operator==(const ThresholdEstimate&, const ThresholdEstimate&) = default;
};

/// satisfiable_ratio followed by estimate_critical_density. Throws
/// std::invalid_argument when the group has no decided record.
[[nodiscard]] ThresholdEstimate estimate_group_threshold(std::span<const RunRecord> records,
                                                         const GroupKey& group);

/// Width of the transition window: with `hi` the lowest density whose ratio
/// is <= 0.1 and `lo` the highest density below `hi` whose ratio is >= 0.9,
/// returns hi - lo. Nullopt if either is missing.
[[nodiscard]] std::optional<double> transition_width(const std::map<double, double>& ratios);

enum class MatrixMetric { sat_ratio, mean_wall_time, mean_proof_clauses, mean_max_proof_len };

[[nodiscard]] std::string_view to_string(MatrixMetric metric) noexcept;
/// Throws std::invalid_argument on an unknown name.
[[nodiscard]] MatrixMetric parse_matrix_metric(std::string_view text);

/// Density by dimension table. Dimensions ascend with uniform (nullopt)
/// last; a cell without data is nullopt.
struct MetricMatrix {
    std::vector<double> densities;
    std::vector<std::optional<std::uint32_t>> dimensions;
    std::vector<std::vector<std::optional<double>>> cells; // [density][dimension]

    friend bool operator==(const MetricMatrix&, const MetricMatrix&) = default;
};

/// Arithmetic mean of the metric per (density, dimension) cell:
///  - sat_ratio over SAT and UNSAT records;
///  - mean_wall_time (seconds) over SAT, UNSAT and TIMEOUT records;
///  - mean_proof_clauses / mean_max_proof_len over records with proof metrics.
/// Records are expected to share k and n; callers filter beforehand.
[[nodiscard]] MetricMatrix matrix_export(std::span<const RunRecord> records, MatrixMetric metric);

/// Header `density,<dims...>,uniform`, one row per density, empty fields
/// for missing cells.
void write_matrix_csv(const MetricMatrix& matrix, std::ostream& out);

/// Per group and density: verdict counts and ratio.
void write_ratio_table(std::span<const RunRecord> records, std::ostream& out);

/// One row per group: estimate, ratio there, decided and timed-out counts,
/// transition width. Groups with no decided record get empty estimate
/// fields.
void write_threshold_table(std::span<const RunRecord> records, std::ostream& out);

} // namespace geosat
