#include "geosat/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <ostream>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

namespace geosat {

bool GroupKey::contains(const RunRecord& record) const noexcept
{
    return record.model == model && record.k == k && record.n == n && record.dimension == dimension;
}

GroupKey group_of(const RunRecord& record) noexcept
{
    return GroupKey{record.model, record.k, record.n, record.dimension};
}

std::vector<GroupKey> groups_of(std::span<const RunRecord> records)
{
    std::set<GroupKey> groups;
    for (const auto& r : records) {
        groups.insert(group_of(r));
    }
    return {groups.begin(), groups.end()};
}

std::map<double, VerdictCounts> density_counts(std::span<const RunRecord> records,
                                               const GroupKey& group)
{
    std::map<double, VerdictCounts> counts;
    for (const auto& r : records) {
        if (!group.contains(r)) {
            continue;
        }
        auto& c = counts[r.density()];
        switch (r.verdict) {
        case RunVerdict::sat:
            ++c.sat;
            break;
        case RunVerdict::unsat:
            ++c.unsat;
            break;
        case RunVerdict::timeout:
            ++c.timeout;
            break;
        case RunVerdict::error:
            ++c.error;
            break;
        }
    }
    return counts;
}

std::map<double, double> satisfiable_ratio(std::span<const RunRecord> records, const GroupKey& group)
{
    const auto counts = density_counts(records, group);
    if (counts.empty()) {
        throw std::invalid_argument("no records in group");
    }
    std::map<double, double> ratios;
    for (const auto& [density, c] : counts) {
        if (c.decided() > 0) {
            ratios.emplace(density, static_cast<double>(c.sat) / static_cast<double>(c.decided()));
        }
    }
    return ratios;
}

CriticalDensity estimate_critical_density(const std::map<double, double>& ratios)
{
    if (ratios.empty()) {
        throw std::invalid_argument("no densities to estimate from");
    }
    // Ascending iteration plus a strict comparison keeps the lowest density on ties.
    auto best = ratios.begin();
    for (auto it = std::next(best); it != ratios.end(); ++it) {
        if (std::abs(it->second - 0.5) < std::abs(best->second - 0.5)) {
            best = it;
        }
    }
    return CriticalDensity{best->first, best->second};
}

ThresholdEstimate estimate_group_threshold(std::span<const RunRecord> records, const GroupKey& group)
{
    const auto ratios = satisfiable_ratio(records, group);
    if (ratios.empty()) {
        throw std::invalid_argument("group has no SAT or UNSAT records");
    }
    const auto critical = estimate_critical_density(ratios);
    ThresholdEstimate estimate;
    estimate.group = group;
    estimate.critical_density = critical.density;
    estimate.ratio_at_estimate = critical.ratio;
    for (const auto& [density, c] : density_counts(records, group)) {
        if (c.decided() > 0) {
            estimate.sample_sizes.emplace(density, c.decided());
        }
        estimate.timeouts += c.timeout;
    }
    return estimate;
}

std::optional<double> transition_width(const std::map<double, double>& ratios)
{
    const auto hi = std::find_if(ratios.begin(), ratios.end(),
                                 [](const auto& entry) { return entry.second <= 0.1; });
    if (hi == ratios.end()) {
        return std::nullopt;
    }
    std::optional<double> lo;
    for (auto it = ratios.begin(); it != hi; ++it) {
        if (it->second >= 0.9) {
            lo = it->first;
        }
    }
    if (!lo) {
        return std::nullopt;
    }
    return hi->first - *lo;
}

std::string_view to_string(MatrixMetric metric) noexcept
{
    switch (metric) {
    case MatrixMetric::sat_ratio:
        return "sat_ratio";
    case MatrixMetric::mean_wall_time:
        return "mean_wall_time";
    case MatrixMetric::mean_proof_clauses:
        return "mean_proof_clauses";
    case MatrixMetric::mean_max_proof_len:
        return "mean_max_proof_len";
    }
    return "sat_ratio";
}

MatrixMetric parse_matrix_metric(std::string_view text)
{
    for (const auto m : {MatrixMetric::sat_ratio, MatrixMetric::mean_wall_time,
                         MatrixMetric::mean_proof_clauses, MatrixMetric::mean_max_proof_len}) {
        if (text == to_string(m)) {
            return m;
        }
    }
    throw std::invalid_argument(fmt::format("unknown metric '{}'", text));
}

namespace {

// Orders nullopt after every dimension.
struct DimensionOrder {
    bool operator()(const std::optional<std::uint32_t>& a,
                    const std::optional<std::uint32_t>& b) const noexcept
    {
        if (a.has_value() != b.has_value()) {
            return a.has_value();
        }
        return a.has_value() && *a < *b;
    }
};

// Sample of one record for a metric, if the record contributes. Samples
// are integers (wall time in microseconds) so sums are exact and means do
// not depend on record order.
std::optional<std::uint64_t> sample(const RunRecord& r, MatrixMetric metric)
{
    switch (metric) {
    case MatrixMetric::sat_ratio:
        if (r.verdict == RunVerdict::sat || r.verdict == RunVerdict::unsat) {
            return r.verdict == RunVerdict::sat ? 1 : 0;
        }
        return std::nullopt;
    case MatrixMetric::mean_wall_time:
        if (r.verdict == RunVerdict::error) {
            return std::nullopt;
        }
        return static_cast<std::uint64_t>(std::max<std::int64_t>(r.wall_time.count(), 0));
    case MatrixMetric::mean_proof_clauses:
        if (r.proof_metrics) {
            return r.proof_metrics->total_clauses;
        }
        return std::nullopt;
    case MatrixMetric::mean_max_proof_len:
        if (r.proof_metrics) {
            return r.proof_metrics->max_clause_length;
        }
        return std::nullopt;
    }
    return std::nullopt;
}

} // namespace

MetricMatrix matrix_export(std::span<const RunRecord> records, MatrixMetric metric)
{
    std::set<double> densities;
    std::set<std::optional<std::uint32_t>, DimensionOrder> dimensions;
    for (const auto& r : records) {
        densities.insert(r.density());
        dimensions.insert(r.dimension);
    }
    MetricMatrix matrix;
    matrix.densities.assign(densities.begin(), densities.end());
    matrix.dimensions.assign(dimensions.begin(), dimensions.end());

    struct Acc {
        std::uint64_t sum = 0;
        std::size_t count = 0;
    };
    std::vector<std::vector<Acc>> acc(matrix.densities.size(),
                                      std::vector<Acc>(matrix.dimensions.size()));
    for (const auto& r : records) {
        const auto s = sample(r, metric);
        if (!s) {
            continue;
        }
        const auto row = static_cast<std::size_t>(
            std::lower_bound(matrix.densities.begin(), matrix.densities.end(), r.density()) -
            matrix.densities.begin());
        const auto col = static_cast<std::size_t>(
            std::lower_bound(matrix.dimensions.begin(), matrix.dimensions.end(), r.dimension,
                             DimensionOrder{}) -
            matrix.dimensions.begin());
        acc[row][col].sum += *s;
        ++acc[row][col].count;
    }
    matrix.cells.resize(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i) {
        for (const auto& a : acc[i]) {
            if (a.count == 0) {
                matrix.cells[i].emplace_back();
                continue;
            }
            double mean = static_cast<double>(a.sum) / static_cast<double>(a.count);
            if (metric == MatrixMetric::mean_wall_time) {
                mean /= 1e6;
            }
            matrix.cells[i].emplace_back(mean);
        }
    }
    return matrix;
}

namespace {

std::string dimension_label(const std::optional<std::uint32_t>& d)
{
    return d ? fmt::format("{}", *d) : std::string{"uniform"};
}

void flush(const fmt::memory_buffer& buf, std::ostream& out)
{
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    out.flush();
    if (!out) {
        throw std::runtime_error("I/O error while writing an analysis table");
    }
}

} // namespace

void write_matrix_csv(const MetricMatrix& matrix, std::ostream& out)
{
    fmt::memory_buffer buf;
    auto it = std::back_inserter(buf);
    buf.append(std::string_view{"density"});
    for (const auto& d : matrix.dimensions) {
        fmt::format_to(it, ",{}", dimension_label(d));
    }
    buf.push_back('\n');
    for (std::size_t i = 0; i < matrix.densities.size(); ++i) {
        fmt::format_to(it, "{}", matrix.densities[i]);
        for (const auto& cell : matrix.cells[i]) {
            buf.push_back(',');
            if (cell) {
                fmt::format_to(it, "{}", *cell);
            }
        }
        buf.push_back('\n');
    }
    flush(buf, out);
}

void write_ratio_table(std::span<const RunRecord> records, std::ostream& out)
{
    fmt::memory_buffer buf;
    auto it = std::back_inserter(buf);
    buf.append(std::string_view{"model,k,n,dimension,density,sat,unsat,timeout,error,sat_ratio\n"});
    for (const auto& g : groups_of(records)) {
        for (const auto& [density, c] : density_counts(records, g)) {
            fmt::format_to(it, "{},{},{},{},{},{},{},{},{},", to_string(g.model), g.k, g.n,
                           g.dimension ? fmt::format("{}", *g.dimension) : std::string{}, density,
                           c.sat, c.unsat, c.timeout, c.error);
            if (c.decided() > 0) {
                fmt::format_to(it, "{}", static_cast<double>(c.sat) / static_cast<double>(c.decided()));
            }
            buf.push_back('\n');
        }
    }
    flush(buf, out);
}

void write_threshold_table(std::span<const RunRecord> records, std::ostream& out)
{
    fmt::memory_buffer buf;
    auto it = std::back_inserter(buf);
    buf.append(std::string_view{
        "model,k,n,dimension,critical_density,ratio_at_estimate,decided,timeouts,transition_width\n"});
    for (const auto& g : groups_of(records)) {
        fmt::format_to(it, "{},{},{},{},", to_string(g.model), g.k, g.n,
                       g.dimension ? fmt::format("{}", *g.dimension) : std::string{});
        const auto ratios = satisfiable_ratio(records, g);
        std::size_t timeouts = 0;
        std::size_t decided = 0;
        for (const auto& [density, c] : density_counts(records, g)) {
            timeouts += c.timeout;
            decided += c.decided();
        }
        if (ratios.empty()) {
            fmt::format_to(it, ",,0,{},\n", timeouts);
            continue;
        }
        const auto critical = estimate_critical_density(ratios);
        fmt::format_to(it, "{},{},{},{},", critical.density, critical.ratio, decided, timeouts);
        if (const auto w = transition_width(ratios)) {
            fmt::format_to(it, "{}", *w);
        }
        buf.push_back('\n');
    }
    flush(buf, out);
}

} // namespace geosat
