#include "geosat/records.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <iterator>
#include <ostream>

#include <fmt/format.h>

#include "text_scan.hpp"

namespace geosat {

std::string_view to_string(RunVerdict verdict) noexcept
{
    switch (verdict) {
    case RunVerdict::sat:
        return "SAT";
    case RunVerdict::unsat:
        return "UNSAT";
    case RunVerdict::timeout:
        return "TIMEOUT";
    case RunVerdict::error:
        return "ERROR";
    }
    return "ERROR";
}

std::optional<RunVerdict> parse_verdict(std::string_view text) noexcept
{
    for (const auto v : {RunVerdict::sat, RunVerdict::unsat, RunVerdict::timeout, RunVerdict::error}) {
        if (text == to_string(v)) {
            return v;
        }
    }
    return std::nullopt;
}

namespace {

constexpr std::size_t kColumns = 18;

void append_field(fmt::memory_buffer& buf, std::string_view field)
{
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
        buf.append(field);
        return;
    }
    buf.push_back('"');
    for (const char c : field) {
        if (c == '"') {
            buf.push_back('"');
        }
        buf.push_back(c);
    }
    buf.push_back('"');
}

template <typename T>
void append_optional(fmt::memory_buffer& buf, const std::optional<T>& value)
{
    buf.push_back(',');
    if (value) {
        fmt::format_to(std::back_inserter(buf), "{}", *value);
    }
}

// RFC 4180 field split of one row. Quoted fields may not span lines.
std::optional<std::vector<std::string>> split_row(std::string_view line)
{
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    fields.back().push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                fields.back().push_back(c);
            }
        } else if (c == '"' && fields.back().empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else {
            fields.back().push_back(c);
        }
    }
    if (quoted) {
        return std::nullopt;
    }
    return fields;
}

// Seconds with exactly six decimals, e.g. "12.000345".
std::optional<std::chrono::microseconds> parse_seconds(std::string_view text)
{
    const auto dot = text.find('.');
    if (dot == std::string_view::npos || text.size() - dot - 1 != 6) {
        return std::nullopt;
    }
    const auto whole = detail::parse_int<std::int64_t>(text.substr(0, dot));
    const auto frac = detail::parse_int<std::int64_t>(text.substr(dot + 1));
    if (!whole || !frac || *whole < 0 || *frac < 0) {
        return std::nullopt;
    }
    return std::chrono::microseconds{*whole * 1'000'000 + *frac};
}

} // namespace

void persist_records(std::span<const RunRecord> records, std::ostream& out)
{
    fmt::memory_buffer buf;
    buf.append(kRecordCsvHeader);
    buf.push_back('\n');
    for (const auto& r : records) {
        fmt::format_to(std::back_inserter(buf), "{},{},{},{},{},", to_string(r.model), r.k, r.n,
                       r.m, r.density());
        if (r.dimension) {
            fmt::format_to(std::back_inserter(buf), "{}", *r.dimension);
        }
        fmt::format_to(std::back_inserter(buf), ",{},", r.instance_seed);
        append_field(buf, r.solver_id);
        const auto us = r.wall_time.count();
        fmt::format_to(std::back_inserter(buf), ",{},{}.{:06d}", to_string(r.verdict),
                       us / 1'000'000, us % 1'000'000);
        std::optional<std::uint64_t> fields[7];
        if (const auto& p = r.proof_metrics) {
            fields[0] = p->total_clauses;
            fields[1] = p->additions;
            fields[2] = p->deletions;
            fields[3] = p->total_literals;
            fields[4] = p->literals_in_additions;
            fields[5] = p->literals_in_deletions;
            fields[6] = p->max_clause_length;
        }
        for (const auto& f : fields) {
            append_optional(buf, f);
        }
        buf.push_back(',');
        if (r.proof_checked) {
            buf.append(std::string_view{*r.proof_checked ? "true" : "false"});
        }
        buf.push_back('\n');
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    out.flush();
    if (!out) {
        throw std::runtime_error("I/O error while writing run records");
    }
}

std::vector<RunRecord> load_records(std::istream& in)
{
    const std::string text = detail::slurp(in);
    detail::LineReader lines{text};
    const auto header = lines.next();
    if (!header || *header != kRecordCsvHeader) {
        throw ParseError(1, "missing or unexpected run-record header");
    }

    std::vector<RunRecord> records;
    while (auto line = lines.next()) {
        const auto row = lines.number();
        if (line->empty()) {
            continue;
        }
        const auto split = split_row(*line);
        if (!split || split->size() != kColumns) {
            throw ParseError(row, fmt::format("expected {} fields", kColumns));
        }
        const auto& f = *split;
        const auto fail = [row](std::string_view what) {
            return ParseError(row, fmt::format("bad {}", what));
        };

        RunRecord r;
        if (f[0] == "uniform") {
            r.model = Model::uniform;
        } else if (f[0] == "geometric") {
            r.model = Model::geometric;
        } else {
            throw fail("model");
        }
        const auto k = detail::parse_int<std::uint32_t>(f[1]);
        const auto n = detail::parse_int<std::uint32_t>(f[2]);
        const auto m = detail::parse_int<std::uint32_t>(f[3]);
        if (!k || !n || !m) {
            throw fail("k/n/m");
        }
        r.k = *k;
        r.n = *n;
        r.m = *m;
        double density = 0.0;
        const auto [ptr, ec] = std::from_chars(f[4].data(), f[4].data() + f[4].size(), density);
        if (ec != std::errc{} || ptr != f[4].data() + f[4].size()) {
            throw fail("density");
        }
        if (!f[5].empty()) {
            const auto d = detail::parse_int<std::uint32_t>(f[5]);
            if (!d) {
                throw fail("dimension");
            }
            r.dimension = *d;
        }
        if (r.dimension.has_value() != (r.model == Model::geometric)) {
            throw fail("dimension: must be present exactly for geometric rows");
        }
        const auto seed = detail::parse_int<std::uint64_t>(f[6]);
        if (!seed) {
            throw fail("instance_seed");
        }
        r.instance_seed = *seed;
        r.solver_id = f[7];
        const auto verdict = parse_verdict(f[8]);
        if (!verdict) {
            throw fail("verdict");
        }
        r.verdict = *verdict;
        const auto wall = parse_seconds(f[9]);
        if (!wall) {
            throw fail("wall_time_s");
        }
        r.wall_time = *wall;

        std::array<std::optional<std::uint64_t>, 7> metrics;
        std::size_t present = 0;
        for (std::size_t i = 0; i < metrics.size(); ++i) {
            if (f[10 + i].empty()) {
                continue;
            }
            metrics[i] = detail::parse_int<std::uint64_t>(f[10 + i]);
            if (!metrics[i]) {
                throw fail("proof metric");
            }
            ++present;
        }
        if (present == metrics.size()) {
            r.proof_metrics = ProofMetrics{*metrics[0], *metrics[1], *metrics[2], *metrics[3],
                                           *metrics[4], *metrics[5], *metrics[6]};
        } else if (present != 0) {
            throw fail("proof metrics: all seven columns or none");
        }
        if (f[17] == "true") {
            r.proof_checked = true;
        } else if (f[17] == "false") {
            r.proof_checked = false;
        } else if (!f[17].empty()) {
            throw fail("proof_checked");
        }
        records.push_back(std::move(r));
    }
    return records;
}

void persist_records_file(std::span<const RunRecord> records, const std::filesystem::path& path)
{
    std::ofstream out{path, std::ios::binary};
    if (!out) {
        throw std::runtime_error(fmt::format("cannot open {} for writing", path.string()));
    }
    persist_records(records, out);
}

std::vector<RunRecord> load_records_file(const std::filesystem::path& path)
{
    std::ifstream in{path, std::ios::binary};
    if (!in) {
        throw std::runtime_error(fmt::format("cannot open {}", path.string()));
    }
    return load_records(in);
}

} // namespace geosat
