#include "geosat/dimacs.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <ostream>
#include <vector>

#include <fmt/format.h>

#include "text_scan.hpp"

namespace geosat {

namespace {

constexpr std::string_view kMetaPrefix = "c geosat ";

struct MetaComment {
    std::optional<GenerationMeta> meta;
    std::optional<std::uint32_t> k;
};

// Best effort: an unrecognised or malformed metadata comment is just a
// comment.
MetaComment parse_meta(std::string_view line)
{
    line.remove_prefix(kMetaPrefix.size());
    detail::Tokens tokens{line};
    std::optional<Model> model;
    std::optional<std::uint32_t> k;
    std::optional<std::uint32_t> dimension;
    std::optional<std::uint64_t> seed;
    while (auto token = tokens.next()) {
        const auto eq = token->find('=');
        if (eq == std::string_view::npos) {
            return {};
        }
        const auto key = token->substr(0, eq);
        const auto value = token->substr(eq + 1);
        if (key == "model") {
            if (value == "uniform") {
                model = Model::uniform;
            } else if (value == "geometric") {
                model = Model::geometric;
            } else {
                return {};
            }
        } else if (key == "k") {
            k = detail::parse_int<std::uint32_t>(value);
        } else if (key == "dim") {
            dimension = detail::parse_int<std::uint32_t>(value);
        } else if (key == "seed") {
            seed = detail::parse_int<std::uint64_t>(value);
        }
    }
    if (!model || !seed || dimension.has_value() != (*model == Model::geometric)) {
        return {};
    }
    return MetaComment{GenerationMeta{*model, dimension, *seed}, k};
}

} // namespace

void write_dimacs(const Formula& formula, std::ostream& out)
{
    fmt::memory_buffer buf;
    if (const auto& meta = formula.meta()) {
        fmt::format_to(std::back_inserter(buf), "c geosat model={} k={} n={} m={}",
                       to_string(meta->model), formula.clause_length(), formula.num_vars(),
                       formula.num_clauses());
        if (meta->dimension) {
            fmt::format_to(std::back_inserter(buf), " dim={}", *meta->dimension);
        }
        fmt::format_to(std::back_inserter(buf), " seed={}\n", meta->seed);
    }
    fmt::format_to(std::back_inserter(buf), "p cnf {} {}\n", formula.num_vars(),
                   formula.num_clauses());
    for (const auto& clause : formula.clauses()) {
        for (const Literal lit : clause) {
            fmt::format_to(std::back_inserter(buf), "{} ", lit.dimacs());
        }
        buf.push_back('0');
        buf.push_back('\n');
        if (buf.size() > (1u << 16)) {
            out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
            buf.clear();
        }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    out.flush();
    if (!out) {
        throw std::runtime_error("I/O error while writing DIMACS");
    }
}

Formula read_dimacs(std::istream& in)
{
    const std::string text = detail::slurp(in);
    detail::LineReader lines{text};

    MetaComment meta;
    std::optional<std::uint32_t> num_vars;
    std::uint64_t declared_clauses = 0;
    std::vector<Clause> clauses;
    Clause current;
    std::size_t clause_start_line = 0;
    // stamp[v] == clauses.size() + 1 marks v as used by the open clause.
    std::vector<std::size_t> stamp;

    while (auto line = lines.next()) {
        const auto trimmed = detail::trim(*line);
        if (trimmed.empty()) {
            continue;
        }
        if (trimmed.front() == 'c') {
            if (!num_vars && line->starts_with(kMetaPrefix)) {
                meta = parse_meta(*line);
            }
            continue;
        }
        if (trimmed.front() == '%') {
            if (!num_vars) {
                throw ParseError(lines.number(), "'%' before the problem header");
            }
            break;
        }
        if (trimmed.front() == 'p') {
            if (num_vars) {
                throw ParseError(lines.number(), "duplicate problem header");
            }
            detail::Tokens tokens{trimmed};
            const auto p = tokens.next();
            const auto format = tokens.next();
            const auto n_tok = tokens.next();
            const auto m_tok = tokens.next();
            if (*p != "p" || !format || *format != "cnf" || !n_tok || !m_tok || tokens.next()) {
                throw ParseError(lines.number(), "malformed header, expected 'p cnf <n> <m>'");
            }
            const auto n = detail::parse_int<std::uint32_t>(*n_tok);
            const auto m = detail::parse_int<std::uint64_t>(*m_tok);
            if (!n || !m || *n > static_cast<std::uint32_t>(INT32_MAX)) {
                throw ParseError(lines.number(), "header counts must be non-negative integers");
            }
            num_vars = *n;
            declared_clauses = *m;
            clauses.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(*m, 1u << 24)));
            stamp.assign(static_cast<std::size_t>(*n) + 1, 0);
            continue;
        }
        if (!num_vars) {
            throw ParseError(lines.number(), "clause data before the problem header");
        }
        detail::Tokens tokens{trimmed};
        while (auto token = tokens.next()) {
            const auto value = detail::parse_int<std::int64_t>(*token);
            if (!value) {
                throw ParseError(lines.number(), fmt::format("non-integer token '{}'", *token));
            }
            if (*value == 0) {
                if (clauses.size() >= declared_clauses) {
                    throw ParseError(lines.number(),
                                     fmt::format("more than the {} clauses declared in the header",
                                                 declared_clauses));
                }
                clauses.push_back(std::move(current));
                current.clear();
                continue;
            }
            const auto magnitude = static_cast<std::uint64_t>(*value < 0 ? -*value : *value);
            if (magnitude > *num_vars) {
                throw ParseError(lines.number(),
                                 fmt::format("literal {} exceeds n = {}", *value, *num_vars));
            }
            if (current.empty()) {
                clause_start_line = lines.number();
            }
            const auto mark = clauses.size() + 1;
            if (stamp[magnitude] == mark) {
                throw ParseError(lines.number(),
                                 fmt::format("variable {} repeated within a clause", magnitude));
            }
            stamp[magnitude] = mark;
            current.push_back(Literal::from_dimacs(*value));
        }
    }

    if (!num_vars) {
        throw ParseError(lines.number(), "missing 'p cnf' header");
    }
    if (!current.empty()) {
        throw ParseError(clause_start_line, "clause missing its terminating 0");
    }
    if (clauses.size() != declared_clauses) {
        throw ParseError(lines.number(), fmt::format("header declares {} clauses, found {}",
                                                     declared_clauses, clauses.size()));
    }

    if (meta.k && *meta.k > 0) {
        const bool consistent = std::all_of(clauses.begin(), clauses.end(),
                                            [&](const Clause& c) { return c.size() == *meta.k; });
        if (consistent) {
            return Formula{*num_vars, *meta.k, std::move(clauses), meta.meta};
        }
    }
    return Formula::from_clauses(*num_vars, std::move(clauses), meta.meta);
}

void write_dimacs_file(const Formula& formula, const std::filesystem::path& path)
{
    std::ofstream out{path, std::ios::binary};
    if (!out) {
        throw std::runtime_error(fmt::format("cannot open {} for writing", path.string()));
    }
    write_dimacs(formula, out);
}

Formula read_dimacs_file(const std::filesystem::path& path)
{
    std::ifstream in{path, std::ios::binary};
    if (!in) {
        throw std::runtime_error(fmt::format("cannot open {}", path.string()));
    }
    return read_dimacs(in);
}

} // namespace geosat
