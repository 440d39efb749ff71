#include "geosat/drat.hpp"

#include <fstream>
#include <iterator>
#include <ostream>

#include <fmt/format.h>

#include "text_scan.hpp"

namespace geosat {

void write_drat(const DratProof& proof, std::ostream& out)
{
    fmt::memory_buffer buf;
    for (const auto& step : proof.steps) {
        if (step.kind == StepKind::remove) {
            buf.push_back('d');
            buf.push_back(' ');
        }
        for (const Literal lit : step.literals) {
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
        throw std::runtime_error("I/O error while writing DRAT");
    }
}

DratProof read_drat(std::istream& in)
{
    const std::string text = detail::slurp(in);
    detail::LineReader lines{text};
    DratProof proof;
    DratStep current;
    bool open = false;
    std::size_t open_line = 0;

    while (auto line = lines.next()) {
        const auto trimmed = detail::trim(*line);
        if (trimmed.empty() || (!open && trimmed.front() == 'c')) {
            continue;
        }
        detail::Tokens tokens{trimmed};
        while (auto token = tokens.next()) {
            if (*token == "d") {
                if (open) {
                    throw ParseError(lines.number(), "'d' inside an unterminated step");
                }
                current.kind = StepKind::remove;
                open = true;
                open_line = lines.number();
                continue;
            }
            const auto value = detail::parse_int<std::int64_t>(*token);
            if (!value || *value > INT32_MAX || *value < -INT32_MAX) {
                throw ParseError(lines.number(), fmt::format("stray token '{}'", *token));
            }
            if (!open) {
                open = true;
                open_line = lines.number();
            }
            if (*value == 0) {
                proof.steps.push_back(std::move(current));
                current = DratStep{};
                open = false;
                continue;
            }
            current.literals.push_back(Literal::from_dimacs(*value));
        }
    }
    if (open) {
        throw ParseError(open_line, "proof step missing its terminating 0");
    }
    return proof;
}

void write_drat_file(const DratProof& proof, const std::filesystem::path& path)
{
    std::ofstream out{path, std::ios::binary};
    if (!out) {
        throw std::runtime_error(fmt::format("cannot open {} for writing", path.string()));
    }
    write_drat(proof, out);
}

DratProof read_drat_file(const std::filesystem::path& path)
{
    std::ifstream in{path, std::ios::binary};
    if (!in) {
        throw std::runtime_error(fmt::format("cannot open {}", path.string()));
    }
    return read_drat(in);
}

} // namespace geosat
