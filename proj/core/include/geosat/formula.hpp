#pragma once

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace geosat {

/// A Boolean variable x_i. Indices are 1-based, matching DIMACS.
class Variable {
public:
    constexpr explicit Variable(std::uint32_t index) noexcept : index_{index} {}

    [[nodiscard]] constexpr std::uint32_t index() const noexcept { return index_; }

    friend constexpr auto operator<=>(Variable, Variable) = default;

private:
    std::uint32_t index_;
};

/// A possibly negated variable, stored in its signed DIMACS encoding.
class Literal {
public:
    constexpr Literal(Variable var, bool negated) noexcept
        : value_{negated ? -static_cast<std::int32_t>(var.index())
                         : static_cast<std::int32_t>(var.index())}
    {
    }

    /// Throws std::invalid_argument for 0, which is the DIMACS terminator.
    static Literal from_dimacs(std::int64_t value);

    /// Inverse of code().
    static constexpr Literal from_code(std::uint32_t code) noexcept
    {
        return Literal{Variable{(code >> 1) + 1}, (code & 1u) != 0};
    }

    [[nodiscard]] constexpr Variable var() const noexcept
    {
        return Variable{static_cast<std::uint32_t>(value_ < 0 ? -value_ : value_)};
    }
    [[nodiscard]] constexpr bool negated() const noexcept { return value_ < 0; }
    [[nodiscard]] constexpr std::int32_t dimacs() const noexcept { return value_; }

    // Dense index 2*(i-1) + negated, used for per-literal tables.
    [[nodiscard]] constexpr std::uint32_t code() const noexcept
    {
        return ((var().index() - 1) << 1) | (negated() ? 1u : 0u);
    }

    [[nodiscard]] constexpr Literal operator~() const noexcept { return Literal{var(), !negated()}; }

    friend constexpr bool operator==(Literal, Literal) = default;
    friend constexpr auto operator<=>(Literal a, Literal b) noexcept { return a.value_ <=> b.value_; }

private:
    std::int32_t value_;
};

using Clause = std::vector<Literal>;

enum class Model { uniform, geometric };

[[nodiscard]] const char* to_string(Model model) noexcept;
/// Throws std::invalid_argument on anything but "uniform" or "geometric".
[[nodiscard]] Model parse_model(std::string_view text);

/// Parameters a generated instance came from. `dimension` is set iff the
/// model is geometric.
struct GenerationMeta {
    Model model = Model::uniform;
    std::optional<std::uint32_t> dimension;
    std::uint64_t seed = 0;

    friend bool operator==(const GenerationMeta&, const GenerationMeta&) = default;
};

/// A CNF formula over variables 1..n.
///
/// A clause length of zero marks a general CNF whose clauses may differ in
/// length (as read from arbitrary DIMACS files); otherwise every clause has
/// exactly `clause_length()` literals. Variables within one clause are always
/// pairwise distinct. Duplicate clauses are allowed.
class Formula {
public:
    Formula() = default;

    /// Throws std::invalid_argument when a clause violates the invariants.
    Formula(std::uint32_t num_vars, std::uint32_t clause_length, std::vector<Clause> clauses,
            std::optional<GenerationMeta> meta = std::nullopt);

    /// Builds a formula whose clause length is inferred: the common length
    /// if all clauses agree and there is at least one clause, else zero.
    static Formula from_clauses(std::uint32_t num_vars, std::vector<Clause> clauses,
                                std::optional<GenerationMeta> meta = std::nullopt);

    [[nodiscard]] std::uint32_t num_vars() const noexcept { return num_vars_; }
    [[nodiscard]] std::uint32_t clause_length() const noexcept { return clause_length_; }
    [[nodiscard]] std::size_t num_clauses() const noexcept { return clauses_.size(); }
    [[nodiscard]] std::span<const Clause> clauses() const noexcept { return clauses_; }
    [[nodiscard]] const Clause& clause(std::size_t i) const { return clauses_.at(i); }
    [[nodiscard]] const std::optional<GenerationMeta>& meta() const noexcept { return meta_; }

    friend bool operator==(const Formula&, const Formula&) = default;

private:
    std::uint32_t num_vars_ = 0;
    std::uint32_t clause_length_ = 0;
    std::vector<Clause> clauses_;
    std::optional<GenerationMeta> meta_;
};

/// A total truth assignment over variables 1..n.
class Assignment {
public:
    Assignment() = default;
    explicit Assignment(std::uint32_t num_vars, bool initial = false) : values_(num_vars, initial) {}

    [[nodiscard]] std::uint32_t num_vars() const noexcept
    {
        return static_cast<std::uint32_t>(values_.size());
    }
    [[nodiscard]] bool value(Variable v) const { return values_.at(v.index() - 1); }
    void set(Variable v, bool value) { values_.at(v.index() - 1) = value; }
    [[nodiscard]] bool satisfies(Literal lit) const { return value(lit.var()) != lit.negated(); }

    friend bool operator==(const Assignment&, const Assignment&) = default;

private:
    std::vector<bool> values_;
};

/// m/n. Throws std::domain_error when n = 0.
[[nodiscard]] double density(const Formula& formula);

/// True iff every clause has a literal satisfied by `assignment`. Throws
/// std::domain_error unless the assignment covers exactly variables 1..n.
[[nodiscard]] bool evaluate(const Formula& formula, const Assignment& assignment);

} // namespace geosat
