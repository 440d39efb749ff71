#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>
#include <vector>

#include "geosat/rng.hpp"
#include "geosat/solver.hpp"

namespace geosat {

namespace {

using Lit = std::uint32_t;       // 2 * (var - 1) + negated, as Literal::code()
using ClauseRef = std::uint32_t; // offset of a clause header in the arena

constexpr ClauseRef kNoReason = UINT32_MAX;
constexpr std::int8_t kUnset = -1;

// Clauses live in one flat word array: [size | flags] [activity] [lits...].
class ClauseArena {
public:
    static constexpr std::uint32_t kHeader = 2;
    static constexpr std::uint32_t kLearnt = 1u << 31;
    static constexpr std::uint32_t kRemoved = 1u << 30;
    static constexpr std::uint32_t kSizeMask = kRemoved - 1;

    ClauseRef add(const std::vector<Lit>& lits, bool learnt)
    {
        const auto ref = static_cast<ClauseRef>(words_.size());
        words_.push_back(static_cast<std::uint32_t>(lits.size()) | (learnt ? kLearnt : 0u));
        words_.push_back(std::bit_cast<std::uint32_t>(0.0f));
        words_.insert(words_.end(), lits.begin(), lits.end());
        return ref;
    }

    [[nodiscard]] std::uint32_t size(ClauseRef c) const noexcept { return words_[c] & kSizeMask; }
    [[nodiscard]] bool learnt(ClauseRef c) const noexcept { return (words_[c] & kLearnt) != 0; }
    [[nodiscard]] bool removed(ClauseRef c) const noexcept { return (words_[c] & kRemoved) != 0; }
    [[nodiscard]] Lit* lits(ClauseRef c) noexcept { return words_.data() + c + kHeader; }
    [[nodiscard]] const Lit* lits(ClauseRef c) const noexcept { return words_.data() + c + kHeader; }

    [[nodiscard]] float activity(ClauseRef c) const noexcept
    {
        return std::bit_cast<float>(words_[c + 1]);
    }
    void set_activity(ClauseRef c, float a) noexcept { words_[c + 1] = std::bit_cast<std::uint32_t>(a); }

    void remove(ClauseRef c) noexcept
    {
        words_[c] |= kRemoved;
        wasted_ += kHeader + size(c);
    }

    [[nodiscard]] std::size_t words() const noexcept { return words_.size(); }
    [[nodiscard]] std::size_t wasted() const noexcept { return wasted_; }

    /// Drops removed clauses. `relocate(old)` afterwards gives the new
    /// reference of a surviving clause; only valid until the next call.
    void compact()
    {
        std::vector<std::uint32_t> packed;
        packed.reserve(words_.size() - wasted_);
        moved_.clear();
        for (std::size_t c = 0; c < words_.size(); c += kHeader + size(static_cast<ClauseRef>(c))) {
            const auto ref = static_cast<ClauseRef>(c);
            if (removed(ref)) {
                continue;
            }
            moved_.emplace_back(ref, static_cast<ClauseRef>(packed.size()));
            packed.insert(packed.end(), words_.begin() + static_cast<std::ptrdiff_t>(c),
                          words_.begin() + static_cast<std::ptrdiff_t>(c + kHeader + size(ref)));
        }
        words_ = std::move(packed);
        wasted_ = 0;
    }

    [[nodiscard]] ClauseRef relocate(ClauseRef old) const
    {
        const auto it = std::lower_bound(moved_.begin(), moved_.end(), std::pair{old, ClauseRef{0}});
        return it->second;
    }

    template <typename Fn>
    void for_each_live(Fn&& fn) const
    {
        for (std::size_t c = 0; c < words_.size(); c += kHeader + size(static_cast<ClauseRef>(c))) {
            if (!removed(static_cast<ClauseRef>(c))) {
                fn(static_cast<ClauseRef>(c));
            }
        }
    }

private:
    std::vector<std::uint32_t> words_;
    std::size_t wasted_ = 0;
    std::vector<std::pair<ClauseRef, ClauseRef>> moved_;
};

struct Watcher {
    ClauseRef cref;
    Lit blocker;
};

class Cdcl {
public:
    Cdcl(const Formula& formula, const SolverConfig& config)
        : config_{config}, num_vars_{formula.num_vars()}, rng_{config.seed},
          assigns_(num_vars_, kUnset), level_(num_vars_, 0), reason_(num_vars_, kNoReason),
          phase_(num_vars_, 0), seen_(num_vars_, 0), activity_(num_vars_, 0.0),
          heap_index_(num_vars_, -1), watches_(2 * static_cast<std::size_t>(num_vars_))
    {
        heap_.reserve(num_vars_);
        for (std::uint32_t v = 0; v < num_vars_; ++v) {
            heap_insert(v);
        }
        const auto budget = static_cast<double>(formula.num_clauses()) *
                            config_.reduction.initial_fraction;
        max_learnts_ = std::max(budget, static_cast<double>(config_.reduction.minimum_budget));
        restart_limit_ = static_cast<double>(config_.restarts.first_interval);
        load(formula);
    }

    SolverOutcome solve()
    {
        const auto start = std::chrono::steady_clock::now();
        const auto finish = [&](Verdict verdict) {
            return SolverOutcome{std::move(verdict), std::chrono::steady_clock::now() - start,
                                 stats_};
        };
        if (inconsistent_) {
            return finish(refutation());
        }
        std::uint64_t conflicts_since_restart = 0;
        for (;;) {
            const ClauseRef conflict = propagate();
            if (conflict != kNoReason) {
                ++stats_.conflicts;
                ++conflicts_since_restart;
                if (decision_level() == 0) {
                    return finish(refutation());
                }
                learn(conflict);
                decay_activities();
                if (limit_reached(start)) {
                    return finish(Timeout{});
                }
                continue;
            }
            if (static_cast<double>(conflicts_since_restart) >= restart_limit_) {
                conflicts_since_restart = 0;
                restart_limit_ *= config_.restarts.growth;
                backtrack(0);
            }
            if (static_cast<double>(learnts_.size()) >= max_learnts_ + static_cast<double>(trail_.size())) {
                reduce_learnts();
            }
            const auto next = pick_branch_variable();
            if (!next) {
                return finish(Satisfiable{model()});
            }
            ++stats_.decisions;
            trail_limits_.push_back(trail_.size());
            enqueue((*next << 1) | (phase_[*next] ? 0u : 1u), kNoReason);
        }
    }

private:
    // --- assignment -------------------------------------------------------

    [[nodiscard]] std::int8_t value(Lit lit) const noexcept
    {
        const std::int8_t v = assigns_[lit >> 1];
        return v < 0 ? v : static_cast<std::int8_t>(v ^ static_cast<std::int8_t>(lit & 1u));
    }

    [[nodiscard]] std::uint32_t decision_level() const noexcept
    {
        return static_cast<std::uint32_t>(trail_limits_.size());
    }

    void enqueue(Lit lit, ClauseRef reason)
    {
        const auto v = lit >> 1;
        assigns_[v] = static_cast<std::int8_t>((lit & 1u) ^ 1u);
        level_[v] = decision_level();
        reason_[v] = reason;
        trail_.push_back(lit);
    }

    void backtrack(std::uint32_t target)
    {
        if (decision_level() <= target) {
            return;
        }
        const auto keep = trail_limits_[target];
        for (auto i = trail_.size(); i-- > keep;) {
            const auto v = trail_[i] >> 1;
            phase_[v] = static_cast<std::uint8_t>(assigns_[v]);
            assigns_[v] = kUnset;
            reason_[v] = kNoReason;
            if (heap_index_[v] < 0) {
                heap_insert(v);
            }
        }
        trail_.resize(keep);
        trail_limits_.resize(target);
        queue_head_ = std::min(queue_head_, trail_.size());
    }

    Assignment model() const
    {
        Assignment a{num_vars_};
        for (std::uint32_t v = 0; v < num_vars_; ++v) {
            a.set(Variable{v + 1}, assigns_[v] == 1);
        }
        return a;
    }

    // --- clause database ----------------------------------------------------

    void load(const Formula& formula)
    {
        std::vector<Lit> units;
        std::vector<Lit> lits;
        for (const auto& clause : formula.clauses()) {
            if (clause.empty()) {
                inconsistent_ = true;
                return;
            }
            if (clause.size() == 1) {
                units.push_back(clause.front().code());
                continue;
            }
            lits.clear();
            for (const Literal lit : clause) {
                lits.push_back(lit.code());
            }
            attach(arena_.add(lits, false));
        }
        for (const Lit unit : units) {
            const auto v = value(unit);
            if (v == 0) {
                inconsistent_ = true;
                return;
            }
            if (v == kUnset) {
                enqueue(unit, kNoReason);
            }
        }
    }

    void attach(ClauseRef cref)
    {
        const Lit* lits = arena_.lits(cref);
        watches_[lits[0]].push_back(Watcher{cref, lits[1]});
        watches_[lits[1]].push_back(Watcher{cref, lits[0]});
    }

    [[nodiscard]] bool locked(ClauseRef cref) const
    {
        const Lit first = arena_.lits(cref)[0];
        return reason_[first >> 1] == cref && value(first) == 1;
    }

    void reduce_learnts()
    {
        std::vector<ClauseRef> order = learnts_;
        std::stable_sort(order.begin(), order.end(), [this](ClauseRef a, ClauseRef b) {
            return arena_.activity(a) < arena_.activity(b);
        });
        const auto drop = static_cast<std::size_t>(
            static_cast<double>(order.size()) * (1.0 - config_.reduction.keep_fraction));
        std::size_t dropped = 0;
        for (const ClauseRef cref : order) {
            if (dropped >= drop) {
                break;
            }
            if (arena_.size(cref) <= 2 || locked(cref)) {
                continue;
            }
            if (config_.emit_proof) {
                record(StepKind::remove, arena_.lits(cref), arena_.size(cref));
            }
            arena_.remove(cref);
            ++dropped;
        }
        std::erase_if(learnts_, [this](ClauseRef cref) { return arena_.removed(cref); });
        max_learnts_ *= config_.reduction.growth;
        if (2 * arena_.wasted() > arena_.words()) {
            collect_garbage();
        }
    }

    // Compacts the arena and rewires every reference to it.
    void collect_garbage()
    {
        arena_.compact();
        for (auto& ref : learnts_) {
            ref = arena_.relocate(ref);
        }
        for (const Lit lit : trail_) {
            auto& r = reason_[lit >> 1];
            if (r != kNoReason) {
                r = arena_.relocate(r);
            }
        }
        for (auto& ws : watches_) {
            ws.clear();
        }
        arena_.for_each_live([this](ClauseRef c) { attach(c); });
    }

    // --- propagation ---------------------------------------------------------

    ClauseRef propagate()
    {
        while (queue_head_ < trail_.size()) {
            const Lit false_lit = trail_[queue_head_++] ^ 1u;
            ++stats_.propagations;
            auto& ws = watches_[false_lit];
            Watcher* i = ws.data();
            Watcher* j = i;
            Watcher* const end = i + ws.size();
            while (i != end) {
                const Watcher w = *i++;
                if (value(w.blocker) == 1) {
                    *j++ = w;
                    continue;
                }
                if (arena_.removed(w.cref)) {
                    continue;
                }
                Lit* lits = arena_.lits(w.cref);
                if (lits[0] == false_lit) {
                    lits[0] = lits[1];
                    lits[1] = false_lit;
                }
                const Lit first = lits[0];
                if (first != w.blocker && value(first) == 1) {
                    *j++ = Watcher{w.cref, first};
                    continue;
                }
                const std::uint32_t size = arena_.size(w.cref);
                bool moved = false;
                for (std::uint32_t k = 2; k < size; ++k) {
                    if (value(lits[k]) != 0) {
                        lits[1] = lits[k];
                        lits[k] = false_lit;
                        watches_[lits[1]].push_back(Watcher{w.cref, first});
                        moved = true;
                        break;
                    }
                }
                if (moved) {
                    continue;
                }
                *j++ = Watcher{w.cref, first};
                if (value(first) == 0) {
                    while (i != end) {
                        *j++ = *i++;
                    }
                    ws.resize(static_cast<std::size_t>(j - ws.data()));
                    queue_head_ = trail_.size();
                    return w.cref;
                }
                enqueue(first, w.cref);
            }
            ws.resize(static_cast<std::size_t>(j - ws.data()));
        }
        return kNoReason;
    }

    // --- conflict analysis ---------------------------------------------------

    void learn(ClauseRef conflict)
    {
        learnt_.assign(1, 0); // slot 0 receives the asserting literal
        std::uint32_t pending = 0;
        Lit asserted = 0;
        bool first = true;
        auto index = trail_.size();
        ClauseRef reason = conflict;
        do {
            if (arena_.learnt(reason)) {
                bump_clause(reason);
            }
            const Lit* lits = arena_.lits(reason);
            const auto size = arena_.size(reason);
            for (std::uint32_t k = first ? 0 : 1; k < size; ++k) {
                const Lit q = lits[k];
                const auto v = q >> 1;
                if (seen_[v] || level_[v] == 0) {
                    continue;
                }
                bump_variable(v);
                seen_[v] = 1;
                if (level_[v] == decision_level()) {
                    ++pending;
                } else {
                    learnt_.push_back(q);
                }
            }
            while (!seen_[trail_[--index] >> 1]) {
            }
            asserted = trail_[index];
            reason = reason_[asserted >> 1];
            seen_[asserted >> 1] = 0;
            --pending;
            first = false;
        } while (pending > 0);
        learnt_[0] = asserted ^ 1u;

        minimize();

        std::uint32_t back_level = 0;
        if (learnt_.size() > 1) {
            std::size_t max_at = 1;
            for (std::size_t k = 2; k < learnt_.size(); ++k) {
                if (level_[learnt_[k] >> 1] > level_[learnt_[max_at] >> 1]) {
                    max_at = k;
                }
            }
            std::swap(learnt_[1], learnt_[max_at]);
            back_level = level_[learnt_[1] >> 1];
        }

        if (config_.emit_proof) {
            record(StepKind::add, learnt_.data(), learnt_.size());
        }
        backtrack(back_level);
        if (learnt_.size() == 1) {
            enqueue(learnt_[0], kNoReason);
            return;
        }
        const ClauseRef cref = arena_.add(learnt_, true);
        bump_clause(cref);
        attach(cref);
        learnts_.push_back(cref);
        enqueue(learnt_[0], cref);
    }

    // Recursive minimisation: drops every literal whose negation is implied
    // by the other literals through reason clauses. The result stays RUP.
    void minimize()
    {
        std::uint32_t levels = 0; // abstraction of the levels in the clause
        for (std::size_t k = 1; k < learnt_.size(); ++k) {
            levels |= abstract_level(learnt_[k] >> 1);
        }
        to_clear_.assign(learnt_.begin(), learnt_.end());
        std::size_t kept = 1;
        for (std::size_t k = 1; k < learnt_.size(); ++k) {
            const auto v = learnt_[k] >> 1;
            if (reason_[v] == kNoReason || !redundant(learnt_[k], levels)) {
                learnt_[kept++] = learnt_[k];
            }
        }
        learnt_.resize(kept);
        for (const Lit lit : to_clear_) {
            seen_[lit >> 1] = 0;
        }
    }

    [[nodiscard]] std::uint32_t abstract_level(std::uint32_t v) const noexcept
    {
        return 1u << (level_[v] & 31u);
    }

    // True if `lit` (whose variable has a reason) is implied by literals
    // already marked seen. Marks newly proven variables as seen.
    bool redundant(Lit lit, std::uint32_t levels)
    {
        stack_.assign(1, lit);
        const auto top = to_clear_.size();
        while (!stack_.empty()) {
            const auto v = stack_.back() >> 1;
            stack_.pop_back();
            const ClauseRef reason = reason_[v];
            const Lit* lits = arena_.lits(reason);
            const auto size = arena_.size(reason);
            for (std::uint32_t k = 1; k < size; ++k) {
                const Lit q = lits[k];
                const auto u = q >> 1;
                if (seen_[u] || level_[u] == 0) {
                    continue;
                }
                if (reason_[u] == kNoReason || (abstract_level(u) & levels) == 0) {
                    for (auto i = top; i < to_clear_.size(); ++i) {
                        seen_[to_clear_[i] >> 1] = 0;
                    }
                    to_clear_.resize(top);
                    return false;
                }
                seen_[u] = 1;
                stack_.push_back(q);
                to_clear_.push_back(q);
            }
        }
        return true;
    }

    // --- heuristics ----------------------------------------------------------

    void bump_variable(std::uint32_t v)
    {
        activity_[v] += variable_increment_;
        if (activity_[v] > 1e100) {
            for (auto& a : activity_) {
                a *= 1e-100;
            }
            variable_increment_ *= 1e-100;
        }
        if (heap_index_[v] >= 0) {
            sift_up(static_cast<std::size_t>(heap_index_[v]));
        }
    }

    void bump_clause(ClauseRef c)
    {
        const float a = arena_.activity(c) + static_cast<float>(clause_increment_);
        arena_.set_activity(c, a);
        if (a > 1e20f) {
            for (const ClauseRef l : learnts_) {
                arena_.set_activity(l, arena_.activity(l) * 1e-20f);
            }
            clause_increment_ *= 1e-20;
        }
    }

    void decay_activities()
    {
        variable_increment_ /= config_.variable_decay;
        clause_increment_ /= config_.clause_decay;
    }

    std::optional<std::uint32_t> pick_branch_variable()
    {
        if (config_.random_decision_frequency > 0.0 && !heap_.empty() &&
            rng_.unit() < config_.random_decision_frequency) {
            const auto v = heap_[rng_.below(heap_.size())];
            if (assigns_[v] == kUnset) {
                return v;
            }
        }
        while (!heap_.empty()) {
            const auto v = heap_pop();
            if (assigns_[v] == kUnset) {
                return v;
            }
        }
        return std::nullopt;
    }

    // Max-heap on activity; equal activity prefers the lower index.
    [[nodiscard]] bool before(std::uint32_t a, std::uint32_t b) const noexcept
    {
        return activity_[a] > activity_[b] || (activity_[a] == activity_[b] && a < b);
    }

    void heap_insert(std::uint32_t v)
    {
        heap_index_[v] = static_cast<std::int32_t>(heap_.size());
        heap_.push_back(v);
        sift_up(heap_.size() - 1);
    }

    std::uint32_t heap_pop()
    {
        const auto top = heap_.front();
        heap_index_[top] = -1;
        const auto last = heap_.back();
        heap_.pop_back();
        if (!heap_.empty()) {
            heap_[0] = last;
            heap_index_[last] = 0;
            sift_down(0);
        }
        return top;
    }

    void sift_up(std::size_t i)
    {
        const auto v = heap_[i];
        while (i > 0) {
            const auto parent = (i - 1) / 2;
            if (!before(v, heap_[parent])) {
                break;
            }
            heap_[i] = heap_[parent];
            heap_index_[heap_[i]] = static_cast<std::int32_t>(i);
            i = parent;
        }
        heap_[i] = v;
        heap_index_[v] = static_cast<std::int32_t>(i);
    }

    void sift_down(std::size_t i)
    {
        const auto v = heap_[i];
        for (;;) {
            auto child = 2 * i + 1;
            if (child >= heap_.size()) {
                break;
            }
            if (child + 1 < heap_.size() && before(heap_[child + 1], heap_[child])) {
                ++child;
            }
            if (!before(heap_[child], v)) {
                break;
            }
            heap_[i] = heap_[child];
            heap_index_[heap_[i]] = static_cast<std::int32_t>(i);
            i = child;
        }
        heap_[i] = v;
        heap_index_[v] = static_cast<std::int32_t>(i);
    }

    // --- limits and proof ----------------------------------------------------

    [[nodiscard]] bool limit_reached(std::chrono::steady_clock::time_point start) const
    {
        if (config_.conflict_limit && stats_.conflicts >= *config_.conflict_limit) {
            return true;
        }
        return config_.time_limit &&
               std::chrono::steady_clock::now() - start >= *config_.time_limit;
    }

    void record(StepKind kind, const Lit* lits, std::size_t size)
    {
        DratStep step{kind, {}};
        step.literals.reserve(size);
        for (std::size_t k = 0; k < size; ++k) {
            step.literals.push_back(Literal::from_code(lits[k]));
        }
        proof_.steps.push_back(std::move(step));
    }

    Unsatisfiable refutation()
    {
        if (!config_.emit_proof) {
            return Unsatisfiable{};
        }
        proof_.steps.push_back(DratStep{StepKind::add, {}});
        return Unsatisfiable{std::move(proof_)};
    }

    const SolverConfig& config_;
    std::uint32_t num_vars_;
    Rng rng_;
    SolverStats stats_;
    bool inconsistent_ = false;

    std::vector<std::int8_t> assigns_;
    std::vector<std::uint32_t> level_;
    std::vector<ClauseRef> reason_;
    std::vector<std::uint8_t> phase_; // 1 = last assigned true
    std::vector<std::uint8_t> seen_;
    std::vector<Lit> trail_;
    std::vector<std::size_t> trail_limits_;
    std::size_t queue_head_ = 0;

    std::vector<double> activity_;
    double variable_increment_ = 1.0;
    double clause_increment_ = 1.0;
    std::vector<std::uint32_t> heap_;
    std::vector<std::int32_t> heap_index_;

    ClauseArena arena_;
    std::vector<ClauseRef> learnts_;
    std::vector<std::vector<Watcher>> watches_;
    double max_learnts_ = 0.0;
    double restart_limit_ = 0.0;

    // analysis scratch
    std::vector<Lit> learnt_;
    std::vector<Lit> stack_;
    std::vector<Lit> to_clear_;

    DratProof proof_;
};

} // namespace

SolverOutcome solve_cdcl(const Formula& formula, const SolverConfig& config)
{
    Cdcl solver{formula, config};
    return solver.solve();
}

} // namespace geosat
