#include "iterplan/synthesis.hpp"

#include <deque>
#include <limits>
#include <map>

namespace iterplan::synth {

namespace {

using Key = std::uint64_t;
constexpr Key unreachable_key = std::numeric_limits<Key>::max();

class Solver {
public:
    explicit Solver(const GameArena& arena) : a_(arena), n_(arena.num_states) {}

    [[nodiscard]] StateSet cpre(const StateSet& target) const
    {
        StateSet out(n_);
        for (StateId s = 0; s < n_; ++s) {
            if (a_.error[s])
                continue;
            bool has_u = false, good_c = false, bad_u = false;
            for (const auto& m : a_.out(s)) {
                if (a_.controllable(m.label)) {
                    good_c = good_c || target[m.target];
                }
                else {
                    has_u = true;
                    if (!target[m.target]) {
                        bad_u = true;
                        break;
                    }
                }
            }
            out[s] = !bad_u && (has_u || good_c);
        }
        return out;
    }

    // μY for goal i inside Z. With `rank` non-null, records the first layer
    // (1-based) each state enters and the smallest assumption index whose X
    // contains it at that layer.
    StateSet reach(std::size_t i, const StateSet& z, std::vector<Key>* rank) const
    {
        const std::size_t m = a_.assumptions.size();
        const StateSet goal_base = a_.goals[i] & cpre(z);
        StateSet y(n_);
        for (Key layer = 1;; ++layer) {
            const StateSet base = goal_base | cpre(y);
            StateSet next = base;
            std::vector<StateSet> xs;
            for (std::size_t j = 0; j < m; ++j) {
                StateSet x = z;
                for (;;) {
                    StateSet nx = base | (~a_.assumptions[j] & cpre(x));
                    if (nx == x)
                        break;
                    x = std::move(nx);
                }
                next |= x;
                if (rank)
                    xs.push_back(std::move(x));
            }
            if (rank) {
                for (StateId s = 0; s < n_; ++s) {
                    if (!next[s] || y[s])
                        continue;
                    std::size_t j = 0;
                    while (j < m && !xs[j][s])
                        ++j;
                    (*rank)[s] = layer * (m + 1) + j + 1;
                }
            }
            if (next == y)
                return y;
            y = std::move(next);
        }
    }

    [[nodiscard]] StateSet winning() const
    {
        StateSet z = ~a_.error;
        for (;;) {
            StateSet next = z;
            for (std::size_t i = 0; i < a_.goals.size(); ++i)
                next &= reach(i, z, nullptr);
            if (next == z)
                return z;
            z = std::move(next);
        }
    }

private:
    const GameArena& a_;
    std::size_t n_;
};

} // namespace

std::size_t Strategy::update(const GameArena& arena, StateId s, std::size_t m) const
{
    for (std::size_t k = 0; k < memory_size && arena.goals[m][s]; ++k)
        m = (m + 1) % memory_size;
    return m;
}

StateSet winning_region(const GameArena& arena)
{
    return Solver(arena).winning();
}

std::optional<Strategy> solve_gr1(const GameArena& arena)
{
    Solver solver(arena);
    const StateSet z = solver.winning();
    if (!z[arena.initial])
        return std::nullopt;

    const std::size_t n = arena.num_states;
    const std::size_t goals = arena.goals.size();
    std::vector<std::vector<Key>> rank(goals, std::vector<Key>(n, unreachable_key));
    for (std::size_t i = 0; i < goals; ++i)
        solver.reach(i, z, &rank[i]);

    Strategy st;
    st.memory_size = goals;
    st.winning = z;
    st.decision.assign(goals, std::vector<std::int32_t>(n, Decision::none));

    // Successor key under memory m: 0 once the goal is reached, else the
    // (layer, assumption) rank. Each decision is scored by its worst
    // successor; the best score wins, waiting first, then labels in order.
    // This always satisfies the usual rank-decrease condition.
    for (std::size_t m = 0; m < goals; ++m) {
        auto key = [&](StateId t) -> Key {
            if (!z[t])
                return unreachable_key;
            return arena.goals[m][t] ? 0 : rank[m][t];
        };
        for (StateId s = 0; s < n; ++s) {
            if (!z[s])
                continue;
            Key env = 0;
            bool has_u = false;
            for (const auto& mv : arena.out(s)) {
                if (!arena.controllable(mv.label)) {
                    has_u = true;
                    env = std::max(env, key(mv.target));
                }
            }
            std::int32_t best = Decision::none;
            Key best_key = unreachable_key;
            if (has_u && env != unreachable_key) {
                best = Decision::wait;
                best_key = env;
            }
            for (const auto& mv : arena.out(s)) {
                if (!arena.controllable(mv.label))
                    continue;
                Key k = std::max(env, key(mv.target));
                if (k < best_key) {
                    best = static_cast<std::int32_t>(mv.label);
                    best_key = k;
                }
            }
            st.decision[m][s] = best;
        }
    }
    return st;
}

Lts extract_controller(const GameArena& arena, const Strategy& strategy)
{
    using Pair = std::pair<StateId, std::size_t>;
    std::map<Pair, StateId> index;
    std::deque<Pair> queue;
    std::vector<NamedTransition> transitions;

    auto visit = [&](Pair p) -> StateId {
        auto [it, inserted] = index.try_emplace(p, static_cast<StateId>(index.size()));
        if (inserted)
            queue.push_back(p);
        return it->second;
    };
    visit({arena.initial, strategy.update(arena, arena.initial, 0)});
    while (!queue.empty()) {
        auto [s, m] = queue.front();
        queue.pop_front();
        const StateId from = index.at({s, m});
        const std::int32_t d = strategy.decision[m][s];
        if (d == Decision::none)
            throw ValidationError("strategy reaches a state outside the winning region");
        for (const auto& mv : arena.out(s)) {
            if (arena.controllable(mv.label) && static_cast<std::int32_t>(mv.label) != d)
                continue;
            StateId to = visit({mv.target, strategy.update(arena, mv.target, m)});
            transitions.push_back({from, arena.alphabet[mv.label].name, to});
        }
    }
    return Lts("CONTROLLER", index.size(), 0, arena.alphabet, transitions);
}

} // namespace iterplan::synth
