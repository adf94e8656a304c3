#include "iterplan/synthesis.hpp"

namespace iterplan::synth {

namespace {

// Depth-first enumeration of memoryful strategies. Decisions are assigned to
// (state, memory) pairs in discovery order, so only reachable pairs branch.
// Memory advances by one when the current goal is visited; this is a
// different (but equally complete) update rule from the solver's.
class BruteForce {
public:
    explicit BruteForce(const GameArena& arena) : a_(arena), goals_(arena.goals.size())
    {
        slot_.assign(a_.num_states * goals_, -1);
    }

    bool run()
    {
        if (a_.error[a_.initial])
            return false;
        discover(a_.initial, advance(a_.initial, 0));
        return search(0);
    }

private:
    struct Pair {
        StateId s;
        std::size_t m;
    };

    std::size_t advance(StateId t, std::size_t m) const { return a_.goals[m][t] ? (m + 1) % goals_ : m; }

    void discover(StateId s, std::size_t m)
    {
        int& slot = slot_[s * goals_ + m];
        if (slot >= 0)
            return;
        slot = static_cast<int>(order_.size());
        order_.push_back({s, m});
        choice_.push_back(Decision::none);
    }

    // Successors of s under decision d, or empty if d is not permitted.
    std::vector<StateId> successors(StateId s, std::int32_t d) const
    {
        std::vector<StateId> out;
        for (const auto& mv : a_.out(s)) {
            if (!a_.controllable(mv.label) || static_cast<std::int32_t>(mv.label) == d)
                out.push_back(mv.target);
        }
        return out;
    }

    bool search(std::size_t k)
    {
        if (k == order_.size())
            return check();
        const Pair p = order_[k];
        std::vector<std::int32_t> options;
        bool has_u = false;
        for (const auto& mv : a_.out(p.s)) {
            if (a_.controllable(mv.label))
                options.push_back(static_cast<std::int32_t>(mv.label));
            else
                has_u = true;
        }
        if (has_u)
            options.push_back(Decision::wait);

        for (std::int32_t d : options) {
            std::vector<StateId> next = successors(p.s, d);
            bool safe = !next.empty();
            for (StateId t : next)
                safe = safe && !a_.error[t];
            if (!safe)
                continue;
            const std::size_t mark = order_.size();
            choice_[k] = d;
            for (StateId t : next)
                discover(t, advance(t, p.m));
            if (search(k + 1))
                return true;
            while (order_.size() > mark) {
                slot_[order_.back().s * goals_ + order_.back().m] = -1;
                order_.pop_back();
                choice_.pop_back();
            }
        }
        choice_[k] = Decision::none;
        return false;
    }

    // All pairs are decided: model-check the induced graph.
    bool check() const
    {
        const std::size_t n = order_.size();
        std::vector<std::vector<std::size_t>> succ(n);
        std::vector<StateSet> as(a_.assumptions.size(), StateSet(n)), gs(goals_, StateSet(n));
        for (std::size_t v = 0; v < n; ++v) {
            const Pair p = order_[v];
            for (StateId t : successors(p.s, choice_[v]))
                succ[v].push_back(static_cast<std::size_t>(slot_[t * goals_ + advance(t, p.m)]));
            for (std::size_t j = 0; j < as.size(); ++j)
                as[j][v] = a_.assumptions[j][p.s];
            for (std::size_t i = 0; i < goals_; ++i)
                gs[i][v] = a_.goals[i][p.s];
        }
        return !find_fair_cycle(succ, as, gs);
    }

    const GameArena& a_;
    std::size_t goals_;
    std::vector<int> slot_;
    std::vector<Pair> order_;
    std::vector<std::int32_t> choice_;
};

} // namespace

bool brute_force_realizability(const GameArena& arena)
{
    if (arena.num_states > 8 || arena.goals.size() > 2 || arena.assumptions.size() > 2)
        throw ValidationError("brute-force oracle is limited to 8 states, 2 goals and 2 assumptions");
    return BruteForce(arena).run();
}

} // namespace iterplan::synth
