#include "iterplan/synthesis.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace iterplan::synth {

namespace {

constexpr std::size_t no_node = static_cast<std::size_t>(-1);

// Iterative Tarjan over the nodes with `keep` set. Components come out in
// reverse topological order.
std::vector<std::vector<std::size_t>> components(const std::vector<std::vector<std::size_t>>& succ,
                                                 const std::vector<char>& keep)
{
    const std::size_t n = succ.size();
    std::vector<std::size_t> index(n, no_node), low(n, 0);
    std::vector<char> on_stack(n, 0);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> out;
    std::size_t counter = 0;

    struct Frame {
        std::size_t node;
        std::size_t edge;
    };
    std::vector<Frame> call;
    for (std::size_t root = 0; root < n; ++root) {
        if (!keep[root] || index[root] != no_node)
            continue;
        call.push_back({root, 0});
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!call.empty()) {
            Frame& f = call.back();
            if (f.edge < succ[f.node].size()) {
                std::size_t w = succ[f.node][f.edge++];
                if (!keep[w])
                    continue;
                if (index[w] == no_node) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.push_back({w, 0});
                }
                else if (on_stack[w]) {
                    low[f.node] = std::min(low[f.node], index[w]);
                }
                continue;
            }
            const std::size_t v = f.node;
            call.pop_back();
            if (!call.empty())
                low[call.back().node] = std::min(low[call.back().node], low[v]);
            if (low[v] == index[v]) {
                std::vector<std::size_t> comp;
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp.push_back(w);
                } while (w != v);
                out.push_back(std::move(comp));
            }
        }
    }
    return out;
}

// Shortest path from `from` to any node with target[node] set, moving only
// through nodes with allowed[node] set. Returns the node sequence including both ends.
std::vector<std::size_t> bfs_path(const std::vector<std::vector<std::size_t>>& succ, std::size_t from,
                                  const std::vector<char>& allowed, const std::vector<char>& target)
{
    std::vector<std::size_t> parent(succ.size(), no_node);
    std::deque<std::size_t> queue{from};
    parent[from] = from;
    while (!queue.empty()) {
        std::size_t v = queue.front();
        queue.pop_front();
        if (target[v]) {
            std::vector<std::size_t> path{v};
            while (path.back() != from)
                path.push_back(parent[path.back()]);
            std::reverse(path.begin(), path.end());
            return path;
        }
        for (std::size_t w : succ[v]) {
            if (allowed[w] && parent[w] == no_node) {
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    return {};
}

} // namespace

std::optional<Lasso> find_fair_cycle(const std::vector<std::vector<std::size_t>>& succ,
                                     const std::vector<StateSet>& assumptions, const std::vector<StateSet>& goals)
{
    const std::size_t n = succ.size();
    if (n == 0)
        return std::nullopt;
    std::vector<char> reachable(n, 0);
    {
        std::deque<std::size_t> queue{0};
        reachable[0] = 1;
        while (!queue.empty()) {
            std::size_t v = queue.front();
            queue.pop_front();
            for (std::size_t w : succ[v]) {
                if (!reachable[w]) {
                    reachable[w] = 1;
                    queue.push_back(w);
                }
            }
        }
    }

    for (std::size_t i = 0; i < goals.size(); ++i) {
        std::vector<char> keep(n, 0);
        for (std::size_t v = 0; v < n; ++v)
            keep[v] = reachable[v] && !goals[i][v];
        for (const auto& comp : components(succ, keep)) {
            std::vector<char> in(n, 0);
            for (std::size_t v : comp)
                in[v] = 1;
            const std::size_t entry = *std::min_element(comp.begin(), comp.end());
            bool cyclic = comp.size() > 1 ||
                          std::find(succ[entry].begin(), succ[entry].end(), entry) != succ[entry].end();
            if (!cyclic)
                continue;
            bool fair = std::all_of(assumptions.begin(), assumptions.end(), [&](const StateSet& a) {
                return std::any_of(comp.begin(), comp.end(), [&](std::size_t v) { return a[v]; });
            });
            if (!fair)
                continue;

            Lasso lasso;
            lasso.goal = i;
            std::vector<char> at_entry(n, 0);
            at_entry[entry] = 1;
            lasso.stem = bfs_path(succ, 0, reachable, at_entry);

            // Walk entry -> a_1 -> ... -> a_m -> entry inside the component.
            std::size_t cur = entry;
            lasso.loop.push_back(entry);
            auto walk_to = [&](const std::vector<char>& target, bool leave_first) {
                std::vector<std::size_t> p;
                if (leave_first) {
                    // Take one step first so a cycle is produced even if cur is a target.
                    for (std::size_t w : succ[cur]) {
                        if (!in[w])
                            continue;
                        p = bfs_path(succ, w, in, target);
                        if (!p.empty()) {
                            p.insert(p.begin(), cur);
                            break;
                        }
                    }
                }
                else {
                    p = bfs_path(succ, cur, in, target);
                }
                for (std::size_t k = 1; k < p.size(); ++k)
                    lasso.loop.push_back(p[k]);
                cur = p.back();
            };
            for (const auto& a : assumptions) {
                std::vector<char> target(n, 0);
                for (std::size_t v : comp)
                    target[v] = a[v];
                walk_to(target, false);
            }
            walk_to(at_entry, true);
            lasso.loop.pop_back(); // closing copy of entry
            return lasso;
        }
    }
    return std::nullopt;
}

bool VerificationReport::passed(Check c) const
{
    return std::none_of(violations.begin(), violations.end(), [c](const Violation& v) { return v.check == c; });
}

VerificationReport verify_controller(const Lts& plant, const Lts& controller, const std::vector<Fluent>& fluents,
                                     const std::vector<Formula>& assumptions, const std::vector<Formula>& goals,
                                     const std::vector<Formula>& safety)
{
    // Union alphabet; each label maps to its id in each part, if owned.
    std::map<std::string, ActionLabel> labels;
    for (const auto& l : plant.alphabet())
        labels.emplace(l.name, l);
    for (const auto& l : controller.alphabet()) {
        auto [it, inserted] = labels.emplace(l.name, l);
        if (!inserted && it->second.controllability != l.controllability)
            throw ValidationError("controllability conflict on '" + l.name + "'");
    }
    std::vector<ActionLabel> alphabet;
    std::vector<std::optional<LabelId>> in_plant, in_ctrl;
    for (const auto& [name, l] : labels) {
        alphabet.push_back(l);
        in_plant.push_back(plant.label_id(name));
        in_ctrl.push_back(controller.label_id(name));
    }

    std::vector<std::string> names;
    for (const auto& f : fluents)
        names.push_back(f.name);
    FluentTable table(fluents, alphabet);
    std::vector<SafetyMonitor> monitors;
    for (const auto& s : safety)
        monitors.emplace_back(s, names);
    std::vector<BoolProgram> assumption_programs, goal_programs;
    for (const auto& a : assumptions)
        assumption_programs.emplace_back(a, names);
    for (const auto& g : goals)
        goal_programs.emplace_back(g, names);

    struct Node {
        StateId p, c;
        std::vector<MonitorStatus> status;
        Valuation v;
        auto operator<=>(const Node&) const = default;
    };
    std::map<Node, std::size_t> index;
    std::vector<const Node*> nodes;
    std::vector<std::size_t> parent;
    std::vector<LabelId> via;
    std::vector<std::vector<std::size_t>> succ;
    std::vector<std::vector<LabelId>> succ_label;

    auto intern = [&](Node node, std::size_t from, LabelId label) {
        auto [it, inserted] = index.try_emplace(std::move(node), nodes.size());
        if (inserted) {
            nodes.push_back(&it->first);
            parent.push_back(from);
            via.push_back(label);
            succ.emplace_back();
            succ_label.emplace_back();
        }
        return it->second;
    };
    auto path_to = [&](std::size_t v) {
        std::vector<std::string> path;
        while (v != 0) {
            path.push_back(alphabet[via[v]].name);
            v = parent[v];
        }
        std::reverse(path.begin(), path.end());
        return path;
    };

    VerificationReport report;
    std::vector<char> safety_reported(monitors.size(), 0);
    bool deadlock_reported = false, blocking_reported = false;

    Node start{plant.initial(), controller.initial(), {}, table.initial()};
    for (const auto& m : monitors)
        start.status.push_back(m.start(start.v));
    intern(std::move(start), no_node, 0);

    std::vector<char> error_node;
    for (std::size_t cur = 0; cur < nodes.size(); ++cur) {
        const Node node = *nodes[cur];
        bool bad = false;
        for (std::size_t i = 0; i < monitors.size(); ++i) {
            if (node.status[i] != MonitorStatus::error)
                continue;
            bad = true;
            if (!safety_reported[i]) {
                safety_reported[i] = 1;
                report.violations.push_back(
                    {Check::safety, "safety goal violated: " + to_string(safety[i]), path_to(cur), {}});
            }
        }
        error_node.push_back(bad);
        if (bad)
            continue;

        for (LabelId l = 0; l < alphabet.size(); ++l) {
            std::optional<StateId> p = node.p, c = node.c;
            if (in_plant[l])
                p = plant.successor(node.p, *in_plant[l]);
            if (in_ctrl[l])
                c = controller.successor(node.c, *in_ctrl[l]);
            if (!alphabet[l].controlled() && in_plant[l] && p && !c && !blocking_reported) {
                blocking_reported = true;
                report.violations.push_back({Check::blocking,
                                             "controller blocks uncontrollable '" + alphabet[l].name + "'",
                                             path_to(cur),
                                             {}});
            }
            if (!p || !c)
                continue;
            Node next{*p, *c, {}, node.v};
            table.apply(next.v, l);
            for (std::size_t i = 0; i < monitors.size(); ++i)
                next.status.push_back(monitors[i].step(node.status[i], next.v));
            std::size_t to = intern(std::move(next), cur, l);
            succ[cur].push_back(to);
            succ_label[cur].push_back(l);
        }
        if (succ[cur].empty() && !deadlock_reported) {
            deadlock_reported = true;
            report.violations.push_back({Check::deadlock, "deadlock", path_to(cur), {}});
        }
    }
    report.product_states = nodes.size();

    const std::size_t n = nodes.size();
    auto mark = [&](const std::vector<BoolProgram>& programs) {
        std::vector<StateSet> sets;
        for (const auto& prog : programs) {
            StateSet set(n);
            for (std::size_t v = 0; v < n; ++v)
                set[v] = !error_node[v] && prog(nodes[v]->v);
            sets.push_back(std::move(set));
        }
        return sets;
    };
    std::vector<StateSet> a_sets = mark(assumption_programs);
    if (a_sets.empty())
        a_sets.push_back(StateSet(n).set());
    std::vector<StateSet> g_sets = mark(goal_programs);
    for (auto& a : a_sets) {
        for (std::size_t v = 0; v < n; ++v)
            a[v] = a[v] && !error_node[v];
    }

    if (auto lasso = find_fair_cycle(succ, a_sets, g_sets)) {
        auto edge = [&](std::size_t u, std::size_t w) {
            for (std::size_t k = 0; k < succ[u].size(); ++k) {
                if (succ[u][k] == w)
                    return alphabet[succ_label[u][k]].name;
            }
            return std::string("?");
        };
        Violation v{Check::liveness, "liveness goal violated: []<> " + to_string(goals[lasso->goal]), {}, {}};
        for (std::size_t k = 1; k < lasso->stem.size(); ++k)
            v.path.push_back(edge(lasso->stem[k - 1], lasso->stem[k]));
        for (std::size_t k = 0; k < lasso->loop.size(); ++k)
            v.loop.push_back(edge(lasso->loop[k], lasso->loop[(k + 1) % lasso->loop.size()]));
        report.violations.push_back(std::move(v));
    }
    return report;
}

VerificationReport verify_on_arena(const GameArena& arena, const Lts& controller)
{
    std::vector<std::optional<LabelId>> to_ctrl;
    for (const auto& l : arena.alphabet)
        to_ctrl.push_back(controller.label_id(l.name));

    std::map<std::pair<StateId, StateId>, std::size_t> index;
    std::vector<std::pair<StateId, StateId>> nodes;
    std::vector<std::size_t> parent;
    std::vector<LabelId> via;
    std::vector<std::vector<std::size_t>> succ;
    auto intern = [&](std::pair<StateId, StateId> node, std::size_t from, LabelId label) {
        auto [it, inserted] = index.try_emplace(node, nodes.size());
        if (inserted) {
            nodes.push_back(node);
            parent.push_back(from);
            via.push_back(label);
            succ.emplace_back();
        }
        return it->second;
    };
    auto path_to = [&](std::size_t v) {
        std::vector<std::string> path;
        for (; v != 0; v = parent[v])
            path.push_back(arena.alphabet[via[v]].name);
        std::reverse(path.begin(), path.end());
        return path;
    };

    VerificationReport report;
    auto report_once = [&](Check c, std::string msg, std::size_t v) {
        if (report.passed(c))
            report.violations.push_back({c, std::move(msg), path_to(v), {}});
    };
    intern({arena.initial, controller.initial()}, no_node, 0);
    for (std::size_t cur = 0; cur < nodes.size(); ++cur) {
        auto [s, c] = nodes[cur];
        if (arena.error[s]) {
            report_once(Check::safety, "error state reached", cur);
            continue;
        }
        for (const auto& mv : arena.out(s)) {
            std::optional<StateId> next_c = c;
            if (to_ctrl[mv.label])
                next_c = controller.successor(c, *to_ctrl[mv.label]);
            if (!next_c) {
                if (!arena.controllable(mv.label))
                    report_once(Check::blocking, "controller blocks '" + arena.alphabet[mv.label].name + "'", cur);
                continue;
            }
            std::size_t to = intern({mv.target, *next_c}, cur, mv.label);
            succ[cur].push_back(to);
        }
        if (succ[cur].empty())
            report_once(Check::deadlock, "deadlock", cur);
    }
    report.product_states = nodes.size();

    const std::size_t n = nodes.size();
    auto lift = [&](const std::vector<StateSet>& sets) {
        std::vector<StateSet> out;
        for (const auto& set : sets) {
            StateSet l(n);
            for (std::size_t v = 0; v < n; ++v)
                l[v] = set[nodes[v].first] && !arena.error[nodes[v].first];
            out.push_back(std::move(l));
        }
        return out;
    };
    if (auto lasso = find_fair_cycle(succ, lift(arena.assumptions), lift(arena.goals))) {
        Violation v{Check::liveness, "goal " + std::to_string(lasso->goal) + " starved", path_to(lasso->loop.front()),
                    {}};
        report.violations.push_back(std::move(v));
    }
    return report;
}

VerificationReport verify_controller(const ControlProblem& problem, const Lts& controller)
{
    return verify_controller(problem.plant, controller, problem.fluents, problem.assumptions, problem.goals,
                             problem.safety);
}

} // namespace iterplan::synth
