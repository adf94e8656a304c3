#include "iterplan/templates.hpp"

#include "iterplan/error.hpp"

#include <algorithm>
#include <set>

namespace iterplan::templates {

namespace {

constexpr auto C = Controllability::controlled;
constexpr auto U = Controllability::uncontrolled;

void require_distinct(const std::string& what, const std::vector<std::string>& labels)
{
    std::set<std::string> seen;
    for (const auto& l : labels) {
        if (!seen.insert(l).second)
            throw ValidationError(what + ": label collision on '" + l + "'");
    }
}

} // namespace

Lts iterator_model()
{
    return Lts("ITERATOR", 4, 0,
               {{"has.next?", C}, {"y.next", U}, {"n.next", U}, {"remove.next", C}, {"reset", C}},
               {{0, "has.next?", 1}, {1, "y.next", 2}, {1, "n.next", 3}, {2, "remove.next", 0}, {3, "reset", 0}});
}

Lts binary_sensor(const std::string& query, const std::string& yes, const std::string& no)
{
    require_distinct("binary_sensor", {query, yes, no});
    return Lts("SENSOR", 2, 0, {{query, C}, {yes, U}, {no, U}}, {{0, query, 1}, {1, yes, 0}, {1, no, 0}});
}

Lts next_query_window(const std::vector<std::string>& queries)
{
    std::vector<std::string> all = queries;
    all.push_back("y.next");
    all.push_back("remove.next");
    require_distinct("next_query_window", all);
    std::vector<ActionLabel> alphabet{{"y.next", U}, {"remove.next", C}};
    std::vector<NamedTransition> ts{{0, "y.next", 1}, {1, "remove.next", 0}, {0, "remove.next", 0}};
    for (const auto& q : queries) {
        alphabet.push_back({q, C});
        ts.push_back({1, q, 1});
    }
    return Lts("NEXT_WINDOW", 2, 0, std::move(alphabet), ts);
}

Lts current_query_window(const std::vector<std::string>& actions)
{
    std::vector<std::string> all = actions;
    all.push_back("has.next?");
    all.push_back("arrived");
    require_distinct("current_query_window", all);
    std::vector<ActionLabel> alphabet{{"has.next?", C}, {"arrived", U}};
    std::vector<NamedTransition> ts{{0, "has.next?", 0}, {0, "arrived", 1}, {1, "has.next?", 0}};
    for (const auto& a : actions) {
        alphabet.push_back({a, C});
        ts.push_back({1, a, 1});
    }
    return Lts("CURRENT_WINDOW", 2, 0, std::move(alphabet), ts);
}

Lts capability_pair(const std::string& command, const std::string& done, const std::vector<std::string>& instantaneous)
{
    std::vector<std::string> all = instantaneous;
    all.push_back(command);
    all.push_back(done);
    require_distinct("capability_pair", all);
    std::vector<ActionLabel> alphabet{{command, C}, {done, U}};
    std::vector<NamedTransition> ts{{0, command, 1}, {1, done, 0}};
    for (const auto& a : instantaneous) {
        alphabet.push_back({a, C});
        ts.push_back({0, a, 0});
        ts.push_back({1, a, 1});
    }
    return Lts("CAPABILITY", 2, 0, std::move(alphabet), ts);
}

Lts go_guard()
{
    return Lts("GO_GUARD", 3, 0, {{"y.next", U}, {"go.next", C}, {"remove.next", C}},
               {{0, "y.next", 1}, {1, "go.next", 2}, {1, "remove.next", 0}, {2, "remove.next", 0}});
}

const std::vector<std::string>& names()
{
    static const std::vector<std::string> n{"binary_sensor", "capability_pair", "current_query_window",
                                            "go_guard",      "iterator",        "next_query_window"};
    return n;
}

Lts instantiate(const std::string& name, const std::vector<std::string>& args)
{
    auto arity = [&](std::size_t lo, std::size_t hi) {
        if (args.size() < lo || args.size() > hi)
            throw ValidationError("template '" + name + "' takes " + std::to_string(lo) +
                                  (hi != lo ? " or more" : "") + " argument(s), got " + std::to_string(args.size()));
    };
    if (name == "iterator") {
        arity(0, 0);
        return iterator_model();
    }
    if (name == "go_guard") {
        arity(0, 0);
        return go_guard();
    }
    if (name == "binary_sensor") {
        arity(3, 3);
        return binary_sensor(args[0], args[1], args[2]);
    }
    if (name == "next_query_window") {
        arity(1, SIZE_MAX);
        return next_query_window(args);
    }
    if (name == "current_query_window") {
        arity(1, SIZE_MAX);
        return current_query_window(args);
    }
    if (name == "capability_pair") {
        arity(2, SIZE_MAX);
        return capability_pair(args[0], args[1], {args.begin() + 2, args.end()});
    }
    throw ValidationError("unknown template '" + name + "'");
}

} // namespace iterplan::templates
