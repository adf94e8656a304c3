#include <doctest.h>

#include "iterplan/spec.hpp"

#include <random>

using namespace iterplan;
using namespace iterplan::spec;

namespace {

SpecError parse_error(std::string_view text)
{
    try {
        (void)parse(text);
    }
    catch (const SpecError& e) {
        return e;
    }
    FAIL("expected a SpecError for: " << text);
    return SpecError(SpecError::Kind::syntax, {}, "");
}

Formula F(const char* n) { return Formula::atom(n); }

// Random valid documents for the round-trip harness.
class DocGenerator {
public:
    explicit DocGenerator(unsigned seed) : rng_(seed) {}

    std::string text()
    {
        std::vector<std::string> labels;
        int nl = pick(3, 8);
        for (int i = 0; i < nl; ++i)
            labels.push_back(std::string(1, char('a' + i)) + (coin() ? ".x" : "") + (coin() ? "?" : ""));
        std::string out, ctrl = "controlled", unc = "uncontrolled";
        for (const auto& l : labels)
            (coin() ? ctrl : unc) += " " + l;
        out += ctrl + "\n" + unc + "\n";

        std::vector<std::string> procs;
        for (int p = 0, np = pick(0, 3); p < np; ++p) {
            std::string name = "P" + std::to_string(p);
            procs.push_back(name);
            if (coin()) {
                auto a = labels[0], b = labels[1], c = labels[2];
                out += "process " + name + " = template binary_sensor(" + a + ", " + b + ", " + c + ")\n";
                continue;
            }
            int ns = pick(1, 4);
            out += "process " + name + " = states " + std::to_string(ns) + " ; init " + std::to_string(pick(0, ns - 1));
            if (coin())
                out += " ; alphabet {" + labels[pick(0, nl - 1)] + "}";
            for (int s = 0; s < ns; ++s)
                for (const auto& l : labels)
                    if (pick(0, 3) == 0)
                        out += " ;\n   " + std::to_string(s) + " -" + l + "-> " + std::to_string(pick(0, ns - 1));
            out += "\n";
        }

        std::vector<std::string> atoms_pool = labels;
        for (int f = 0, nf = pick(0, 3); f < nf; ++f) {
            std::string name = "Fl" + std::to_string(f);
            std::string ini = labels[pick(0, nl - 1)], term = labels[pick(0, nl - 1)];
            if (ini == term)
                out += "fluent " + name + " = <" + ini + ", {}>";
            else
                out += "fluent " + name + " = <{" + ini + "}, {" + term + "}>";
            if (coin())
                out += coin() ? " initially true" : " initially false";
            out += "\n";
            atoms_pool.push_back(name);
        }
        for (int d = 0, nd = pick(0, 2); d < nd; ++d) {
            std::string name = "D" + std::to_string(d);
            out += "define " + name + " = " + bexpr(atoms_pool, 3) + "\n";
            atoms_pool.push_back(name);
        }
        for (int a = 0, na = pick(0, 2); a < na; ++a)
            out += "assume liveness []<> (" + bexpr(atoms_pool, 2) + ")\n";
        for (int g = 0, ng = pick(0, 3); g < ng; ++g) {
            switch (pick(0, 2)) {
            case 0: out += "goal liveness []<> (" + bexpr(atoms_pool, 2) + ")\n"; break;
            case 1: out += "goal safety always (" + bexpr(atoms_pool, 1) + " => " + bexpr(atoms_pool, 2) + ")\n"; break;
            default:
                out += "goal safety [] (" + bexpr(atoms_pool, 1) + " => not (" + bexpr(atoms_pool, 1) + ") wuntil (" +
                       bexpr(atoms_pool, 2) + "))\n";
            }
        }
        if (!procs.empty()) {
            out += "plant";
            for (const auto& p : procs)
                if (coin() || p == procs[0])
                    out += " " + p;
            out += "\n";
        }
        return out;
    }

private:
    std::mt19937 rng_;
    int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool coin() { return pick(0, 1) == 1; }

    std::string bexpr(const std::vector<std::string>& pool, int depth)
    {
        if (depth <= 0 || pick(0, 2) == 0) {
            int r = pick(0, 20);
            if (r == 0)
                return "true";
            if (r == 1)
                return "false";
            return pool[pick(0, static_cast<int>(pool.size()) - 1)];
        }
        switch (pick(0, 4)) {
        case 0: return "not " + bexpr(pool, depth - 1);
        case 1: return "(" + bexpr(pool, depth - 1) + " and " + bexpr(pool, depth - 1) + ")";
        case 2: return bexpr(pool, depth - 1) + " or " + bexpr(pool, depth - 1);
        case 3: return "(" + bexpr(pool, depth - 1) + " => " + bexpr(pool, depth - 1) + ")";
        default: return "(" + bexpr(pool, depth - 1) + " iff " + bexpr(pool, depth - 1) + ")";
        }
    }
};

} // namespace

TEST_SUITE("spec parse")
{
    TEST_CASE("empty document")
    {
        SpecDocument d = parse("");
        CHECK(d == SpecDocument{});
        CHECK(parse("# only a comment\n\n   \n") == SpecDocument{});
        CHECK(print(d).empty());
    }

    TEST_CASE("fluent definition")
    {
        auto d = parse("controlled has.next?\nuncontrolled yes.next.inP\n"
                       "fluent MustPatrol = <{yes.next.inP}, {has.next?}> initially false\n");
        REQUIRE(d.fluents.size() == 1);
        CHECK(d.fluents[0] == Fluent::make("MustPatrol", {"yes.next.inP"}, {"has.next?"}, false));
        auto e = parse("controlled a b\nfluent X = <a, b>\nfluent Y = <{}, {a}> initially true\n");
        CHECK(e.fluents[0] == Fluent::make("X", {"a"}, {"b"}));
        CHECK(e.fluents[1].initial);
    }

    TEST_CASE("liveness goal")
    {
        auto d = parse("controlled has.next?\nfluent HasNextQ = <has.next?, {}>\ngoal liveness []<> HasNextQ\n");
        REQUIRE(d.goals.size() == 1);
        CHECK(d.goals[0].kind == GoalKind::liveness);
        CHECK(d.goals[0].formula == Formula::always_eventually(F("HasNextQ")));
    }

    TEST_CASE("safety goal with define declared later")
    {
        auto d = parse("controlled remove.next\nuncontrolled y.next\n"
                       "goal safety always (y.next => not remove.next wuntil V)\n"
                       "define V = y.next or remove.next\n");
        auto expected = Formula::always(
            Formula::implication(F("y.next"), Formula::weak_until(Formula::negation(F("remove.next")), F("V"))));
        CHECK(d.goals[0].formula == expected);
        CHECK(expand(d, d.goals[0].formula) ==
              Formula::always(Formula::implication(
                  F("y.next"), Formula::weak_until(Formula::negation(F("remove.next")),
                                                   Formula::disjunction(F("y.next"), F("remove.next"))))));
    }

    TEST_CASE("explicit process with continuation lines")
    {
        auto d = parse("controlled remove.next is.next.inP?\nuncontrolled y.next\n"
                       "process P = states 2 ; init 0 ; 0 -y.next-> 1 ;\n"
                       "  1 -remove.next-> 0 ; 1 -is.next.inP?-> 1 ; 0 -remove.next-> 0\n"
                       "plant P\n");
        REQUIRE(d.processes.size() == 1);
        Lts p = process_lts(d, d.processes[0]);
        CHECK(p.num_states() == 2);
        CHECK(p.transitions().size() == 4);
        CHECK_FALSE(p.label(*p.label_id("y.next")).controlled());
        CHECK(plant_lts(d).num_states() == 2);
    }

    TEST_CASE("precedence")
    {
        auto d = parse("controlled a b c\ndefine X = a or b and c\ndefine Y = a => b iff c\ndefine Z = not a and b\n");
        CHECK(d.defines[0].body == Formula::disjunction(F("a"), Formula::conjunction(F("b"), F("c"))));
        CHECK(d.defines[1].body == Formula::equivalence(Formula::implication(F("a"), F("b")), F("c")));
        CHECK(d.defines[2].body == Formula::conjunction(Formula::negation(F("a")), F("b")));
    }

    TEST_CASE("diagnostics carry locations")
    {
        struct Case {
            const char* text;
            SpecError::Kind kind;
            int line, column;
        };
        const Case cases[] = {
            {"controlled a\nprocess P = states 1 ; init 0 ; 0 -a-> 0 $", SpecError::Kind::lexical, 2, 42},
            {"controlled a\nprocess P = states 1 ; init 0 ; 0 -a 0", SpecError::Kind::lexical, 2, 35},
            {"controlled Bad", SpecError::Kind::lexical, 1, 12},
            {"controlled a\nfluent F = <a, a", SpecError::Kind::syntax, 2, 17},
            {"frobnicate x", SpecError::Kind::syntax, 1, 1},
            {"controlled a\ngoal liveness []<> (a", SpecError::Kind::syntax, 2, 22},
            {"controlled a\nfluent F = <a, b>", SpecError::Kind::undeclared, 2, 16},
            {"controlled a\ngoal liveness []<> Nope", SpecError::Kind::undeclared, 2, 20},
            {"plant P", SpecError::Kind::undeclared, 1, 7},
            {"controlled a\nuncontrolled a", SpecError::Kind::controllability, 2, 14},
            {"controlled a a", SpecError::Kind::duplicate, 1, 14},
            {"controlled a b\nfluent F = <a, b>\nfluent F = <b, a>", SpecError::Kind::duplicate, 3, 8},
            {"controlled a\nprocess P = states 2 ; init 0 ; 0 -a-> 0 ; 0 -a-> 1", SpecError::Kind::semantic, 2, 9},
            {"controlled a\nprocess P = states 1 ; init 0 ; 0 -a-> 3", SpecError::Kind::semantic, 2, 40},
            {"controlled a\nassume liveness always a", SpecError::Kind::semantic, 2, 17},
            {"controlled a\ndefine X = Y\ndefine Y = X", SpecError::Kind::semantic, 3, 12},
            {"controlled a\nprocess P = template iterator", SpecError::Kind::undeclared, 2, 9},
        };
        for (const auto& c : cases) {
            CAPTURE(std::string(c.text));
            auto e = parse_error(c.text);
            CHECK(e.kind() == c.kind);
            CHECK(e.span().line == c.line);
            CHECK(e.span().column == c.column);
            CHECK(std::string(e.what()).rfind(std::to_string(c.line) + ":" + std::to_string(c.column) + ": ", 0) == 0);
        }
    }

    TEST_CASE("spans always point inside the input")
    {
        std::mt19937 rng(8);
        std::string base = builtin_text("fire_patrol");
        for (int round = 0; round < 300; ++round) {
            std::string text = base;
            std::size_t at = std::uniform_int_distribution<std::size_t>(0, text.size() - 1)(rng);
            const char junk[] = "$(){}<>=;-,x?";
            text[at] = junk[std::uniform_int_distribution<int>(0, sizeof(junk) - 2)(rng)];
            try {
                (void)parse(text);
            }
            catch (const SpecError& e) {
                // Count lines and check the column is inside (or just past) that line.
                int line = 1;
                std::size_t start = 0;
                for (std::size_t i = 0; i < text.size() && line < e.span().line; ++i)
                    if (text[i] == '\n') {
                        ++line;
                        start = i + 1;
                    }
                REQUIRE(line == e.span().line);
                std::size_t end = text.find('\n', start);
                if (end == std::string::npos)
                    end = text.size();
                REQUIRE(e.span().column >= 1);
                REQUIRE(static_cast<std::size_t>(e.span().column) <= end - start + 1);
            }
        }
    }
}

TEST_SUITE("spec print")
{
    TEST_CASE("one empty process prints on one line")
    {
        SpecDocument d;
        ProcessDef p;
        p.name = "EMPTY";
        d.processes.push_back(p);
        CHECK(print(d) == "process EMPTY = states 1 ; init 0\n");
        CHECK(parse(print(d)) == d);
    }

    TEST_CASE("bundled specs are fixed points after one print")
    {
        for (const auto& [name, doc] : builtin_specs()) {
            CAPTURE(name);
            std::string once = print(doc);
            CHECK(parse(once) == doc);
            CHECK(print(parse(once)) == once);
        }
    }

    TEST_CASE("random documents round-trip")
    {
        DocGenerator gen(1234);
        int ok = 0;
        for (int round = 0; round < 200; ++round) {
            std::string text = gen.text();
            CAPTURE(text);
            SpecDocument d = parse(text);
            std::string printed = print(d);
            CAPTURE(printed);
            REQUIRE(parse(printed) == d);
            REQUIRE(print(parse(printed)) == printed);
            ++ok;
        }
        CHECK(ok == 200);
    }
}

TEST_SUITE("builtin specs")
{
    TEST_CASE("fire patrol content")
    {
        auto d = builtin_spec("fire_patrol");
        auto phi1 = Formula::always(Formula::implication(
            F("y.next"), Formula::weak_until(Formula::negation(F("remove.next")), F("VisitCondition"))));
        bool found = false;
        for (const auto& g : d.goals)
            found = found || (g.kind == GoalKind::safety && g.formula == phi1);
        CHECK(found);
        CHECK(d.goals[0].formula == Formula::always_eventually(F("has.next?")));
        CHECK(d.fluents.size() == 6);
        CHECK(d.assumptions.empty());
        CHECK(d.plant.size() == 8);
        std::vector<std::string> shapes;
        for (const auto& p : d.plant)
            shapes.push_back(d.process(p)->template_name.value_or("explicit"));
        CHECK(shapes == std::vector<std::string>{"iterator", "binary_sensor", "binary_sensor", "next_query_window",
                                                 "current_query_window", "capability_pair", "go_guard", "explicit"});
        CHECK(d.process("FLIGHT")->alphabet == std::vector<std::string>{"go.next", "has.next?", "land", "takeoff"});
        auto fl = effective_fluents(d);
        std::vector<std::string> names;
        for (const auto& f : fl)
            names.push_back(f.name);
        CHECK(std::find(names.begin(), names.end(), "y.next") != names.end());
        CHECK(std::find(names.begin(), names.end(), "remove.next") != names.end());
    }

    TEST_CASE("ordered patrol arity")
    {
        auto d = builtin_spec("ordered_patrol", 3);
        int sensors = 0;
        for (const auto& p : d.processes)
            sensors += p.template_name == "binary_sensor";
        CHECK(sensors == 3);
        CHECK(d.controllability("is.next.loc3?") == Controllability::controlled);
        CHECK(d.controllability("yes.next.loc2") == Controllability::uncontrolled);
        CHECK_THROWS_AS(builtin_spec("ordered_patrol", 6), ValidationError);
        CHECK_NOTHROW(builtin_spec("ordered_patrol", 6, 6));
        CHECK_NOTHROW(builtin_spec("ordered_patrol", 1));
        CHECK_THROWS_AS(builtin_spec("nope"), ValidationError);
    }

    TEST_CASE("every bundled task composes")
    {
        for (const auto& [name, doc] : builtin_specs()) {
            CAPTURE(name);
            Lts plant = plant_lts(doc);
            CHECK(plant.num_states() > 1);
            CHECK(plant.has_label("takeoff"));
            CHECK(plant.has_label("land"));
        }
    }
}
