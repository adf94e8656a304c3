#include "iterplan/fltl.hpp"

#include "iterplan/error.hpp"

#include <algorithm>

namespace iterplan {

using Op = Formula::Op;

Formula::Formula(Op op, std::vector<std::shared_ptr<const Formula>> args) : op_(op), args_(std::move(args)) {}

Formula Formula::atom(std::string name)
{
    if (name.empty())
        throw ValidationError("empty atom name");
    Formula f(Op::atom);
    f.name_ = std::move(name);
    return f;
}

namespace {

std::shared_ptr<const Formula> share(Formula f) { return std::make_shared<const Formula>(std::move(f)); }

int precedence(Op op)
{
    switch (op) {
    case Op::equivalence: return 1;
    case Op::implication: return 2;
    case Op::weak_until: return 3;
    case Op::disjunction: return 4;
    case Op::conjunction: return 5;
    case Op::negation:
    case Op::always:
    case Op::eventually:
    case Op::always_eventually: return 6;
    default: return 7;
    }
}

void print(const Formula& f, std::string& out);

void print_operand(const Formula& f, int min_prec, std::string& out)
{
    if (precedence(f.op()) < min_prec) {
        out += '(';
        print(f, out);
        out += ')';
    }
    else {
        print(f, out);
    }
}

void print(const Formula& f, std::string& out)
{
    switch (f.op()) {
    case Op::top: out += "true"; return;
    case Op::bottom: out += "false"; return;
    case Op::atom: out += f.name(); return;
    case Op::negation:
    case Op::always:
    case Op::eventually:
    case Op::always_eventually: {
        static constexpr const char* prefix[] = {"not ", "always ", "eventually ", "[]<> "};
        int k = f.op() == Op::negation ? 0 : f.op() == Op::always ? 1 : f.op() == Op::eventually ? 2 : 3;
        out += prefix[k];
        print_operand(f.arg(0), 6, out);
        return;
    }
    default: break;
    }
    // Binary. and/or/iff associate left, => and wuntil are non-associative.
    const int p = precedence(f.op());
    const bool left_assoc = f.op() == Op::conjunction || f.op() == Op::disjunction || f.op() == Op::equivalence;
    const char* sym = f.op() == Op::conjunction   ? " and "
                      : f.op() == Op::disjunction ? " or "
                      : f.op() == Op::implication ? " => "
                      : f.op() == Op::equivalence ? " iff "
                                                  : " wuntil ";
    print_operand(f.arg(0), left_assoc ? p : p + 1, out);
    out += sym;
    print_operand(f.arg(1), p + 1, out);
}

bool temporal(Op op)
{
    return op == Op::always || op == Op::eventually || op == Op::weak_until || op == Op::always_eventually;
}

} // namespace

Formula Formula::negation(Formula a) { return Formula(Op::negation, {share(std::move(a))}); }
Formula Formula::conjunction(Formula a, Formula b)
{
    return Formula(Op::conjunction, {share(std::move(a)), share(std::move(b))});
}
Formula Formula::disjunction(Formula a, Formula b)
{
    return Formula(Op::disjunction, {share(std::move(a)), share(std::move(b))});
}
Formula Formula::implication(Formula a, Formula b)
{
    return Formula(Op::implication, {share(std::move(a)), share(std::move(b))});
}
Formula Formula::equivalence(Formula a, Formula b)
{
    return Formula(Op::equivalence, {share(std::move(a)), share(std::move(b))});
}
Formula Formula::always(Formula a) { return Formula(Op::always, {share(std::move(a))}); }
Formula Formula::eventually(Formula a) { return Formula(Op::eventually, {share(std::move(a))}); }
Formula Formula::weak_until(Formula a, Formula b)
{
    return Formula(Op::weak_until, {share(std::move(a)), share(std::move(b))});
}
Formula Formula::always_eventually(Formula a) { return Formula(Op::always_eventually, {share(std::move(a))}); }

bool Formula::is_boolean() const
{
    if (temporal(op_))
        return false;
    return std::all_of(args_.begin(), args_.end(), [](const auto& a) { return a->is_boolean(); });
}

bool operator==(const Formula& a, const Formula& b)
{
    if (a.op_ != b.op_ || a.name_ != b.name_ || a.args_.size() != b.args_.size())
        return false;
    for (std::size_t i = 0; i < a.args_.size(); ++i) {
        if (a.args_[i] != b.args_[i] && !(*a.args_[i] == *b.args_[i]))
            return false;
    }
    return true;
}

std::string to_string(const Formula& f)
{
    std::string out;
    print(f, out);
    return out;
}

std::vector<std::string> atoms(const Formula& f)
{
    std::vector<std::string> out;
    std::function<void(const Formula&)> walk = [&](const Formula& g) {
        if (g.op() == Op::atom) {
            if (std::find(out.begin(), out.end(), g.name()) == out.end())
                out.push_back(g.name());
            return;
        }
        for (std::size_t i = 0; i < g.arity(); ++i)
            walk(g.arg(i));
    };
    walk(f);
    return out;
}

namespace {

Formula substitute_depth(const Formula& f, const std::map<std::string, Formula, std::less<>>& defs, int depth)
{
    if (depth > 64)
        throw ValidationError("definition nesting too deep (cyclic define?)");
    switch (f.op()) {
    case Op::top:
    case Op::bottom: return f;
    case Op::atom: {
        auto it = defs.find(f.name());
        return it == defs.end() ? f : substitute_depth(it->second, defs, depth + 1);
    }
    case Op::negation: return Formula::negation(substitute_depth(f.arg(0), defs, depth));
    case Op::always: return Formula::always(substitute_depth(f.arg(0), defs, depth));
    case Op::eventually: return Formula::eventually(substitute_depth(f.arg(0), defs, depth));
    case Op::always_eventually: return Formula::always_eventually(substitute_depth(f.arg(0), defs, depth));
    case Op::conjunction:
        return Formula::conjunction(substitute_depth(f.arg(0), defs, depth), substitute_depth(f.arg(1), defs, depth));
    case Op::disjunction:
        return Formula::disjunction(substitute_depth(f.arg(0), defs, depth), substitute_depth(f.arg(1), defs, depth));
    case Op::implication:
        return Formula::implication(substitute_depth(f.arg(0), defs, depth), substitute_depth(f.arg(1), defs, depth));
    case Op::equivalence:
        return Formula::equivalence(substitute_depth(f.arg(0), defs, depth), substitute_depth(f.arg(1), defs, depth));
    case Op::weak_until:
        return Formula::weak_until(substitute_depth(f.arg(0), defs, depth), substitute_depth(f.arg(1), defs, depth));
    }
    return f;
}

} // namespace

Formula substitute(const Formula& f, const std::map<std::string, Formula, std::less<>>& definitions)
{
    return substitute_depth(f, definitions, 0);
}

bool evaluate(const Formula& f, const std::function<bool(std::string_view)>& atom_value)
{
    switch (f.op()) {
    case Op::top: return true;
    case Op::bottom: return false;
    case Op::atom: return atom_value(f.name());
    case Op::negation: return !evaluate(f.arg(0), atom_value);
    case Op::conjunction: return evaluate(f.arg(0), atom_value) && evaluate(f.arg(1), atom_value);
    case Op::disjunction: return evaluate(f.arg(0), atom_value) || evaluate(f.arg(1), atom_value);
    case Op::implication: return !evaluate(f.arg(0), atom_value) || evaluate(f.arg(1), atom_value);
    case Op::equivalence: return evaluate(f.arg(0), atom_value) == evaluate(f.arg(1), atom_value);
    default: throw ValidationError("temporal operator in boolean context: " + to_string(f));
    }
}

BoolProgram::BoolProgram(const Formula& f, std::span<const std::string> fluent_names)
{
    code_.clear();
    emit(f, fluent_names);
}

void BoolProgram::emit(const Formula& f, std::span<const std::string> names)
{
    switch (f.op()) {
    case Op::top: code_.push_back({Code::push_true, 0}); return;
    case Op::bottom: code_.push_back({Code::push_false, 0}); return;
    case Op::atom: {
        auto it = std::find(names.begin(), names.end(), f.name());
        if (it == names.end())
            throw ValidationError("unknown fluent '" + f.name() + "'");
        code_.push_back({Code::load, static_cast<std::uint32_t>(it - names.begin())});
        return;
    }
    case Op::negation:
        emit(f.arg(0), names);
        code_.push_back({Code::op_not, 0});
        return;
    case Op::conjunction:
    case Op::disjunction:
    case Op::implication:
    case Op::equivalence: {
        emit(f.arg(0), names);
        emit(f.arg(1), names);
        Code c = f.op() == Op::conjunction   ? Code::op_and
                 : f.op() == Op::disjunction ? Code::op_or
                 : f.op() == Op::implication ? Code::op_implies
                                             : Code::op_iff;
        code_.push_back({c, 0});
        return;
    }
    default: throw ValidationError("temporal operator in boolean context: " + to_string(f));
    }
}

bool BoolProgram::operator()(const Valuation& v) const
{
    // Formulas here are small; a fixed stack avoids allocation in the hot loop.
    bool stack[64];
    int top = 0;
    for (const auto& in : code_) {
        switch (in.code) {
        case Code::push_true: stack[top++] = true; break;
        case Code::push_false: stack[top++] = false; break;
        case Code::load: stack[top++] = v[in.index]; break;
        case Code::op_not: stack[top - 1] = !stack[top - 1]; break;
        case Code::op_and: --top; stack[top - 1] = stack[top - 1] && stack[top]; break;
        case Code::op_or: --top; stack[top - 1] = stack[top - 1] || stack[top]; break;
        case Code::op_implies: --top; stack[top - 1] = !stack[top - 1] || stack[top]; break;
        case Code::op_iff: --top; stack[top - 1] = stack[top - 1] == stack[top]; break;
        }
        if (top >= 64)
            throw ValidationError("boolean formula too deep");
    }
    return stack[0];
}

namespace {

struct LassoEval {
    std::span<const std::string> names;
    std::vector<const Valuation*> word;
    std::size_t loop_start;

    [[nodiscard]] std::size_t next(std::size_t i) const { return i + 1 < word.size() ? i + 1 : loop_start; }

    // Least (or greatest) solution of x[i] = now[i] || (keep[i] && x[next(i)]).
    [[nodiscard]] std::vector<bool> fixpoint(const std::vector<bool>& now, const std::vector<bool>& keep,
                                             bool greatest) const
    {
        const std::size_t n = word.size();
        std::vector<bool> x(n, greatest);
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t k = n; k-- > 0;) {
                bool v = now[k] || (keep[k] && x[next(k)]);
                if (v != x[k]) {
                    x[k] = v;
                    changed = true;
                }
            }
        }
        return x;
    }

    [[nodiscard]] std::vector<bool> eval(const Formula& f) const
    {
        const std::size_t n = word.size();
        std::vector<bool> r(n);
        switch (f.op()) {
        case Op::top: r.assign(n, true); return r;
        case Op::bottom: return r;
        case Op::atom: {
            auto it = std::find(names.begin(), names.end(), f.name());
            if (it == names.end())
                throw ValidationError("unknown fluent '" + f.name() + "'");
            auto idx = static_cast<std::size_t>(it - names.begin());
            for (std::size_t k = 0; k < n; ++k)
                r[k] = (*word[k])[idx];
            return r;
        }
        case Op::negation: {
            r = eval(f.arg(0));
            r.flip();
            return r;
        }
        case Op::conjunction:
        case Op::disjunction:
        case Op::implication:
        case Op::equivalence: {
            auto a = eval(f.arg(0));
            auto b = eval(f.arg(1));
            for (std::size_t k = 0; k < n; ++k) {
                r[k] = f.op() == Op::conjunction   ? (a[k] && b[k])
                       : f.op() == Op::disjunction ? (a[k] || b[k])
                       : f.op() == Op::implication ? (!a[k] || b[k])
                                                   : (a[k] == b[k]);
            }
            return r;
        }
        case Op::eventually: return fixpoint(eval(f.arg(0)), std::vector<bool>(n, true), false);
        case Op::always: return fixpoint(std::vector<bool>(n, false), eval(f.arg(0)), true);
        case Op::weak_until: return fixpoint(eval(f.arg(1)), eval(f.arg(0)), true);
        case Op::always_eventually: {
            auto ev = fixpoint(eval(f.arg(0)), std::vector<bool>(n, true), false);
            return fixpoint(std::vector<bool>(n, false), ev, true);
        }
        }
        throw ValidationError("unsupported formula node");
    }
};

} // namespace

bool holds_lasso(const Formula& f, std::span<const std::string> fluents, std::span<const Valuation> prefix,
                 std::span<const Valuation> loop)
{
    if (loop.empty())
        throw ValidationError("holds_lasso: empty loop");
    LassoEval ev{fluents, {}, prefix.size()};
    for (const auto& v : prefix)
        ev.word.push_back(&v);
    for (const auto& v : loop)
        ev.word.push_back(&v);
    return ev.eval(f)[0];
}

Formula SafetyPattern::formula() const
{
    if (!release)
        return Formula::always(Formula::implication(trigger, response));
    return Formula::always(Formula::implication(trigger, Formula::weak_until(Formula::negation(response), *release)));
}

std::optional<SafetyPattern> match_safety(const Formula& f)
{
    if (f.op() != Op::always)
        return std::nullopt;
    const Formula& body = f.arg(0);
    if (body.op() != Op::implication) {
        if (body.is_boolean())
            return SafetyPattern{Formula::top(), body, std::nullopt};
        return std::nullopt;
    }
    const Formula& alpha = body.arg(0);
    const Formula& rhs = body.arg(1);
    if (!alpha.is_boolean())
        return std::nullopt;
    if (rhs.is_boolean())
        return SafetyPattern{alpha, rhs, std::nullopt};
    if (rhs.op() == Op::weak_until && rhs.arg(0).op() == Op::negation && rhs.arg(0).arg(0).is_boolean() &&
        rhs.arg(1).is_boolean())
        return SafetyPattern{alpha, rhs.arg(0).arg(0), rhs.arg(1)};
    return std::nullopt;
}

std::optional<Formula> match_liveness(const Formula& f)
{
    if (f.op() == Op::always_eventually && f.arg(0).is_boolean())
        return f.arg(0);
    if (f.op() == Op::always && f.arg(0).op() == Op::eventually && f.arg(0).arg(0).is_boolean())
        return f.arg(0).arg(0);
    return std::nullopt;
}

} // namespace iterplan
