#pragma once

#include "iterplan/fluent.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace iterplan {

/// Immutable FLTL syntax tree. Atoms name fluents (including action-label fluents).
class Formula {
public:
    enum class Op : std::uint8_t {
        top,
        bottom,
        atom,
        negation,
        conjunction,
        disjunction,
        implication,
        equivalence,
        always,
        eventually,
        weak_until,
        always_eventually,
    };

    Formula() : Formula(Op::top) {}

    static Formula top() { return Formula(Op::top); }
    static Formula bottom() { return Formula(Op::bottom); }
    static Formula atom(std::string name);
    static Formula negation(Formula a);
    static Formula conjunction(Formula a, Formula b);
    static Formula disjunction(Formula a, Formula b);
    static Formula implication(Formula a, Formula b);
    static Formula equivalence(Formula a, Formula b);
    static Formula always(Formula a);
    static Formula eventually(Formula a);
    static Formula weak_until(Formula a, Formula b);
    static Formula always_eventually(Formula a);

    [[nodiscard]] Op op() const noexcept { return op_; }
    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] std::size_t arity() const noexcept { return args_.size(); }
    [[nodiscard]] const Formula& arg(std::size_t i) const { return *args_.at(i); }

    /// No temporal operator anywhere in the tree.
    [[nodiscard]] bool is_boolean() const;

    friend bool operator==(const Formula& a, const Formula& b);

private:
    explicit Formula(Op op) : op_(op) {}
    Formula(Op op, std::vector<std::shared_ptr<const Formula>> args);

    Op op_;
    std::string name_;
    std::vector<std::shared_ptr<const Formula>> args_;
};

/// Concrete spec-language syntax with minimal parentheses.
[[nodiscard]] std::string to_string(const Formula& f);

/// Distinct atom names in first-occurrence order.
[[nodiscard]] std::vector<std::string> atoms(const Formula& f);

/// Replaces atoms found in `definitions` (recursively, definitions may refer to earlier ones).
[[nodiscard]] Formula substitute(const Formula& f, const std::map<std::string, Formula, std::less<>>& definitions);

/// Evaluates a boolean formula; throws ValidationError on temporal operators.
[[nodiscard]] bool evaluate(const Formula& f, const std::function<bool(std::string_view)>& atom_value);

/// Boolean formula compiled against a fluent ordering, evaluated without allocation.
class BoolProgram {
public:
    BoolProgram() = default;
    /// Throws ValidationError on temporal operators or atoms missing from `fluent_names`.
    BoolProgram(const Formula& f, std::span<const std::string> fluent_names);

    [[nodiscard]] bool operator()(const Valuation& v) const;

private:
    enum class Code : std::uint8_t { push_true, push_false, load, op_not, op_and, op_or, op_implies, op_iff };
    struct Instr {
        Code code;
        std::uint32_t index;
    };
    void emit(const Formula& f, std::span<const std::string> names);
    std::vector<Instr> code_{{Code::push_true, 0}};
};

/// Truth of `f` at position 0 of the word prefix·loop^ω. `fluents` orders the valuation entries.
/// Throws ValidationError if the loop is empty or an atom is not a declared fluent.
[[nodiscard]] bool holds_lasso(const Formula& f, std::span<const std::string> fluents, std::span<const Valuation> prefix,
                               std::span<const Valuation> loop);

/// □(trigger ⇒ response) when `release` is absent; otherwise □(trigger ⇒ ¬response W release).
struct SafetyPattern {
    Formula trigger;
    Formula response;
    std::optional<Formula> release;

    [[nodiscard]] Formula formula() const;
    friend bool operator==(const SafetyPattern&, const SafetyPattern&) = default;
};

[[nodiscard]] std::optional<SafetyPattern> match_safety(const Formula& f);

/// Body of □◇φ (also accepts □(◇φ)) when φ is boolean.
[[nodiscard]] std::optional<Formula> match_liveness(const Formula& f);

} // namespace iterplan
