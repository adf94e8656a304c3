#include "iterplan/spec.hpp"
#include "iterplan/templates.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>

namespace iterplan::spec {

namespace {

using Kind = SpecError::Kind;

enum class Tok : std::uint8_t {
    word,
    arrow, // -label->, text holds the label
    equals,
    implies,
    lt,
    gt,
    lbrace,
    rbrace,
    comma,
    lparen,
    rparen,
    semicolon,
    box_diamond,
    box,
    diamond,
    end,
};

struct Token {
    Tok kind = Tok::end;
    std::string text;
    SourceSpan span;
};

const std::set<std::string, std::less<>>& reserved()
{
    static const std::set<std::string, std::less<>> r{"not", "and", "or", "iff", "wuntil", "always",
                                                       "eventually", "true", "false"};
    return r;
}

bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '?'; }

bool is_upper_name(std::string_view s)
{
    if (s.empty() || !std::isupper(static_cast<unsigned char>(s[0])))
        return false;
    return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

bool is_number(std::string_view s)
{
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

/// Splits the text into statements; a line whose last token is `;` continues on the next line.
std::vector<std::vector<Token>> lex(std::string_view text)
{
    std::vector<std::vector<Token>> statements;
    std::vector<Token> current;
    int line = 1;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos)
            eol = text.size();
        std::string_view l = text.substr(pos, eol - pos);
        if (!l.empty() && l.back() == '\r')
            l.remove_suffix(1);

        std::size_t i = 0;
        auto span = [&](std::size_t start, std::size_t len) {
            return SourceSpan{line, static_cast<int>(start) + 1, static_cast<int>(len)};
        };
        while (i < l.size()) {
            char c = l[i];
            if (c == '#')
                break;
            if (c == ' ' || c == '\t') {
                ++i;
                continue;
            }
            auto push = [&](Tok k, std::size_t len, std::string t = {}) {
                current.push_back({k, std::move(t), span(i, len)});
                i += len;
            };
            if (l.compare(i, 4, "[]<>") == 0)
                push(Tok::box_diamond, 4);
            else if (l.compare(i, 2, "[]") == 0)
                push(Tok::box, 2);
            else if (l.compare(i, 2, "<>") == 0)
                push(Tok::diamond, 2);
            else if (l.compare(i, 2, "=>") == 0)
                push(Tok::implies, 2);
            else if (c == '=')
                push(Tok::equals, 1);
            else if (c == '<')
                push(Tok::lt, 1);
            else if (c == '>')
                push(Tok::gt, 1);
            else if (c == '{')
                push(Tok::lbrace, 1);
            else if (c == '}')
                push(Tok::rbrace, 1);
            else if (c == ',')
                push(Tok::comma, 1);
            else if (c == '(')
                push(Tok::lparen, 1);
            else if (c == ')')
                push(Tok::rparen, 1);
            else if (c == ';')
                push(Tok::semicolon, 1);
            else if (c == '-') {
                std::size_t j = i + 1;
                while (j < l.size() && word_char(l[j]))
                    ++j;
                if (j == i + 1 || l.compare(j, 2, "->") != 0)
                    throw SpecError(Kind::lexical, span(i, j - i), "malformed transition arrow, expected -label->");
                current.push_back({Tok::arrow, std::string(l.substr(i + 1, j - i - 1)), span(i, j + 2 - i)});
                i = j + 2;
            }
            else if (word_char(c)) {
                std::size_t j = i;
                while (j < l.size() && word_char(l[j]))
                    ++j;
                push(Tok::word, j - i, std::string(l.substr(i, j - i)));
            }
            else {
                throw SpecError(Kind::lexical, span(i, 1), std::string("unexpected character '") + c + "'");
            }
        }
        if (!current.empty() && current.back().kind != Tok::semicolon) {
            statements.push_back(std::move(current));
            current.clear();
        }
        ++line;
        pos = eol + 1;
    }
    if (!current.empty())
        statements.push_back(std::move(current));
    return statements;
}

class Cursor {
public:
    explicit Cursor(const std::vector<Token>& toks) : toks_(toks)
    {
        end_.kind = Tok::end;
        const auto& last = toks.back().span;
        end_.span = {last.line, last.column + last.length, 0};
    }

    [[nodiscard]] const Token& peek(std::size_t ahead = 0) const
    {
        return pos_ + ahead < toks_.size() ? toks_[pos_ + ahead] : end_;
    }
    const Token& next()
    {
        const Token& t = peek();
        if (pos_ < toks_.size())
            ++pos_;
        return t;
    }
    [[nodiscard]] bool at(Tok k) const { return peek().kind == k; }
    [[nodiscard]] bool at_word(std::string_view w) const { return at(Tok::word) && peek().text == w; }
    bool accept(Tok k)
    {
        if (!at(k))
            return false;
        next();
        return true;
    }
    bool accept_word(std::string_view w)
    {
        if (!at_word(w))
            return false;
        next();
        return true;
    }
    const Token& expect(Tok k, const char* what)
    {
        if (!at(k))
            fail(std::string("expected ") + what);
        return next();
    }
    void expect_word(std::string_view w)
    {
        if (!accept_word(w))
            fail("expected '" + std::string(w) + "'");
    }
    [[noreturn]] void fail(const std::string& msg) const
    {
        const Token& t = peek();
        throw SpecError(Kind::syntax, t.span, msg + (t.kind == Tok::end ? " at end of statement" : ", found '" +
                                                                                                     describe(t) + "'"));
    }
    void expect_end() const
    {
        if (!at(Tok::end))
            fail("unexpected trailing input");
    }

    static std::string describe(const Token& t)
    {
        switch (t.kind) {
        case Tok::word: return t.text;
        case Tok::arrow: return "-" + t.text + "->";
        case Tok::equals: return "=";
        case Tok::implies: return "=>";
        case Tok::lt: return "<";
        case Tok::gt: return ">";
        case Tok::lbrace: return "{";
        case Tok::rbrace: return "}";
        case Tok::comma: return ",";
        case Tok::lparen: return "(";
        case Tok::rparen: return ")";
        case Tok::semicolon: return ";";
        case Tok::box_diamond: return "[]<>";
        case Tok::box: return "[]";
        case Tok::diamond: return "<>";
        case Tok::end: return "end";
        }
        return "?";
    }

private:
    const std::vector<Token>& toks_;
    Token end_;
    std::size_t pos_ = 0;
};

struct Located {
    std::string name;
    SourceSpan span;
};

struct FormulaSite {
    Formula formula;
    std::vector<Located> atoms;
    SourceSpan span;
};

class Parser {
public:
    SpecDocument run(std::string_view text)
    {
        for (const auto& stmt : lex(text))
            statement(stmt);
        validate();
        return std::move(doc_);
    }

private:
    SpecDocument doc_;
    std::vector<Located> controlled_, uncontrolled_;
    std::vector<std::pair<Located, std::vector<Located>>> process_sites_; // name, used labels
    std::vector<SourceSpan> process_spans_;
    std::vector<std::pair<Located, std::vector<Located>>> fluent_sites_;
    std::vector<std::pair<Located, FormulaSite>> define_sites_;
    std::vector<FormulaSite> assumption_sites_, goal_sites_;
    std::vector<Located> plant_sites_;
    std::optional<SourceSpan> plant_span_;

    static Located label_token(Cursor& c)
    {
        const Token& t = c.peek();
        if (t.kind != Tok::word)
            c.fail("expected an action label");
        if (!is_valid_label_name(t.text) || reserved().count(t.text))
            throw SpecError(Kind::lexical, t.span, "invalid action label '" + t.text + "'");
        c.next();
        return {t.text, t.span};
    }

    static Located upper_name(Cursor& c, const char* what)
    {
        const Token& t = c.peek();
        if (t.kind != Tok::word || !is_upper_name(t.text))
            c.fail(std::string("expected ") + what + " (an upper-case identifier)");
        c.next();
        return {t.text, t.span};
    }

    static std::size_t number(Cursor& c, const char* what)
    {
        const Token& t = c.peek();
        if (t.kind != Tok::word || !is_number(t.text) || t.text.size() > 9)
            c.fail(std::string("expected ") + what);
        c.next();
        return std::stoul(t.text);
    }

    void statement(const std::vector<Token>& toks)
    {
        Cursor c(toks);
        const Token& head = c.peek();
        if (head.kind != Tok::word)
            c.fail("expected a statement keyword");
        c.next();
        if (head.text == "controlled" || head.text == "uncontrolled") {
            auto& dst = head.text == "controlled" ? controlled_ : uncontrolled_;
            while (!c.at(Tok::end))
                dst.push_back(label_token(c));
        }
        else if (head.text == "process")
            process(c);
        else if (head.text == "fluent")
            fluent(c);
        else if (head.text == "define") {
            Located name = upper_name(c, "define name");
            c.expect(Tok::equals, "'='");
            define_sites_.push_back({name, formula(c)});
        }
        else if (head.text == "assume") {
            c.expect_word("liveness");
            assumption_sites_.push_back(formula(c));
        }
        else if (head.text == "goal") {
            GoalKind kind;
            if (c.accept_word("liveness"))
                kind = GoalKind::liveness;
            else if (c.accept_word("safety"))
                kind = GoalKind::safety;
            else
                c.fail("expected 'liveness' or 'safety'");
            goal_sites_.push_back(formula(c));
            doc_.goals.push_back({kind, goal_sites_.back().formula});
        }
        else if (head.text == "plant") {
            if (plant_span_)
                throw SpecError(Kind::duplicate, head.span, "duplicate plant statement");
            plant_span_ = head.span;
            while (!c.at(Tok::end))
                plant_sites_.push_back(upper_name(c, "process name"));
        }
        else {
            throw SpecError(Kind::syntax, head.span, "unknown statement '" + head.text + "'");
        }
        c.expect_end();
    }

    void process(Cursor& c)
    {
        Located name = upper_name(c, "process name");
        c.expect(Tok::equals, "'='");
        ProcessDef def;
        def.name = name.name;
        std::vector<Located> used;
        if (c.accept_word("template")) {
            const Token& t = c.expect(Tok::word, "template name");
            def.template_name = t.text;
            if (c.accept(Tok::lparen)) {
                if (!c.at(Tok::rparen)) {
                    do {
                        used.push_back(label_token(c));
                        def.template_args.push_back(used.back().name);
                    } while (c.accept(Tok::comma));
                }
                c.expect(Tok::rparen, "')'");
            }
        }
        else {
            c.expect_word("states");
            def.num_states = number(c, "state count");
            c.expect(Tok::semicolon, "';'");
            c.expect_word("init");
            def.initial = static_cast<StateId>(number(c, "initial state"));
            std::set<std::string> alphabet;
            std::vector<SourceSpan> state_spans;
            while (c.accept(Tok::semicolon)) {
                if (c.at(Tok::end))
                    break;
                if (c.accept_word("alphabet")) {
                    c.expect(Tok::lbrace, "'{'");
                    if (!c.at(Tok::rbrace)) {
                        do {
                            used.push_back(label_token(c));
                            alphabet.insert(used.back().name);
                        } while (c.accept(Tok::comma));
                    }
                    c.expect(Tok::rbrace, "'}'");
                    continue;
                }
                SourceSpan src_span = c.peek().span;
                auto src = number(c, "transition source");
                const Token& arrow = c.expect(Tok::arrow, "transition arrow -label->");
                if (!is_valid_label_name(arrow.text) || reserved().count(arrow.text))
                    throw SpecError(Kind::lexical, arrow.span, "invalid action label '" + arrow.text + "'");
                used.push_back({arrow.text, arrow.span});
                SourceSpan dst_span = c.peek().span;
                auto dst = number(c, "transition target");
                for (auto [s, sp] : {std::pair{src, src_span}, std::pair{dst, dst_span}}) {
                    if (s >= def.num_states)
                        throw SpecError(Kind::semantic, sp, "state " + std::to_string(s) + " out of range");
                }
                alphabet.insert(arrow.text);
                def.transitions.push_back({static_cast<StateId>(src), arrow.text, static_cast<StateId>(dst)});
            }
            if (def.num_states == 0)
                throw SpecError(Kind::semantic, name.span, "process needs at least one state");
            if (def.initial >= def.num_states)
                throw SpecError(Kind::semantic, name.span, "initial state out of range");
            def.alphabet.assign(alphabet.begin(), alphabet.end());
            auto key = [](const NamedTransition& t) { return std::tie(t.source, t.label, t.target); };
            std::sort(def.transitions.begin(), def.transitions.end(),
                      [&](const auto& a, const auto& b) { return key(a) < key(b); });
            def.transitions.erase(std::unique(def.transitions.begin(), def.transitions.end(),
                                              [&](const auto& a, const auto& b) { return key(a) == key(b); }),
                                  def.transitions.end());
        }
        process_sites_.push_back({name, std::move(used)});
        doc_.processes.push_back(std::move(def));
    }

    static std::vector<Located> label_set(Cursor& c)
    {
        std::vector<Located> out;
        if (c.accept(Tok::lbrace)) {
            if (!c.at(Tok::rbrace)) {
                do {
                    out.push_back(label_token(c));
                } while (c.accept(Tok::comma));
            }
            c.expect(Tok::rbrace, "'}'");
        }
        else {
            out.push_back(label_token(c));
        }
        return out;
    }

    void fluent(Cursor& c)
    {
        Located name = upper_name(c, "fluent name");
        c.expect(Tok::equals, "'='");
        c.expect(Tok::lt, "'<'");
        auto ini = label_set(c);
        c.expect(Tok::comma, "','");
        auto term = label_set(c);
        c.expect(Tok::gt, "'>'");
        bool initial = false;
        if (c.accept_word("initially")) {
            if (c.accept_word("true"))
                initial = true;
            else if (!c.accept_word("false"))
                c.fail("expected 'true' or 'false'");
        }
        std::vector<std::string> in, te;
        for (const auto& l : ini)
            in.push_back(l.name);
        for (const auto& l : term)
            te.push_back(l.name);
        try {
            doc_.fluents.push_back(Fluent::make(name.name, in, te, initial));
        }
        catch (const ValidationError& e) {
            throw SpecError(Kind::semantic, name.span, e.what());
        }
        auto used = ini;
        used.insert(used.end(), term.begin(), term.end());
        fluent_sites_.push_back({name, std::move(used)});
    }

    // expr := imp ('iff' imp)* ; imp := wu ['=>' wu] ; wu := or ['wuntil' or]
    FormulaSite formula(Cursor& c)
    {
        FormulaSite site;
        site.span = c.peek().span;
        site.formula = iff_level(c, site);
        return site;
    }

    Formula iff_level(Cursor& c, FormulaSite& s)
    {
        Formula f = implies_level(c, s);
        while (c.accept_word("iff"))
            f = Formula::equivalence(std::move(f), implies_level(c, s));
        return f;
    }

    Formula implies_level(Cursor& c, FormulaSite& s)
    {
        Formula f = until_level(c, s);
        if (c.accept(Tok::implies)) {
            f = Formula::implication(std::move(f), until_level(c, s));
            if (c.at(Tok::implies))
                c.fail("'=>' is not associative, add parentheses");
        }
        return f;
    }

    Formula until_level(Cursor& c, FormulaSite& s)
    {
        Formula f = or_level(c, s);
        if (c.accept_word("wuntil")) {
            f = Formula::weak_until(std::move(f), or_level(c, s));
            if (c.at_word("wuntil"))
                c.fail("'wuntil' is not associative, add parentheses");
        }
        return f;
    }

    Formula or_level(Cursor& c, FormulaSite& s)
    {
        Formula f = and_level(c, s);
        while (c.accept_word("or"))
            f = Formula::disjunction(std::move(f), and_level(c, s));
        return f;
    }

    Formula and_level(Cursor& c, FormulaSite& s)
    {
        Formula f = unary(c, s);
        while (c.accept_word("and"))
            f = Formula::conjunction(std::move(f), unary(c, s));
        return f;
    }

    Formula unary(Cursor& c, FormulaSite& s)
    {
        if (c.accept_word("not"))
            return Formula::negation(unary(c, s));
        if (c.accept_word("always") || c.accept(Tok::box))
            return Formula::always(unary(c, s));
        if (c.accept_word("eventually") || c.accept(Tok::diamond))
            return Formula::eventually(unary(c, s));
        if (c.accept(Tok::box_diamond))
            return Formula::always_eventually(unary(c, s));
        if (c.accept(Tok::lparen)) {
            Formula f = iff_level(c, s);
            c.expect(Tok::rparen, "')'");
            return f;
        }
        if (c.accept_word("true"))
            return Formula::top();
        if (c.accept_word("false"))
            return Formula::bottom();
        const Token& t = c.peek();
        if (t.kind != Tok::word || reserved().count(t.text))
            c.fail("expected a formula");
        if (!is_upper_name(t.text) && !is_valid_label_name(t.text))
            throw SpecError(Kind::lexical, t.span, "'" + t.text + "' is neither a fluent name nor an action label");
        c.next();
        s.atoms.push_back({t.text, t.span});
        return Formula::atom(t.text);
    }

    void validate()
    {
        // Label declarations.
        std::map<std::string, Controllability, std::less<>> declared;
        for (auto [list, ctrl] : {std::pair{&controlled_, Controllability::controlled},
                                  std::pair{&uncontrolled_, Controllability::uncontrolled}}) {
            for (const auto& l : *list) {
                auto [it, inserted] = declared.emplace(l.name, ctrl);
                if (!inserted) {
                    if (it->second != ctrl)
                        throw SpecError(Kind::controllability, l.span,
                                        "label '" + l.name + "' declared both controlled and uncontrolled");
                    throw SpecError(Kind::duplicate, l.span, "label '" + l.name + "' declared twice");
                }
                (ctrl == Controllability::controlled ? doc_.controlled : doc_.uncontrolled).push_back(l.name);
            }
        }
        std::sort(doc_.controlled.begin(), doc_.controlled.end());
        std::sort(doc_.uncontrolled.begin(), doc_.uncontrolled.end());
        auto require_label = [&](const Located& l) {
            if (!declared.count(l.name))
                throw SpecError(Kind::undeclared, l.span, "undeclared action label '" + l.name + "'");
        };

        // Names.
        std::map<std::string, SourceSpan, std::less<>> names;
        auto claim = [&](const Located& n, const char* what) {
            if (!names.emplace(n.name, n.span).second)
                throw SpecError(Kind::duplicate, n.span, std::string("duplicate ") + what + " '" + n.name + "'");
        };
        for (std::size_t i = 0; i < process_sites_.size(); ++i) {
            const auto& [name, used] = process_sites_[i];
            claim(name, "process");
            for (const auto& l : used)
                require_label(l);
            try {
                Lts lts = process_lts(doc_, doc_.processes[i]);
                for (const auto& a : lts.alphabet()) {
                    if (!declared.count(a.name))
                        throw SpecError(Kind::undeclared, name.span,
                                        "template uses undeclared action label '" + a.name + "'");
                }
            }
            catch (const ValidationError& e) {
                throw SpecError(Kind::semantic, name.span, e.what());
            }
        }
        std::set<std::string, std::less<>> fluent_names, define_names;
        for (const auto& [name, used] : fluent_sites_) {
            claim(name, "fluent");
            fluent_names.insert(name.name);
            for (const auto& l : used)
                require_label(l);
        }
        for (const auto& [name, site] : define_sites_) {
            claim(name, "define");
            define_names.insert(name.name);
        }

        // Formula atoms.
        auto check_atoms = [&](const FormulaSite& site) {
            for (const auto& a : site.atoms) {
                if (is_upper_name(a.name)) {
                    if (!fluent_names.count(a.name) && !define_names.count(a.name))
                        throw SpecError(Kind::undeclared, a.span, "undeclared fluent '" + a.name + "'");
                }
                else {
                    require_label(a);
                }
            }
        };
        for (const auto& [name, site] : define_sites_) {
            check_atoms(site);
            if (!site.formula.is_boolean())
                throw SpecError(Kind::semantic, site.span, "define '" + name.name + "' must be a boolean formula");
            doc_.defines.push_back({name.name, site.formula});
        }
        // Cycles among defines.
        std::map<std::string, int, std::less<>> state; // 1 visiting, 2 done
        std::function<void(const std::string&, const SourceSpan&)> visit = [&](const std::string& n,
                                                                               const SourceSpan& span) {
            auto& st = state[n];
            if (st == 2)
                return;
            if (st == 1)
                throw SpecError(Kind::semantic, span, "cyclic define '" + n + "'");
            st = 1;
            for (const auto& [dname, site] : define_sites_) {
                if (dname.name != n)
                    continue;
                for (const auto& a : site.atoms) {
                    if (define_names.count(a.name))
                        visit(a.name, a.span);
                }
            }
            st = 2;
        };
        for (const auto& [name, site] : define_sites_)
            visit(name.name, name.span);

        for (const auto& site : assumption_sites_) {
            check_atoms(site);
            if (!match_liveness(site.formula))
                throw SpecError(Kind::semantic, site.span, "assumptions must have the form []<> <boolean formula>");
            doc_.assumptions.push_back(site.formula);
        }
        for (std::size_t i = 0; i < goal_sites_.size(); ++i) {
            const auto& site = goal_sites_[i];
            check_atoms(site);
            if (doc_.goals[i].kind == GoalKind::liveness && !match_liveness(site.formula))
                throw SpecError(Kind::semantic, site.span, "liveness goals must have the form []<> <boolean formula>");
            if (doc_.goals[i].kind == GoalKind::safety && !match_safety(site.formula))
                throw SpecError(Kind::semantic, site.span,
                                "safety goals must have the form always (A => B) or always (A => not B wuntil C)");
        }

        std::set<std::string, std::less<>> in_plant;
        for (const auto& p : plant_sites_) {
            if (!doc_.process(p.name))
                throw SpecError(Kind::undeclared, p.span, "undeclared process '" + p.name + "'");
            if (!in_plant.insert(p.name).second)
                throw SpecError(Kind::duplicate, p.span, "process '" + p.name + "' listed twice in plant");
            doc_.plant.push_back(p.name);
        }
        if (!doc_.plant.empty()) {
            try {
                (void)plant_lts(doc_);
            }
            catch (const ValidationError& e) {
                throw SpecError(Kind::semantic, *plant_span_, e.what());
            }
        }
    }
};

} // namespace

bool operator==(const ProcessDef& a, const ProcessDef& b)
{
    auto tr = [](const std::vector<NamedTransition>& v) {
        std::vector<std::tuple<StateId, std::string, StateId>> out;
        for (const auto& t : v)
            out.emplace_back(t.source, t.label, t.target);
        return out;
    };
    return a.name == b.name && a.template_name == b.template_name && a.template_args == b.template_args &&
           a.num_states == b.num_states && a.initial == b.initial && a.alphabet == b.alphabet &&
           tr(a.transitions) == tr(b.transitions);
}

std::optional<Controllability> SpecDocument::controllability(std::string_view label) const
{
    if (std::binary_search(controlled.begin(), controlled.end(), label, std::less<>{}))
        return Controllability::controlled;
    if (std::binary_search(uncontrolled.begin(), uncontrolled.end(), label, std::less<>{}))
        return Controllability::uncontrolled;
    return std::nullopt;
}

const ProcessDef* SpecDocument::process(std::string_view name) const
{
    for (const auto& p : processes) {
        if (p.name == name)
            return &p;
    }
    return nullptr;
}

SpecDocument parse(std::string_view text) { return Parser{}.run(text); }

Lts process_lts(const SpecDocument& doc, const ProcessDef& def)
{
    auto ctrl = [&](const std::string& l) { return doc.controllability(l).value_or(Controllability::controlled); };
    if (def.template_name) {
        Lts t = templates::instantiate(*def.template_name, def.template_args);
        std::vector<ActionLabel> alphabet;
        std::vector<NamedTransition> ts;
        for (const auto& a : t.alphabet())
            alphabet.push_back({a.name, doc.controllability(a.name).value_or(a.controllability)});
        for (const auto& tr : t.transitions())
            ts.push_back({tr.source, t.label(tr.label).name, tr.target});
        return Lts(def.name, t.num_states(), t.initial(), std::move(alphabet), ts);
    }
    std::vector<ActionLabel> alphabet;
    for (const auto& a : def.alphabet)
        alphabet.push_back({a, ctrl(a)});
    return Lts(def.name, def.num_states, def.initial, std::move(alphabet), def.transitions);
}

Lts plant_lts(const SpecDocument& doc)
{
    if (doc.plant.empty())
        throw ValidationError("specification has an empty plant");
    std::vector<Lts> parts;
    for (const auto& name : doc.plant) {
        const ProcessDef* def = doc.process(name);
        if (!def)
            throw ValidationError("plant refers to undeclared process '" + name + "'");
        parts.push_back(process_lts(doc, *def));
    }
    return compose(parts, "PLANT");
}

Formula expand(const SpecDocument& doc, const Formula& f)
{
    std::map<std::string, Formula, std::less<>> defs;
    for (const auto& d : doc.defines)
        defs.emplace(d.name, d.body);
    return substitute(f, defs);
}

std::vector<Fluent> effective_fluents(const SpecDocument& doc)
{
    std::vector<Fluent> out = doc.fluents;
    std::set<std::string> have;
    for (const auto& f : out)
        have.insert(f.name);
    auto add = [&](const Formula& f) {
        for (const auto& a : atoms(expand(doc, f))) {
            if (doc.controllability(a) && have.insert(a).second)
                out.push_back(Fluent::for_action(a));
        }
    };
    for (const auto& a : doc.assumptions)
        add(a);
    for (const auto& g : doc.goals)
        add(g.formula);
    for (const auto& d : doc.defines)
        add(d.body);
    return out;
}

} // namespace iterplan::spec
