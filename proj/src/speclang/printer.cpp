#include "iterplan/spec.hpp"

#include <set>

namespace iterplan::spec {

namespace {

std::string label_set(const std::vector<std::string>& labels)
{
    std::string out = "{";
    for (std::size_t i = 0; i < labels.size(); ++i)
        out += (i ? ", " : "") + labels[i];
    return out + "}";
}

} // namespace

std::string print(const SpecDocument& doc)
{
    std::string out;
    auto line = [&](const std::string& keyword, const std::vector<std::string>& items) {
        if (items.empty())
            return;
        out += keyword;
        for (const auto& i : items)
            out += " " + i;
        out += "\n";
    };
    line("controlled", doc.controlled);
    line("uncontrolled", doc.uncontrolled);

    for (const auto& p : doc.processes) {
        out += "process " + p.name + " = ";
        if (p.template_name) {
            out += "template " + *p.template_name;
            if (!p.template_args.empty()) {
                out += "(";
                for (std::size_t i = 0; i < p.template_args.size(); ++i)
                    out += (i ? ", " : "") + p.template_args[i];
                out += ")";
            }
        }
        else {
            out += "states " + std::to_string(p.num_states) + " ; init " + std::to_string(p.initial);
            std::set<std::string> used;
            for (const auto& t : p.transitions)
                used.insert(t.label);
            if (std::vector<std::string>(used.begin(), used.end()) != p.alphabet)
                out += " ; alphabet " + label_set(p.alphabet);
            for (const auto& t : p.transitions)
                out += " ; " + std::to_string(t.source) + " -" + t.label + "-> " + std::to_string(t.target);
        }
        out += "\n";
    }

    for (const auto& f : doc.fluents) {
        out += "fluent " + f.name + " = <" + label_set(f.initiating) + ", " + label_set(f.terminating) +
               "> initially " + (f.initial ? "true" : "false") + "\n";
    }
    for (const auto& d : doc.defines)
        out += "define " + d.name + " = " + to_string(d.body) + "\n";
    for (const auto& a : doc.assumptions)
        out += "assume liveness " + to_string(a) + "\n";
    for (const auto& g : doc.goals)
        out += std::string("goal ") + (g.kind == GoalKind::liveness ? "liveness " : "safety ") + to_string(g.formula) +
               "\n";
    line("plant", doc.plant);
    return out;
}

} // namespace iterplan::spec
