#include "iterplan/hybrid.hpp"

namespace iterplan {

Interpreter::Interpreter(const Lts& controller, LocationIterator& iterator, std::vector<SensorBinding> sensors)
    : controller_(&controller), iterator_(&iterator), sensors_(std::move(sensors)), state_(controller.initial())
{
    const std::size_t n = controller.alphabet().size();
    role_.assign(n, Role::none);
    sensor_of_.assign(n, 0);
    yes_.assign(sensors_.size(), 0);
    no_.assign(sensors_.size(), 0);

    for (LabelId l = 0; l < n; ++l) {
        const ActionLabel& a = controller.label(l);
        if (!a.controlled()) {
            if (a.name == "arrived")
                role_[l] = Role::arrived;
            continue;
        }
        if (a.name == "has.next?")
            role_[l] = Role::has_next;
        else if (a.name == "remove.next")
            role_[l] = Role::remove_next;
        else if (a.name == "reset")
            role_[l] = Role::reset;
        else if (a.name == "go.next")
            role_[l] = Role::go_next;
        else
            role_[l] = Role::actuator;
    }
    for (std::size_t k = 0; k < sensors_.size(); ++k) {
        const LabelId q = id(sensors_[k].query);
        if (!controller.label(q).controlled())
            throw ValidationError("sensor query '" + sensors_[k].query + "' must be controllable");
        role_[q] = Role::sensor;
        sensor_of_[q] = k;
        yes_[k] = id(sensors_[k].yes);
        no_[k] = id(sensors_[k].no);
    }
    if (auto y = controller.label_id("y.next"))
        y_next_ = *y;
    if (auto nn = controller.label_id("n.next"))
        n_next_ = *nn;
}

LabelId Interpreter::id(std::string_view label) const
{
    auto l = controller_->label_id(label);
    if (!l)
        throw ValidationError("label '" + std::string(label) + "' is not in the controller alphabet");
    return *l;
}

void Interpreter::inject(std::string_view label) { pending_.push_back(id(label)); }

std::optional<LabelId> Interpreter::step(HybridHost& host)
{
    if (!pending_.empty()) {
        const LabelId l = pending_.front();
        pending_.pop_front();
        auto succ = controller_->successor(state_, l);
        if (!succ)
            throw InterpreterAbort("event '" + name(l) + "' is not enabled in controller state " +
                                   std::to_string(state_));
        state_ = *succ;
        if (role_[l] == Role::arrived)
            current_ = target_;
        return l;
    }

    for (const Transition& t : controller_->out(state_)) {
        if (!controller_->label(t.label).controlled())
            continue;
        state_ = t.target;
        switch (role_[t.label]) {
        case Role::has_next:
            pending_.push_back(iterator_->has_next() ? y_next_ : n_next_);
            break;
        case Role::remove_next:
            iterator_->remove_next(host.reference_pose());
            break;
        case Role::reset:
            iterator_->reset(host.reference_pose());
            break;
        case Role::go_next:
            if (!iterator_->has_next())
                throw InterpreterAbort("go.next with an exhausted iterator");
            target_ = iterator_->next();
            host.start_motion(*target_);
            break;
        case Role::sensor: {
            const std::size_t k = sensor_of_[t.label];
            const SensorBinding& s = sensors_[k];
            const std::optional<CellId> cell =
                s.scope == SensorScope::next_location ? iterator_->next() : current_;
            if (!cell)
                throw InterpreterAbort("sensor '" + s.query + "' has no location to query");
            const LabelId answer = s.predicate(*cell, host.now()) ? yes_[k] : no_[k];
            pending_.push_back(answer);
            host.sensor_answer(name(answer), *cell);
            break;
        }
        case Role::actuator:
            host.actuate(name(t.label), current_);
            break;
        case Role::none:
        case Role::arrived:
            break;
        }
        return t.label;
    }
    return std::nullopt;
}

} // namespace iterplan
