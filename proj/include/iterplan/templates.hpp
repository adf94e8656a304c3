#pragma once

#include "iterplan/lts.hpp"

#include <string>
#include <vector>

namespace iterplan::templates {

/// has.next? then y.next / n.next; y.next must be followed by remove.next, n.next by reset.
[[nodiscard]] Lts iterator_model();

/// A query answered by exactly one of two responses before it can be asked again.
[[nodiscard]] Lts binary_sensor(const std::string& query, const std::string& yes, const std::string& no);

/// Queries about the next location are only allowed between y.next and remove.next.
[[nodiscard]] Lts next_query_window(const std::vector<std::string>& queries);

/// Actions about the current location are only allowed between arrived and the next has.next?.
[[nodiscard]] Lts current_query_window(const std::vector<std::string>& actions);

/// Command/completion pair; `instantaneous` actions are allowed in both phases.
[[nodiscard]] Lts capability_pair(const std::string& command, const std::string& done,
                                  const std::vector<std::string>& instantaneous = {});

/// go.next only after y.next, and at most once before the location is removed.
[[nodiscard]] Lts go_guard();

/// Template lookup by spec-language name. Throws ValidationError on unknown
/// names, wrong argument counts and label collisions.
[[nodiscard]] Lts instantiate(const std::string& name, const std::vector<std::string>& args);

/// Names accepted by instantiate().
[[nodiscard]] const std::vector<std::string>& names();

} // namespace iterplan::templates
