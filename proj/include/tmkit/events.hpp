#pragma once

#include <set>
#include <string>
#include <vector>

#include "tmkit/checker.hpp"
#include "tmkit/model.hpp"

namespace tmkit {

/// A named subdiagram of the static model bonded to an opaque time label.
struct Event {
    std::string id;
    std::string name;
    std::set<std::string> action_ids; // non-empty in a valid event
    std::string time_label;           // opaque, may be empty

    bool operator==(const Event&) const = default;
};

/// Derived structure: which events must precede which, read off the static
/// edges that leave one event's actions and land in another's.
struct DependencyGraph {
    std::vector<std::string> nodes; // event ids, input order
    std::vector<std::pair<std::string, std::string>> edges;
    bool cyclic = false;
};

/// UNKNOWN_ACTION per dangling reference, EMPTY_EVENT for an empty action
/// set, and a DISCONNECTED_EVENT warning when the event's induced subgraph
/// falls apart into several pieces (flows and triggers, undirected view).
std::vector<Diagnostic> validate_event(const StaticModel& model, const Event& e);

/// Edge (Ei, Ej), i != j, iff some flow or trigger (a, b) has a in Ei,
/// b in Ej and b not in Ei. Nodes are exactly the input event ids.
DependencyGraph derive_dependencies(const StaticModel& model, const std::vector<Event>& events);

} // namespace tmkit
