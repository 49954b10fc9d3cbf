#include "tmkit/model.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace tmkit {

const char* to_string(ActionKind k) {
    switch (k) {
    case ActionKind::Create: return "create";
    case ActionKind::Process: return "process";
    case ActionKind::Release: return "release";
    case ActionKind::Transfer: return "transfer";
    case ActionKind::Receive: return "receive";
    }
    return "?";
}

const char* to_string(LinkKind k) {
    return k == LinkKind::Composite ? "composite" : "shared";
}

std::optional<ActionKind> action_kind_from_string(const std::string& s) {
    if (s == "create") return ActionKind::Create;
    if (s == "process") return ActionKind::Process;
    if (s == "release") return ActionKind::Release;
    if (s == "transfer") return ActionKind::Transfer;
    if (s == "receive") return ActionKind::Receive;
    return std::nullopt;
}

const char* to_string(ErrorCode c) {
    switch (c) {
    case ErrorCode::DuplicateId: return "DUPLICATE_ID";
    case ErrorCode::DanglingReference: return "DANGLING_REFERENCE";
    case ErrorCode::ContainmentCycle: return "CONTAINMENT_CYCLE";
    case ErrorCode::MultipleCompositeWholes: return "MULTIPLE_COMPOSITE_WHOLES";
    case ErrorCode::PartCycle: return "PART_CYCLE";
    case ErrorCode::SelfFlow: return "SELF_FLOW";
    case ErrorCode::DuplicateFlow: return "DUPLICATE_FLOW";
    case ErrorCode::LexError: return "LEX_ERROR";
    case ErrorCode::SyntaxError: return "SYNTAX_ERROR";
    case ErrorCode::AmbiguousReference: return "AMBIGUOUS_REFERENCE";
    }
    return "?";
}

const char* to_string(DiagCode c) {
    switch (c) {
    case DiagCode::IllegalIntraFlow: return "ILLEGAL_INTRA_FLOW";
    case DiagCode::IllegalInterFlow: return "ILLEGAL_INTER_FLOW";
    case DiagCode::IntraMachineTrigger: return "INTRA_MACHINE_TRIGGER";
    case DiagCode::BoundaryBypass: return "BOUNDARY_BYPASS";
    case DiagCode::UnknownThimac: return "UNKNOWN_THIMAC";
    case DiagCode::UnknownAction: return "UNKNOWN_ACTION";
    case DiagCode::UnknownEvent: return "UNKNOWN_EVENT";
    case DiagCode::EmptyKinds: return "EMPTY_KINDS";
    case DiagCode::EmptyEvent: return "EMPTY_EVENT";
    case DiagCode::DisconnectedEvent: return "DISCONNECTED_EVENT";
    case DiagCode::DepViolation: return "DEP_VIOLATION";
    case DiagCode::CyclicBehavior: return "CYCLIC_BEHAVIOR";
    case DiagCode::CyclicEvent: return "CYCLIC_EVENT";
    case DiagCode::StarvedFlow: return "STARVED_FLOW";
    }
    return "?";
}

TmError::TmError(DiagCode code, std::string subject, std::string message)
    : code_(code), subject_(std::move(subject)), message_(std::move(message)) {}

bool StaticModel::has_thimac(const std::string& id) const {
    return find_thimac(id) != nullptr;
}

bool StaticModel::has_action(const std::string& id) const {
    return find_action(id) != nullptr;
}

const Thimac* StaticModel::find_thimac(const std::string& id) const {
    for (const auto& t : thimacs_)
        if (t.id == id) return &t;
    return nullptr;
}

const Action* StaticModel::find_action(const std::string& id) const {
    for (const auto& a : actions_)
        if (a.id == id) return &a;
    return nullptr;
}

std::vector<std::string> StaticModel::composite_children(const std::string& id) const {
    std::vector<std::string> out;
    for (const auto& l : part_links_)
        if (l.kind == LinkKind::Composite && l.whole == id) out.push_back(l.part);
    return out;
}

std::vector<PartLink> StaticModel::parts_of(const std::string& id) const {
    std::vector<PartLink> out;
    for (const auto& l : part_links_)
        if (l.whole == id) out.push_back(l);
    return out;
}

std::vector<const Action*> StaticModel::actions_of(const std::string& thimac_id) const {
    std::vector<const Action*> out;
    for (const auto& a : actions_)
        if (a.owner == thimac_id) out.push_back(&a);
    return out;
}

std::vector<Flow> StaticModel::inbound_flows(const std::string& action_id) const {
    std::vector<Flow> out;
    for (const auto& f : flows_)
        if (f.dst == action_id) out.push_back(f);
    return out;
}

std::vector<Flow> StaticModel::outbound_flows(const std::string& action_id) const {
    std::vector<Flow> out;
    for (const auto& f : flows_)
        if (f.src == action_id) out.push_back(f);
    return out;
}

std::vector<Trigger> StaticModel::inbound_triggers(const std::string& action_id) const {
    std::vector<Trigger> out;
    for (const auto& t : triggers_)
        if (t.dst == action_id) out.push_back(t);
    return out;
}

std::vector<Trigger> StaticModel::outbound_triggers(const std::string& action_id) const {
    std::vector<Trigger> out;
    for (const auto& t : triggers_)
        if (t.src == action_id) out.push_back(t);
    return out;
}

struct ModelBuilder {
    static StaticModel assemble(std::vector<Thimac> thimacs, std::vector<PartLink> links,
                                std::vector<Action> actions, std::vector<Flow> flows,
                                std::vector<Trigger> triggers) {
        StaticModel m;
        m.thimacs_ = std::move(thimacs);
        m.part_links_ = std::move(links);
        m.actions_ = std::move(actions);
        m.flows_ = std::move(flows);
        m.triggers_ = std::move(triggers);
        return m;
    }
};

namespace {

std::string edge_id(const std::string& src, const std::string& dst, bool trigger) {
    return src + (trigger ? "~>" : "->") + dst;
}

// Reports one error per directed cycle, naming the members in a stable order.
template <typename EdgeList>
void report_cycles(const EdgeList& edges, ErrorCode code, const char* what,
                   std::vector<StructureError>& errors) {
    // Iterative DFS with coloring over the node set mentioned by the edges.
    std::map<std::string, std::vector<std::string>> adj;
    for (const auto& [from, to] : edges) {
        adj[from].push_back(to);
        adj.try_emplace(to);
    }
    std::map<std::string, int> color; // 0 white, 1 gray, 2 black
    std::vector<std::string> stack;
    std::set<std::set<std::string>> reported;

    // Recursive lambda-free DFS keeping an explicit path.
    struct Frame {
        std::string node;
        size_t next = 0;
    };
    for (const auto& [start, _] : adj) {
        if (color[start] != 0) continue;
        std::vector<Frame> frames{{start, 0}};
        color[start] = 1;
        stack.push_back(start);
        while (!frames.empty()) {
            Frame& f = frames.back();
            const auto& nbrs = adj[f.node];
            if (f.next < nbrs.size()) {
                const std::string& nxt = nbrs[f.next++];
                if (color[nxt] == 0) {
                    color[nxt] = 1;
                    stack.push_back(nxt);
                    frames.push_back({nxt, 0});
                } else if (color[nxt] == 1) {
                    // Found a cycle: the path suffix starting at nxt.
                    auto it = std::find(stack.begin(), stack.end(), nxt);
                    std::set<std::string> members(it, stack.end());
                    if (reported.insert(members).second) {
                        std::ostringstream os;
                        os << what << " cycle through {";
                        bool first = true;
                        for (const auto& mname : members) {
                            if (!first) os << ", ";
                            os << mname;
                            first = false;
                        }
                        os << "}";
                        errors.push_back({code, *members.begin(), os.str()});
                    }
                }
            } else {
                color[f.node] = 2;
                stack.pop_back();
                frames.pop_back();
            }
        }
    }
}

} // namespace

BuildResult build_model(std::vector<Thimac> thimacs, std::vector<PartLink> part_links,
                        std::vector<Action> actions, std::vector<Flow> flows,
                        std::vector<Trigger> triggers) {
    std::vector<StructureError> errors;

    // Thimac id uniqueness.
    std::unordered_set<std::string> thimac_ids;
    for (const auto& t : thimacs) {
        if (!thimac_ids.insert(t.id).second)
            errors.push_back({ErrorCode::DuplicateId, t.id, "duplicate thimac id '" + t.id + "'"});
    }

    // Sibling name uniqueness (roots share the empty parent).
    std::map<std::pair<std::string, std::string>, int> sibling_names;
    for (const auto& t : thimacs) {
        auto key = std::make_pair(t.parent.value_or(""), t.name);
        if (++sibling_names[key] == 2)
            errors.push_back({ErrorCode::DuplicateId, t.id,
                              "duplicate sibling name '" + t.name + "' under '" +
                                  t.parent.value_or("<root>") + "'"});
    }

    // Parent references must exist and form a forest.
    std::vector<std::pair<std::string, std::string>> parent_edges; // parent -> child
    for (const auto& t : thimacs) {
        if (!t.parent) continue;
        if (!thimac_ids.count(*t.parent)) {
            errors.push_back({ErrorCode::DanglingReference, t.id,
                              "thimac '" + t.id + "' names unknown parent '" + *t.parent + "'"});
        } else {
            parent_edges.emplace_back(*t.parent, t.id);
        }
    }
    report_cycles(parent_edges, ErrorCode::ContainmentCycle, "containment", errors);

    // Part link endpoints must exist; drop exact duplicates (set semantics).
    std::vector<PartLink> links;
    std::set<PartLink> seen_links;
    for (const auto& l : part_links) {
        bool dangling = false;
        if (!thimac_ids.count(l.whole)) {
            errors.push_back({ErrorCode::DanglingReference, l.whole,
                              "part link names unknown whole '" + l.whole + "'"});
            dangling = true;
        }
        if (!thimac_ids.count(l.part)) {
            errors.push_back({ErrorCode::DanglingReference, l.part,
                              "part link names unknown part '" + l.part + "'"});
            dangling = true;
        }
        if (l.whole == l.part) {
            errors.push_back({ErrorCode::PartCycle, l.whole,
                              "part cycle through {" + l.whole + "}"});
            dangling = true;
        }
        if (!dangling && seen_links.insert(l).second) links.push_back(l);
    }

    // Every parent edge is a Composite link; add the ones not declared.
    for (const auto& [parent, child] : parent_edges) {
        PartLink implied{parent, child, LinkKind::Composite};
        if (seen_links.insert(implied).second) links.push_back(implied);
    }

    // At most one Composite whole per part.
    std::map<std::string, std::set<std::string>> composite_wholes;
    for (const auto& l : links)
        if (l.kind == LinkKind::Composite) composite_wholes[l.part].insert(l.whole);
    for (const auto& [part, wholes] : composite_wholes) {
        if (wholes.size() > 1) {
            std::ostringstream os;
            os << "part '" << part << "' has " << wholes.size() << " composite wholes: {";
            bool first = true;
            for (const auto& w : wholes) {
                if (!first) os << ", ";
                os << w;
                first = false;
            }
            os << "}";
            errors.push_back({ErrorCode::MultipleCompositeWholes, part, os.str()});
        }
    }

    // The union of all part links must be acyclic.
    {
        std::vector<std::pair<std::string, std::string>> edges;
        for (const auto& l : links) edges.emplace_back(l.whole, l.part);
        report_cycles(edges, ErrorCode::PartCycle, "part", errors);
    }

    // Actions: unique ids, owners declared.
    std::unordered_set<std::string> action_ids;
    for (const auto& a : actions) {
        if (!action_ids.insert(a.id).second)
            errors.push_back({ErrorCode::DuplicateId, a.id, "duplicate action id '" + a.id + "'"});
        if (!thimac_ids.count(a.owner))
            errors.push_back({ErrorCode::DanglingReference, a.id,
                              "action '" + a.id + "' owned by unknown thimac '" + a.owner + "'"});
    }

    // Flows and triggers: endpoints exist, src != dst, no duplicate pairs.
    auto check_edges = [&](const auto& edges, bool is_trigger) {
        std::set<std::pair<std::string, std::string>> seen;
        for (const auto& e : edges) {
            const std::string id = edge_id(e.src, e.dst, is_trigger);
            const char* what = is_trigger ? "trigger" : "flow";
            if (!action_ids.count(e.src))
                errors.push_back({ErrorCode::DanglingReference, id,
                                  std::string(what) + " names unknown action '" + e.src + "'"});
            if (!action_ids.count(e.dst))
                errors.push_back({ErrorCode::DanglingReference, id,
                                  std::string(what) + " names unknown action '" + e.dst + "'"});
            if (e.src == e.dst)
                errors.push_back({ErrorCode::SelfFlow, id,
                                  std::string(what) + " connects '" + e.src + "' to itself"});
            if (!seen.insert({e.src, e.dst}).second)
                errors.push_back({ErrorCode::DuplicateFlow, id,
                                  "duplicate " + std::string(what) + " '" + id + "'"});
        }
    };
    check_edges(flows, false);
    check_edges(triggers, true);

    if (!errors.empty()) return {std::nullopt, std::move(errors)};
    return {ModelBuilder::assemble(std::move(thimacs), std::move(links), std::move(actions),
                                   std::move(flows), std::move(triggers)),
            {}};
}

std::set<std::string> descendants(const StaticModel& model, const std::string& t,
                                  const std::set<LinkKind>& kinds) {
    if (!model.has_thimac(t))
        throw TmError(DiagCode::UnknownThimac, t, "unknown thimac '" + t + "'");
    std::set<std::string> out;
    std::vector<std::string> work{t};
    while (!work.empty()) {
        std::string cur = work.back();
        work.pop_back();
        for (const auto& l : model.part_links()) {
            if (l.whole != cur || !kinds.count(l.kind)) continue;
            if (l.part == t) continue; // valid models are acyclic anyway
            if (out.insert(l.part).second) work.push_back(l.part);
        }
    }
    return out;
}

InducedSubgraph induced_subgraph(const StaticModel& model,
                                 const std::set<std::string>& action_ids) {
    for (const auto& id : action_ids)
        if (!model.has_action(id))
            throw TmError(DiagCode::UnknownAction, id, "unknown action '" + id + "'");
    InducedSubgraph g;
    for (const auto& a : model.actions())
        if (action_ids.count(a.id)) g.action_ids.push_back(a.id);
    for (const auto& f : model.flows())
        if (action_ids.count(f.src) && action_ids.count(f.dst)) g.flows.push_back(f);
    for (const auto& t : model.triggers())
        if (action_ids.count(t.src) && action_ids.count(t.dst)) g.triggers.push_back(t);
    return g;
}

} // namespace tmkit
