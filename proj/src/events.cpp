#include "tmkit/events.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace tmkit {

std::vector<Diagnostic> validate_event(const StaticModel& model, const Event& e) {
    std::vector<Diagnostic> out;
    if (e.action_ids.empty()) {
        out.push_back({Severity::Error, DiagCode::EmptyEvent, e.id,
                       "event '" + e.id + "' covers no actions"});
        return out;
    }
    std::set<std::string> known;
    for (const auto& id : e.action_ids) {
        if (model.has_action(id)) {
            known.insert(id);
        } else {
            out.push_back({Severity::Error, DiagCode::UnknownAction, id,
                           "event '" + e.id + "' references unknown action '" + id + "'"});
        }
    }
    if (known.size() > 1 && out.empty()) {
        // Union-find over the known actions using the induced edges.
        std::map<std::string, std::string> rep;
        for (const auto& id : known) rep[id] = id;
        std::function<std::string(const std::string&)> find = [&](const std::string& x) {
            return rep[x] == x ? x : rep[x] = find(rep[x]);
        };
        auto unite = [&](const std::string& a, const std::string& b) {
            rep[find(a)] = find(b);
        };
        InducedSubgraph g = induced_subgraph(model, known);
        for (const auto& f : g.flows) unite(f.src, f.dst);
        for (const auto& t : g.triggers) unite(t.src, t.dst);
        std::set<std::string> roots;
        for (const auto& id : known) roots.insert(find(id));
        if (roots.size() > 1)
            out.push_back({Severity::Warning, DiagCode::DisconnectedEvent, e.id,
                           "event '" + e.id + "' splits into " + std::to_string(roots.size()) +
                               " disconnected pieces"});
    }
    sort_diagnostics(out);
    return out;
}

DependencyGraph derive_dependencies(const StaticModel& model,
                                    const std::vector<Event>& events) {
    DependencyGraph g;
    for (const auto& e : events) g.nodes.push_back(e.id);

    std::set<std::pair<std::string, std::string>> seen;
    auto scan = [&](const std::string& a, const std::string& b) {
        for (const auto& ei : events) {
            if (!ei.action_ids.count(a) || ei.action_ids.count(b)) continue;
            for (const auto& ej : events) {
                if (ej.id == ei.id || !ej.action_ids.count(b)) continue;
                if (seen.insert({ei.id, ej.id}).second) g.edges.emplace_back(ei.id, ej.id);
            }
        }
    };
    for (const auto& f : model.flows()) scan(f.src, f.dst);
    for (const auto& t : model.triggers()) scan(t.src, t.dst);
    std::sort(g.edges.begin(), g.edges.end());

    // Cycle detection via Kahn's algorithm.
    std::map<std::string, int> indeg;
    for (const auto& n : g.nodes) indeg[n] = 0;
    for (const auto& [from, to] : g.edges) ++indeg[to];
    std::vector<std::string> ready;
    for (const auto& n : g.nodes)
        if (indeg[n] == 0) ready.push_back(n);
    size_t removed = 0;
    while (!ready.empty()) {
        std::string n = ready.back();
        ready.pop_back();
        ++removed;
        for (const auto& [from, to] : g.edges)
            if (from == n && --indeg[to] == 0) ready.push_back(to);
    }
    g.cyclic = removed != g.nodes.size();
    return g;
}

} // namespace tmkit
