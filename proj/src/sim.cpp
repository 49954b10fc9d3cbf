#include "tmkit/sim.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

namespace tmkit {

const char* to_string(TokenOrigin o) {
    switch (o) {
    case TokenOrigin::External: return "external";
    case TokenOrigin::Created: return "created";
    case TokenOrigin::Triggered: return "triggered";
    }
    return "?";
}

namespace {

bool reaches(const BehavioralModel& b, const std::string& from, const std::string& to) {
    if (from == to) return true;
    std::set<std::string> seen{from};
    std::vector<std::string> work{from};
    while (!work.empty()) {
        std::string cur = work.back();
        work.pop_back();
        for (const auto& [s, d] : b.edges) {
            if (s != cur || seen.count(d)) continue;
            if (d == to) return true;
            seen.insert(d);
            work.push_back(d);
        }
    }
    return false;
}

bool behavior_cyclic(const BehavioralModel& b) {
    for (const auto& [s, d] : b.edges)
        if (s == d || (reaches(b, d, s) && s != d)) return true;
    return false;
}

} // namespace

std::vector<Diagnostic> validate_chronology(const BehavioralModel& b,
                                            const DependencyGraph& deps) {
    std::vector<Diagnostic> out;
    const std::set<std::string> dep_nodes(deps.nodes.begin(), deps.nodes.end());
    const std::set<std::string> b_nodes(b.event_ids.begin(), b.event_ids.end());
    for (const auto& e : b.event_ids)
        if (!dep_nodes.count(e))
            out.push_back({Severity::Error, DiagCode::UnknownEvent, e,
                           "behavior '" + b.id + "' references unknown event '" + e + "'"});
    if (behavior_cyclic(b))
        out.push_back({Severity::Warning, DiagCode::CyclicBehavior, b.id,
                       "behavior '" + b.id + "' contains a cycle"});
    for (const auto& [ei, ej] : deps.edges) {
        if (!b_nodes.count(ei) || !b_nodes.count(ej)) continue;
        if (reaches(b, ej, ei) && !reaches(b, ei, ej)) {
            out.push_back({Severity::Error, DiagCode::DepViolation, ei + "->" + ej,
                           "chronology orders '" + ej + "' before '" + ei +
                               "' against the derived dependency"});
        }
    }
    sort_diagnostics(out);
    return out;
}

std::vector<std::string> linearize(const BehavioralModel& b) {
    std::map<std::string, std::size_t> decl_index;
    for (std::size_t i = 0; i < b.event_ids.size(); ++i) decl_index[b.event_ids[i]] = i;

    std::map<std::string, int> indeg;
    for (const auto& e : b.event_ids) indeg[e] = 0;
    for (const auto& [s, d] : b.edges) {
        if (indeg.count(s) && indeg.count(d)) ++indeg[d];
    }
    auto next_ready = [&]() -> std::optional<std::string> {
        std::optional<std::string> best;
        for (const auto& e : b.event_ids)
            if (indeg.count(e) && indeg[e] == 0 && (!best || decl_index[e] < decl_index[*best]))
                best = e;
        return best;
    };
    std::vector<std::string> order;
    while (order.size() < b.event_ids.size()) {
        auto n = next_ready();
        if (!n)
            throw TmError(DiagCode::CyclicBehavior, b.id,
                          "behavior '" + b.id + "' contains a cycle; cannot linearize");
        order.push_back(*n);
        indeg.erase(*n);
        for (const auto& [s, d] : b.edges)
            if (s == *n && indeg.count(d)) --indeg[d];
    }
    return order;
}

namespace {

// Topological order of the actions inside one event; declaration order of
// the model breaks ties. Returns nullopt when the induced subgraph loops.
std::optional<std::vector<std::string>> event_firing_order(const StaticModel& model,
                                                           const Event& e) {
    InducedSubgraph g = induced_subgraph(model, e.action_ids);
    std::map<std::string, std::size_t> decl_index;
    for (std::size_t i = 0; i < g.action_ids.size(); ++i) decl_index[g.action_ids[i]] = i;
    std::map<std::string, int> indeg;
    for (const auto& a : g.action_ids) indeg[a] = 0;
    auto edge_pairs = [&]() {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& f : g.flows) out.emplace_back(f.src, f.dst);
        for (const auto& t : g.triggers) out.emplace_back(t.src, t.dst);
        return out;
    }();
    for (const auto& [s, d] : edge_pairs) ++indeg[d];

    std::vector<std::string> order;
    while (order.size() < g.action_ids.size()) {
        std::optional<std::string> best;
        for (const auto& a : g.action_ids)
            if (indeg.count(a) && indeg[a] == 0 && (!best || decl_index[a] < decl_index[*best]))
                best = a;
        if (!best) return std::nullopt;
        order.push_back(*best);
        indeg.erase(*best);
        for (const auto& [s, d] : edge_pairs)
            if (s == *best && indeg.count(d)) --indeg[d];
    }
    return order;
}

struct SimState {
    std::map<std::string, std::deque<std::int64_t>> at; // action -> resident tokens, FIFO
    std::vector<Token> tokens;
    std::vector<std::int64_t> exits;
    std::int64_t next_id = 1;

    std::int64_t mint(TokenOrigin origin, const Action& birth) {
        Token t;
        t.id = next_id++;
        t.origin = origin;
        t.birth_action = birth.id;
        t.label = birth.thing_label;
        tokens.push_back(t);
        at[birth.id].push_back(t.id);
        return t.id;
    }
};

} // namespace

SimResult simulate(const StaticModel& model, const std::vector<Event>& events,
                   const BehavioralModel& b, CheckMode mode) {
    std::map<std::string, const Event*> by_id;
    for (const auto& e : events) by_id[e.id] = &e;
    for (const auto& id : b.event_ids)
        if (!by_id.count(id))
            return {std::nullopt,
                    SimError{DiagCode::UnknownEvent, id,
                             "behavior '" + b.id + "' references unknown event '" + id + "'"}};

    std::vector<std::string> order;
    try {
        order = linearize(b);
    } catch (const TmError& e) {
        return {std::nullopt, SimError{e.code(), e.subject(), e.what()}};
    }

    Trace trace;
    SimState st;
    for (const auto& event_id : order) {
        const Event& ev = *by_id.at(event_id);
        auto firing_order = event_firing_order(model, ev);
        if (!firing_order)
            return {std::nullopt,
                    SimError{DiagCode::CyclicEvent, ev.id,
                             "event '" + ev.id + "' induces a cyclic subgraph; no firing order"}};

        for (const auto& action_id : *firing_order) {
            const Action& action = *model.find_action(action_id);
            FiringRecord rec;
            rec.event = ev.id;
            rec.action = action_id;
            rec.kind = action.kind;

            const auto in_flows = model.inbound_flows(action_id);
            const auto in_triggers = model.inbound_triggers(action_id);

            if (action.kind == ActionKind::Create) {
                // A triggered creation is the created thing; otherwise the
                // create acts spontaneously.
                bool any_trigger_fired = false;
                for (const auto& tr : in_triggers) {
                    if (!st.at[tr.src].empty()) {
                        rec.emitted.push_back(st.mint(TokenOrigin::Triggered, action));
                        any_trigger_fired = true;
                    }
                }
                if (!any_trigger_fired)
                    rec.emitted.push_back(st.mint(TokenOrigin::Created, action));
            } else {
                for (const auto& f : in_flows) {
                    auto& src_q = st.at[f.src];
                    if (!src_q.empty()) {
                        std::int64_t tok = src_q.front();
                        src_q.pop_front();
                        st.at[action_id].push_back(tok);
                        rec.consumed.push_back(tok);
                        rec.emitted.push_back(tok);
                    } else if (!ev.action_ids.count(f.src)) {
                        // Starved from outside the event: the environment
                        // either backfills the thing or the run aborts.
                        if (mode == CheckMode::Strict)
                            return {std::nullopt,
                                    SimError{DiagCode::StarvedFlow, f.src + "->" + f.dst,
                                             "flow into '" + f.dst + "' starved at '" + f.src +
                                                 "' while firing event '" + ev.id + "'"}};
                        rec.emitted.push_back(st.mint(TokenOrigin::External, action));
                    }
                    // An empty source inside the event simply carries nothing.
                }
                for (const auto& tr : in_triggers) {
                    if (!st.at[tr.src].empty())
                        rec.emitted.push_back(st.mint(TokenOrigin::Triggered, action));
                }
                if (in_flows.empty() && in_triggers.empty() &&
                    (action.kind == ActionKind::Transfer || action.kind == ActionKind::Receive)) {
                    // Boundary port: things arrive from outside the model.
                    if (mode == CheckMode::Strict)
                        return {std::nullopt,
                                SimError{DiagCode::StarvedFlow, action_id,
                                         "boundary action '" + action_id +
                                             "' has no in-model source (event '" + ev.id + "')"}};
                    rec.emitted.push_back(st.mint(TokenOrigin::External, action));
                }
            }

            if (action.kind == ActionKind::Transfer && model.outbound_flows(action_id).empty()) {
                for (std::int64_t tok : st.at[action_id]) st.exits.push_back(tok);
                st.at[action_id].clear();
            }
            trace.firings.push_back(std::move(rec));
        }
    }

    trace.exits = st.exits;
    trace.tokens = st.tokens;
    for (const auto& [action_id, q] : st.at)
        for (std::int64_t tok : q) trace.final_locations[tok] = action_id;
    return {std::move(trace), std::nullopt};
}

ConservationReport conservation_check(const Trace& t) {
    ConservationReport r;

    std::map<std::int64_t, const Token*> token_by_id;
    for (const auto& tok : t.tokens) {
        token_by_id[tok.id] = &tok;
        switch (tok.origin) {
        case TokenOrigin::Created: ++r.created; break;
        case TokenOrigin::External: ++r.external; break;
        case TokenOrigin::Triggered: ++r.triggered; break;
        }
    }

    // Minted = first appearance in an emitted list.
    std::set<std::int64_t> minted;
    std::map<std::int64_t, const FiringRecord*> last_emit;
    for (const auto& f : t.firings) {
        std::set<std::int64_t> consumed(f.consumed.begin(), f.consumed.end());
        for (std::int64_t tok : f.emitted) {
            if (!consumed.count(tok)) minted.insert(tok);
            last_emit[tok] = &f;
        }
        if (f.kind == ActionKind::Process) {
            ++r.process_firings;
            // The process itself neither creates nor destroys: everything
            // consumed is re-emitted, and any extra emission is a mint the
            // trigger or the boundary accounts for, born at this action.
            for (std::int64_t tok : f.consumed)
                if (std::find(f.emitted.begin(), f.emitted.end(), tok) == f.emitted.end())
                    r.process_neutral = false;
            for (std::int64_t tok : f.emitted) {
                if (consumed.count(tok)) continue;
                auto it = token_by_id.find(tok);
                if (it == token_by_id.end() || it->second->birth_action != f.action ||
                    it->second->origin == TokenOrigin::Created)
                    r.process_neutral = false;
            }
        }
    }
    r.minted = minted.size();

    for (std::int64_t tok : t.exits) {
        ++r.exited;
        auto it = last_emit.find(tok);
        if (it == last_emit.end() || it->second->kind != ActionKind::Transfer)
            r.exits_via_transfer = false;
    }

    r.resident = t.final_locations.size();
    std::set<std::int64_t> exit_set(t.exits.begin(), t.exits.end());
    bool overlap = false;
    for (const auto& [tok, loc] : t.final_locations)
        if (exit_set.count(tok)) overlap = true;
    r.mint_accounting = !overlap && r.minted == r.resident + r.exited &&
                        exit_set.size() == t.exits.size();
    return r;
}

} // namespace tmkit
