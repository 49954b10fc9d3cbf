#include "tmkit/export.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include <json.hpp>

namespace tmkit {

namespace {

using nlohmann::json;

std::string dot_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string action_label(const Action& a) {
    std::string label = to_string(a.kind);
    if (!a.thing_label.empty()) label += ":" + a.thing_label;
    return label;
}

void emit_cluster(const StaticModel& m, const Thimac& t,
                  const std::map<std::string, std::vector<const Thimac*>>& children,
                  int indent, std::ostream& os) {
    const std::string pad(indent * 2, ' ');
    os << pad << "subgraph " << dot_quote("cluster_" + t.id) << " {\n";
    os << pad << "  label=" << dot_quote(t.name) << ";\n";
    os << pad << "  style=" << (t.declared_oo ? "\"bold\"" : "\"solid\"") << ";\n";
    os << pad << "  " << dot_quote("anchor_" + t.id)
       << " [shape=point, style=invis, width=0.01];\n";
    std::vector<const Action*> owned = m.actions_of(t.id);
    std::sort(owned.begin(), owned.end(),
              [](const Action* a, const Action* b) { return a->id < b->id; });
    for (const Action* a : owned)
        os << pad << "  " << dot_quote(a->id) << " [label=" << dot_quote(action_label(*a))
           << "];\n";
    if (auto it = children.find(t.id); it != children.end())
        for (const Thimac* child : it->second) emit_cluster(m, *child, children, indent + 1, os);
    os << pad << "}\n";
}

} // namespace

DotDocument to_dot_static(const StaticModel& model) {
    std::ostringstream os;
    os << "digraph static_model {\n";
    os << "  compound=true;\n";
    os << "  node [shape=box, fontsize=10];\n";

    // Children sorted by id; composite containment only.
    std::map<std::string, std::vector<const Thimac*>> children;
    std::vector<const Thimac*> roots;
    for (const auto& t : model.thimacs()) {
        if (t.parent)
            children[*t.parent].push_back(&t);
        else
            roots.push_back(&t);
    }
    auto by_id = [](const Thimac* a, const Thimac* b) { return a->id < b->id; };
    std::sort(roots.begin(), roots.end(), by_id);
    for (auto& [_, v] : children) std::sort(v.begin(), v.end(), by_id);

    for (const Thimac* t : roots) emit_cluster(model, *t, children, 1, os);

    auto flows = model.flows();
    std::sort(flows.begin(), flows.end());
    for (const auto& f : flows)
        os << "  " << dot_quote(f.src) << " -> " << dot_quote(f.dst) << ";\n";

    auto triggers = model.triggers();
    std::sort(triggers.begin(), triggers.end());
    for (const auto& t : triggers)
        os << "  " << dot_quote(t.src) << " -> " << dot_quote(t.dst) << " [style=dashed];\n";

    std::vector<PartLink> shared;
    for (const auto& l : model.part_links())
        if (l.kind == LinkKind::Shared) shared.push_back(l);
    std::sort(shared.begin(), shared.end());
    for (const auto& l : shared)
        os << "  " << dot_quote("anchor_" + l.whole) << " -> " << dot_quote("anchor_" + l.part)
           << " [style=bold, dir=none, ltail=" << dot_quote("cluster_" + l.whole)
           << ", lhead=" << dot_quote("cluster_" + l.part) << "];\n";

    os << "}\n";
    return {os.str()};
}

DotDocument to_dot_behavior(const BehavioralModel& b) {
    std::ostringstream os;
    os << "digraph " << dot_quote("behavior_" + b.id) << " {\n";
    os << "  node [shape=box];\n";
    for (const auto& e : b.event_ids) os << "  " << dot_quote(e) << ";\n";
    for (const auto& [from, to] : b.edges)
        os << "  " << dot_quote(from) << " -> " << dot_quote(to) << ";\n";
    os << "}\n";
    return {os.str()};
}

const char* to_string(JsonErrorCode c) {
    return c == JsonErrorCode::MalformedJson ? "MALFORMED_JSON" : "SCHEMA_VIOLATION";
}

JsonError::JsonError(JsonErrorCode code, std::string path, std::string message)
    : code_(code), path_(std::move(path)) {
    full_ = std::string(to_string(code_)) + " at '" + path_ + "': " + message;
}

namespace {

constexpr int kSchemaVersion = 1;

[[noreturn]] void schema_error(const std::string& path, const std::string& msg) {
    throw JsonError(JsonErrorCode::SchemaViolation, path, msg);
}

const json& member(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) schema_error(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) schema_error(path + "/" + key, "missing required member");
    return *it;
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) schema_error(path, "expected a string");
    return j.get<std::string>();
}

bool as_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) schema_error(path, "expected a boolean");
    return j.get<bool>();
}

std::int64_t as_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) schema_error(path, "expected an integer");
    return j.get<std::int64_t>();
}

const json& as_array(const json& j, const std::string& path) {
    if (!j.is_array()) schema_error(path, "expected an array");
    return j;
}

void check_version(const json& root) {
    const json& v = member(root, "tmkit_version", "");
    if (!v.is_number_integer() || v.get<int>() != kSchemaVersion)
        schema_error("/tmkit_version", "unsupported schema version");
}

ActionKind action_kind_or_fail(const std::string& s, const std::string& path) {
    auto k = action_kind_from_string(s);
    if (!k) schema_error(path, "unknown action kind '" + s + "'");
    return *k;
}

TokenOrigin origin_or_fail(const std::string& s, const std::string& path) {
    if (s == "external") return TokenOrigin::External;
    if (s == "created") return TokenOrigin::Created;
    if (s == "triggered") return TokenOrigin::Triggered;
    schema_error(path, "unknown token origin '" + s + "'");
}

json edges_to_json(const auto& edges) {
    std::vector<std::pair<std::string, std::string>> sorted;
    for (const auto& e : edges) sorted.emplace_back(e.src, e.dst);
    std::sort(sorted.begin(), sorted.end());
    json out = json::array();
    for (const auto& [src, dst] : sorted) out.push_back({{"src", src}, {"dst", dst}});
    return out;
}

} // namespace

std::string to_json(const ModelDocument& doc) {
    const StaticModel& m = doc.static_model;
    json root;
    root["tmkit_version"] = kSchemaVersion;

    auto thimacs = m.thimacs();
    std::sort(thimacs.begin(), thimacs.end(),
              [](const Thimac& a, const Thimac& b) { return a.id < b.id; });
    root["thimacs"] = json::array();
    for (const auto& t : thimacs) {
        json jt{{"id", t.id}, {"name", t.name}, {"declared_oo", t.declared_oo}};
        jt["parent"] = t.parent ? json(*t.parent) : json(nullptr);
        root["thimacs"].push_back(std::move(jt));
    }

    auto links = m.part_links();
    std::sort(links.begin(), links.end());
    root["part_links"] = json::array();
    for (const auto& l : links)
        root["part_links"].push_back(
            {{"whole", l.whole}, {"part", l.part}, {"kind", to_string(l.kind)}});

    auto actions = m.actions();
    std::sort(actions.begin(), actions.end(),
              [](const Action& a, const Action& b) { return a.id < b.id; });
    root["actions"] = json::array();
    for (const auto& a : actions)
        root["actions"].push_back({{"id", a.id},
                                   {"kind", to_string(a.kind)},
                                   {"owner", a.owner},
                                   {"thing_label", a.thing_label}});

    root["flows"] = edges_to_json(m.flows());
    root["triggers"] = edges_to_json(m.triggers());

    auto events = doc.events;
    std::sort(events.begin(), events.end(),
              [](const Event& a, const Event& b) { return a.id < b.id; });
    root["events"] = json::array();
    for (const auto& e : events) {
        json je{{"id", e.id}, {"name", e.name}, {"time_label", e.time_label}};
        je["action_ids"] = json::array();
        for (const auto& a : e.action_ids) je["action_ids"].push_back(a);
        root["events"].push_back(std::move(je));
    }

    auto behaviors = doc.behaviors;
    std::sort(behaviors.begin(), behaviors.end(),
              [](const BehavioralModel& a, const BehavioralModel& b) { return a.id < b.id; });
    root["behaviors"] = json::array();
    for (const auto& b : behaviors) {
        json jb{{"id", b.id}};
        jb["event_ids"] = b.event_ids; // declared order is semantic
        jb["edges"] = json::array();
        for (const auto& [from, to] : b.edges)
            jb["edges"].push_back({{"src", from}, {"dst", to}});
        root["behaviors"].push_back(std::move(jb));
    }

    return root.dump();
}

std::string to_json(const Trace& trace) {
    json root;
    root["tmkit_version"] = kSchemaVersion;
    root["firings"] = json::array();
    for (const auto& f : trace.firings)
        root["firings"].push_back({{"event", f.event},
                                   {"action", f.action},
                                   {"kind", to_string(f.kind)},
                                   {"consumed", f.consumed},
                                   {"emitted", f.emitted}});
    root["exits"] = trace.exits; // chronological exit order is part of the record
    root["final_locations"] = json::array();
    for (const auto& [tok, action] : trace.final_locations)
        root["final_locations"].push_back({{"token", tok}, {"action", action}});
    root["tokens"] = json::array();
    for (const auto& t : trace.tokens)
        root["tokens"].push_back({{"id", t.id},
                                  {"origin", to_string(t.origin)},
                                  {"birth_action", t.birth_action},
                                  {"label", t.label}});
    return root.dump();
}

namespace {

json parse_or_fail(const std::string& text) {
    json root = json::parse(text, nullptr, false);
    if (root.is_discarded())
        throw JsonError(JsonErrorCode::MalformedJson, "", "input is not valid JSON");
    return root;
}

std::string idx_path(const std::string& base, size_t i) {
    return base + "/" + std::to_string(i);
}

} // namespace

ModelDocument document_from_json(const std::string& text) {
    json root = parse_or_fail(text);
    check_version(root);

    std::vector<Thimac> thimacs;
    {
        const json& arr = as_array(member(root, "thimacs", ""), "/thimacs");
        for (size_t i = 0; i < arr.size(); ++i) {
            const std::string p = idx_path("/thimacs", i);
            Thimac t;
            t.id = as_string(member(arr[i], "id", p), p + "/id");
            t.name = as_string(member(arr[i], "name", p), p + "/name");
            t.declared_oo = as_bool(member(arr[i], "declared_oo", p), p + "/declared_oo");
            const json& parent = member(arr[i], "parent", p);
            if (!parent.is_null()) t.parent = as_string(parent, p + "/parent");
            thimacs.push_back(std::move(t));
        }
    }

    std::vector<PartLink> links;
    {
        const json& arr = as_array(member(root, "part_links", ""), "/part_links");
        for (size_t i = 0; i < arr.size(); ++i) {
            const std::string p = idx_path("/part_links", i);
            PartLink l;
            l.whole = as_string(member(arr[i], "whole", p), p + "/whole");
            l.part = as_string(member(arr[i], "part", p), p + "/part");
            const std::string kind = as_string(member(arr[i], "kind", p), p + "/kind");
            if (kind == "composite")
                l.kind = LinkKind::Composite;
            else if (kind == "shared")
                l.kind = LinkKind::Shared;
            else
                schema_error(p + "/kind", "unknown link kind '" + kind + "'");
            links.push_back(std::move(l));
        }
    }

    std::vector<Action> actions;
    {
        const json& arr = as_array(member(root, "actions", ""), "/actions");
        for (size_t i = 0; i < arr.size(); ++i) {
            const std::string p = idx_path("/actions", i);
            Action a;
            a.id = as_string(member(arr[i], "id", p), p + "/id");
            a.kind = action_kind_or_fail(as_string(member(arr[i], "kind", p), p + "/kind"),
                                         p + "/kind");
            a.owner = as_string(member(arr[i], "owner", p), p + "/owner");
            a.thing_label = as_string(member(arr[i], "thing_label", p), p + "/thing_label");
            actions.push_back(std::move(a));
        }
    }

    auto read_edges = [&](const char* key, auto make) {
        const std::string base = std::string("/") + key;
        const json& arr = as_array(member(root, key, ""), base);
        std::vector<decltype(make("", ""))> out;
        for (size_t i = 0; i < arr.size(); ++i) {
            const std::string p = idx_path(base, i);
            out.push_back(make(as_string(member(arr[i], "src", p), p + "/src"),
                               as_string(member(arr[i], "dst", p), p + "/dst")));
        }
        return out;
    };
    std::vector<Flow> flows =
        read_edges("flows", [](std::string s, std::string d) { return Flow{s, d}; });
    std::vector<Trigger> triggers =
        read_edges("triggers", [](std::string s, std::string d) { return Trigger{s, d}; });

    ModelDocument doc;
    {
        const json& arr = as_array(member(root, "events", ""), "/events");
        for (size_t i = 0; i < arr.size(); ++i) {
            const std::string p = idx_path("/events", i);
            Event e;
            e.id = as_string(member(arr[i], "id", p), p + "/id");
            e.name = as_string(member(arr[i], "name", p), p + "/name");
            e.time_label = as_string(member(arr[i], "time_label", p), p + "/time_label");
            const json& ids = as_array(member(arr[i], "action_ids", p), p + "/action_ids");
            for (size_t k = 0; k < ids.size(); ++k)
                e.action_ids.insert(as_string(ids[k], idx_path(p + "/action_ids", k)));
            doc.events.push_back(std::move(e));
        }
    }
    {
        const json& arr = as_array(member(root, "behaviors", ""), "/behaviors");
        for (size_t i = 0; i < arr.size(); ++i) {
            const std::string p = idx_path("/behaviors", i);
            BehavioralModel b;
            b.id = as_string(member(arr[i], "id", p), p + "/id");
            const json& ids = as_array(member(arr[i], "event_ids", p), p + "/event_ids");
            for (size_t k = 0; k < ids.size(); ++k)
                b.event_ids.push_back(as_string(ids[k], idx_path(p + "/event_ids", k)));
            const json& edges = as_array(member(arr[i], "edges", p), p + "/edges");
            for (size_t k = 0; k < edges.size(); ++k) {
                const std::string ep = idx_path(p + "/edges", k);
                b.edges.emplace_back(as_string(member(edges[k], "src", ep), ep + "/src"),
                                     as_string(member(edges[k], "dst", ep), ep + "/dst"));
            }
            doc.behaviors.push_back(std::move(b));
        }
    }

    BuildResult built = build_model(std::move(thimacs), std::move(links), std::move(actions),
                                    std::move(flows), std::move(triggers));
    if (!built.ok()) {
        std::ostringstream os;
        os << "document violates model structure:";
        for (const auto& e : built.errors) os << " [" << to_string(e.code) << "] " << e.message;
        schema_error("", os.str());
    }
    doc.static_model = std::move(*built.model);

    // Event and behavior references must land inside the document.
    std::set<std::string> event_ids;
    for (size_t i = 0; i < doc.events.size(); ++i) {
        const Event& e = doc.events[i];
        if (!event_ids.insert(e.id).second)
            schema_error(idx_path("/events", i) + "/id", "duplicate event id '" + e.id + "'");
        for (const auto& a : e.action_ids)
            if (!doc.static_model.has_action(a))
                schema_error(idx_path("/events", i) + "/action_ids",
                             "event '" + e.id + "' references unknown action '" + a + "'");
    }
    std::set<std::string> behavior_ids;
    for (size_t i = 0; i < doc.behaviors.size(); ++i) {
        const BehavioralModel& b = doc.behaviors[i];
        if (!behavior_ids.insert(b.id).second)
            schema_error(idx_path("/behaviors", i) + "/id",
                         "duplicate behavior id '" + b.id + "'");
        std::set<std::string> declared(b.event_ids.begin(), b.event_ids.end());
        for (const auto& ev : b.event_ids)
            if (!event_ids.count(ev))
                schema_error(idx_path("/behaviors", i) + "/event_ids",
                             "behavior '" + b.id + "' references unknown event '" + ev + "'");
        for (const auto& [from, to] : b.edges)
            if (!declared.count(from) || !declared.count(to))
                schema_error(idx_path("/behaviors", i) + "/edges",
                             "behavior '" + b.id + "' edge references undeclared event");
    }
    return doc;
}

Trace trace_from_json(const std::string& text) {
    json root = parse_or_fail(text);
    check_version(root);

    Trace t;
    {
        const json& arr = as_array(member(root, "firings", ""), "/firings");
        for (size_t i = 0; i < arr.size(); ++i) {
            const std::string p = idx_path("/firings", i);
            FiringRecord f;
            f.event = as_string(member(arr[i], "event", p), p + "/event");
            f.action = as_string(member(arr[i], "action", p), p + "/action");
            f.kind = action_kind_or_fail(as_string(member(arr[i], "kind", p), p + "/kind"),
                                         p + "/kind");
            const json& consumed = as_array(member(arr[i], "consumed", p), p + "/consumed");
            for (size_t k = 0; k < consumed.size(); ++k)
                f.consumed.push_back(as_int(consumed[k], idx_path(p + "/consumed", k)));
            const json& emitted = as_array(member(arr[i], "emitted", p), p + "/emitted");
            for (size_t k = 0; k < emitted.size(); ++k)
                f.emitted.push_back(as_int(emitted[k], idx_path(p + "/emitted", k)));
            t.firings.push_back(std::move(f));
        }
    }
    {
        const json& arr = as_array(member(root, "exits", ""), "/exits");
        for (size_t i = 0; i < arr.size(); ++i)
            t.exits.push_back(as_int(arr[i], idx_path("/exits", i)));
    }
    {
        const json& arr = as_array(member(root, "final_locations", ""), "/final_locations");
        for (size_t i = 0; i < arr.size(); ++i) {
            const std::string p = idx_path("/final_locations", i);
            t.final_locations[as_int(member(arr[i], "token", p), p + "/token")] =
                as_string(member(arr[i], "action", p), p + "/action");
        }
    }
    {
        const json& arr = as_array(member(root, "tokens", ""), "/tokens");
        for (size_t i = 0; i < arr.size(); ++i) {
            const std::string p = idx_path("/tokens", i);
            Token tok;
            tok.id = as_int(member(arr[i], "id", p), p + "/id");
            tok.origin = origin_or_fail(as_string(member(arr[i], "origin", p), p + "/origin"),
                                        p + "/origin");
            tok.birth_action =
                as_string(member(arr[i], "birth_action", p), p + "/birth_action");
            tok.label = as_string(member(arr[i], "label", p), p + "/label");
            t.tokens.push_back(std::move(tok));
        }
    }
    return t;
}

} // namespace tmkit
