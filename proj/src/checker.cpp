#include "tmkit/checker.hpp"

#include <algorithm>
#include <sstream>

namespace tmkit {

const char* to_string(Severity s) {
    return s == Severity::Error ? "ERROR" : "WARNING";
}

const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::OO: return "OO";
    case Verdict::NonOO: return "NON_OO";
    case Verdict::Leaf: return "LEAF";
    }
    return "?";
}

void sort_diagnostics(std::vector<Diagnostic>& diags) {
    std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) {
        if (a.severity != b.severity) return a.severity == Severity::Error;
        if (a.subject != b.subject) return a.subject < b.subject;
        return std::string_view(to_string(a.code)) < std::string_view(to_string(b.code));
    });
}

std::string format_diagnostic(const Diagnostic& d) {
    std::ostringstream os;
    os << to_string(d.severity) << " " << to_string(d.code) << " " << d.subject << ": "
       << d.message;
    return os.str();
}

namespace {

std::string flow_id(const Flow& f) { return f.src + "->" + f.dst; }
std::string trigger_id(const Trigger& t) { return t.src + "~>" + t.dst; }

bool legal_intra_pair(ActionKind src, ActionKind dst) {
    using K = ActionKind;
    switch (src) {
    case K::Receive: return dst == K::Process || dst == K::Release;
    case K::Process: return dst == K::Release;
    case K::Create: return dst == K::Process || dst == K::Release;
    case K::Release: return dst == K::Transfer;
    case K::Transfer: return dst == K::Receive;
    }
    return false;
}

} // namespace

std::vector<Diagnostic> check_flow_legality(const StaticModel& model, CheckMode mode) {
    std::vector<Diagnostic> out;
    const Severity flow_sev = mode == CheckMode::Strict ? Severity::Error : Severity::Warning;
    for (const auto& f : model.flows()) {
        const Action* src = model.find_action(f.src);
        const Action* dst = model.find_action(f.dst);
        if (!src || !dst) continue; // build_model already rejects dangling edges
        if (src->owner == dst->owner) {
            if (!legal_intra_pair(src->kind, dst->kind)) {
                std::ostringstream os;
                os << "illegal " << to_string(src->kind) << "->" << to_string(dst->kind)
                   << " flow inside machine '" << src->owner << "'";
                out.push_back({flow_sev, DiagCode::IllegalIntraFlow, flow_id(f), os.str()});
            }
        } else if (src->kind != ActionKind::Transfer || dst->kind != ActionKind::Transfer) {
            std::ostringstream os;
            os << "flow between machines '" << src->owner << "' and '" << dst->owner
               << "' must connect transfer to transfer, not " << to_string(src->kind) << "->"
               << to_string(dst->kind);
            out.push_back({flow_sev, DiagCode::IllegalInterFlow, flow_id(f), os.str()});
        }
    }
    for (const auto& t : model.triggers()) {
        const Action* src = model.find_action(t.src);
        const Action* dst = model.find_action(t.dst);
        if (!src || !dst) continue;
        if (src->owner == dst->owner) {
            out.push_back({Severity::Warning, DiagCode::IntraMachineTrigger, trigger_id(t),
                           "trigger stays inside machine '" + src->owner + "'"});
        }
    }
    sort_diagnostics(out);
    return out;
}

namespace {

// Bypass diagnostics for one hypothetical oo thimac.
void boundary_bypasses(const StaticModel& model, const std::string& oo_id,
                       std::vector<Diagnostic>& out) {
    const std::set<std::string> inside = descendants(model, oo_id, {LinkKind::Composite});
    if (inside.empty()) return;
    auto crosses = [&](const std::string& src_action, const std::string& dst_action)
        -> bool {
        const Action* a = model.find_action(src_action);
        const Action* b = model.find_action(dst_action);
        if (!a || !b) return false;
        const bool a_in = inside.count(a->owner) > 0;
        const bool b_in = inside.count(b->owner) > 0;
        if (a_in == b_in) return false;
        const std::string& outside_owner = a_in ? b->owner : a->owner;
        return outside_owner != oo_id && !inside.count(outside_owner);
    };
    for (const auto& f : model.flows()) {
        if (crosses(f.src, f.dst))
            out.push_back({Severity::Error, DiagCode::BoundaryBypass, flow_id(f),
                           "flow bypasses the boundary of oo thimac '" + oo_id + "'"});
    }
    for (const auto& t : model.triggers()) {
        if (crosses(t.src, t.dst))
            out.push_back({Severity::Error, DiagCode::BoundaryBypass, trigger_id(t),
                           "trigger bypasses the boundary of oo thimac '" + oo_id + "'"});
    }
}

bool would_be_oo(const StaticModel& model, const std::string& id) {
    std::vector<Diagnostic> diags;
    boundary_bypasses(model, id, diags);
    return diags.empty();
}

} // namespace

std::vector<Diagnostic> check_oo_encapsulation(const StaticModel& model) {
    std::vector<Diagnostic> out;
    for (const auto& t : model.thimacs()) {
        if (!t.declared_oo) continue;
        boundary_bypasses(model, t.id, out);
    }
    sort_diagnostics(out);
    return out;
}

std::vector<Classification> classify(const StaticModel& model) {
    std::vector<Classification> out;
    for (const auto& t : model.thimacs()) {
        Classification c;
        c.thimac = t.id;
        const auto parts = model.parts_of(t.id);
        if (parts.empty()) {
            c.verdict = Verdict::Leaf;
        } else {
            c.verdict = would_be_oo(model, t.id) ? Verdict::OO : Verdict::NonOO;
            const bool any_composite =
                std::any_of(parts.begin(), parts.end(),
                            [](const PartLink& l) { return l.kind == LinkKind::Composite; });
            if (!any_composite)
                c.note = "all parts are shared; boundary judged over composite parts only";
        }
        out.push_back(std::move(c));
    }
    return out;
}

std::set<std::string> deletion_impact(const StaticModel& model, const std::string& t) {
    if (!model.has_thimac(t))
        throw TmError(DiagCode::UnknownThimac, t, "unknown thimac '" + t + "'");
    std::set<std::string> impact{t};
    std::vector<std::string> work{t};
    while (!work.empty()) {
        std::string cur = work.back();
        work.pop_back();
        for (const auto& l : model.part_links()) {
            if (l.kind != LinkKind::Composite || l.whole != cur) continue;
            if (impact.insert(l.part).second) work.push_back(l.part);
        }
    }
    return impact;
}

std::set<std::pair<std::string, ActionKind>>
behavioral_aggregation(const StaticModel& model, const std::string& whole,
                       const std::set<ActionKind>& kinds) {
    if (!model.has_thimac(whole))
        throw TmError(DiagCode::UnknownThimac, whole, "unknown thimac '" + whole + "'");
    if (kinds.empty())
        throw TmError(DiagCode::EmptyKinds, whole, "behavioral aggregation needs at least one action kind");
    std::set<std::pair<std::string, ActionKind>> out;
    for (const auto& part : descendants(model, whole, {LinkKind::Composite, LinkKind::Shared}))
        for (ActionKind k : kinds) out.emplace(part, k);
    return out;
}

} // namespace tmkit
