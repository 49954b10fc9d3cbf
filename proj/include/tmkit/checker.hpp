#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tmkit/model.hpp"

namespace tmkit {

enum class Severity { Error, Warning };

const char* to_string(Severity s);

enum class CheckMode { Strict, Relaxed };

struct Diagnostic {
    Severity severity = Severity::Error;
    DiagCode code = DiagCode::IllegalIntraFlow;
    std::string subject; // action / edge / thimac / event id
    std::string message;

    bool operator==(const Diagnostic&) const = default;
};

/// Canonical presentation order: errors first, then subject, then code name.
void sort_diagnostics(std::vector<Diagnostic>& diags);

/// One line per diagnostic: "SEVERITY CODE subject: message".
std::string format_diagnostic(const Diagnostic& d);

enum class Verdict { OO, NonOO, Leaf };

const char* to_string(Verdict v);

struct Classification {
    std::string thimac;
    Verdict verdict = Verdict::Leaf;
    std::string note; // informational, e.g. when all parts are shared
};

/// Checks every flow against the canonical machine topology. Intra-machine
/// legal pairs: receive->process, receive->release, process->release,
/// create->process, create->release, release->transfer, transfer->receive.
/// Across machines only transfer->transfer is legal. Violations are errors
/// in Strict mode and the same diagnostics downgraded to warnings in
/// Relaxed mode. Triggers are unrestricted; a trigger that stays inside one
/// machine gets an informational warning in both modes.
std::vector<Diagnostic> check_flow_legality(const StaticModel& model, CheckMode mode);

/// For every thimac declared oo, reports BOUNDARY_BYPASS for each flow or
/// trigger with exactly one endpoint owned by a proper composite descendant
/// and the other endpoint owned neither by the thimac itself nor by any of
/// its descendants.
std::vector<Diagnostic> check_oo_encapsulation(const StaticModel& model);

/// Computed classification, independent of declared_oo: Leaf when the
/// thimac has no parts of any kind, OO when declaring it oo would produce
/// zero bypass diagnostics, NonOO otherwise.
std::vector<Classification> classify(const StaticModel& model);

/// The least set containing `t` and closed under composite links. Shared
/// parts are never pulled in.
std::set<std::string> deletion_impact(const StaticModel& model, const std::string& t);

/// Cartesian product of all descendants (composite and shared) with the
/// requested kinds: the per-part actions induced when the whole acts.
std::set<std::pair<std::string, ActionKind>>
behavioral_aggregation(const StaticModel& model, const std::string& whole,
                       const std::set<ActionKind>& kinds);

} // namespace tmkit
