#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tmkit/events.hpp"

namespace tmkit {

/// A declared chronology: directed graph over events.
struct BehavioralModel {
    std::string id;
    std::vector<std::string> event_ids; // declaration order; breaks ties
    std::vector<std::pair<std::string, std::string>> edges;

    bool operator==(const BehavioralModel&) const = default;
};

enum class TokenOrigin { External, Created, Triggered };

const char* to_string(TokenOrigin o);

/// A moving thing. Ids are assigned sequentially in mint order.
struct Token {
    std::int64_t id = 0;
    TokenOrigin origin = TokenOrigin::Created;
    std::string birth_action;
    std::string label; // inherited thing_label of the birth action

    bool operator==(const Token&) const = default;
};

struct FiringRecord {
    std::string event;
    std::string action;
    ActionKind kind = ActionKind::Create; // kind of `action`, kept for audits
    std::vector<std::int64_t> consumed;
    std::vector<std::int64_t> emitted;

    bool operator==(const FiringRecord&) const = default;
};

/// Deterministic execution record of a behavioral model.
struct Trace {
    std::vector<FiringRecord> firings;
    std::vector<std::int64_t> exits; // tokens that left through a boundary transfer
    std::map<std::int64_t, std::string> final_locations;
    std::vector<Token> tokens; // every minted token, id order

    bool operator==(const Trace&) const = default;
};

struct SimError {
    DiagCode code = DiagCode::CyclicBehavior;
    std::string subject;
    std::string message;
};

/// `trace` engaged iff `error` is not.
struct SimResult {
    std::optional<Trace> trace;
    std::optional<SimError> error;

    bool ok() const { return trace.has_value(); }
};

/// DEP_VIOLATION for every derived dependency the chronology inverts, a
/// CYCLIC_BEHAVIOR warning when the chronology itself loops, UNKNOWN_EVENT
/// for events missing from the dependency graph.
std::vector<Diagnostic> validate_chronology(const BehavioralModel& b,
                                            const DependencyGraph& deps);

/// Topological order of the chronology; ties resolved by declaration order
/// in event_ids. Throws TmError(CYCLIC_BEHAVIOR) on a cycle.
std::vector<std::string> linearize(const BehavioralModel& b);

/// Fires events in linearize(b) order and the actions inside each event in
/// topological order of the event's induced subgraph (declaration order
/// breaking ties). Token rules:
///   - create mints one CREATED token, unless an inbound trigger fires,
///     in which case the triggered mint is the created thing;
///   - a flow fired at its destination moves one token from the source;
///     an empty source outside the event is backfilled with an EXTERNAL
///     token in Relaxed mode and is a STARVED_FLOW error in Strict mode;
///   - a trigger whose source holds a token mints one TRIGGERED token at
///     the destination, leaving the source untouched;
///   - transfer/receive actions with no inbound edges admit one EXTERNAL
///     token from the environment (Relaxed) or starve (Strict);
///   - a transfer with no outgoing flow sends its tokens out of the model
///     (recorded in exits).
SimResult simulate(const StaticModel& model, const std::vector<Event>& events,
                   const BehavioralModel& b, CheckMode mode);

struct ConservationReport {
    bool process_neutral = true;   // process firings neither create nor destroy
    bool exits_via_transfer = true;
    bool mint_accounting = true;   // minted == |final_locations| + |exits|
    std::size_t process_firings = 0;
    std::size_t minted = 0;
    std::size_t created = 0;
    std::size_t external = 0;
    std::size_t triggered = 0;
    std::size_t exited = 0;
    std::size_t resident = 0;

    bool all_pass() const { return process_neutral && exits_via_transfer && mint_accounting; }
};

/// Pure audit over a trace; total for any input trace.
ConservationReport conservation_check(const Trace& t);

} // namespace tmkit
