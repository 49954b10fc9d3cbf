#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tmkit/events.hpp"
#include "tmkit/model.hpp"
#include "tmkit/sim.hpp"

namespace tmkit {

struct SourceSpan {
    int line = 1;   // 1-based
    int column = 1; // 1-based
    int length = 0;

    bool operator==(const SourceSpan&) const = default;
};

struct ParseError {
    SourceSpan span;
    ErrorCode code = ErrorCode::SyntaxError;
    std::string message;
};

/// Everything one .tm file declares: the static model plus the event and
/// behavior declarations layered on top of it.
struct ModelDocument {
    StaticModel static_model;
    std::vector<Event> events;
    std::vector<BehavioralModel> behaviors;
};

/// `document` engaged iff `errors` empty.
struct ParseResult {
    std::optional<ModelDocument> document;
    std::vector<ParseError> errors;

    bool ok() const { return errors.empty(); }
};

/// Parses DSL text into a validated document. Deterministic; never throws
/// on malformed input. On success the contained static model satisfies
/// every build_model invariant and all event/behavior references resolve.
ParseResult parse(const std::string& text);

/// Emits canonical DSL text: nested thimac blocks for composite
/// containment, machines and shared parts in declaration order, flows and
/// triggers hoisted to the top level, events and behaviors last.
/// parse(round_trip(doc)) is structurally equal to doc for any document
/// whose ids follow the canonical dot-path scheme.
std::string round_trip(const ModelDocument& doc);

/// Order-insensitive equality over all component sets.
bool structurally_equal(const ModelDocument& a, const ModelDocument& b);

} // namespace tmkit
