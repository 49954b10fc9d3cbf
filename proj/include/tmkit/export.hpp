#pragma once

#include <string>

#include "tmkit/parser.hpp"
#include "tmkit/sim.hpp"

namespace tmkit {

/// Valid DOT digraph text; byte-identical across re-exports of the same
/// value.
struct DotDocument {
    std::string text;
};

/// One cluster per thimac honoring composite nesting, one box per action
/// labeled "kind[:label]", solid flow edges, dashed trigger edges, bold
/// anchor-to-anchor edges for shared links. Nodes and edges in sorted-id
/// order.
DotDocument to_dot_static(const StaticModel& model);

/// One node per event and one edge per chronology edge, declaration order
/// preserved.
DotDocument to_dot_behavior(const BehavioralModel& b);

enum class JsonErrorCode { MalformedJson, SchemaViolation };

const char* to_string(JsonErrorCode c);

class JsonError : public std::exception {
public:
    JsonError(JsonErrorCode code, std::string path, std::string message);
    const char* what() const noexcept override { return full_.c_str(); }
    JsonErrorCode code() const { return code_; }
    const std::string& path() const { return path_; } // JSON-pointer style

private:
    JsonErrorCode code_;
    std::string path_;
    std::string full_;
};

/// Canonical JSON: keys sorted, arrays sorted by id, no insignificant
/// whitespace. Round trips to a structurally equal value.
std::string to_json(const ModelDocument& doc);
std::string to_json(const Trace& trace);

/// Throw JsonError on malformed input or schema violations; the error
/// carries a JSON-pointer style path to the offending element. A decoded
/// document is revalidated through build_model.
ModelDocument document_from_json(const std::string& text);
Trace trace_from_json(const std::string& text);

} // namespace tmkit
