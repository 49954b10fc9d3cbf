#pragma once

#include <exception>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace tmkit {

/// The five generic actions every machine is built from. No other kind is
/// representable.
enum class ActionKind { Create, Process, Release, Transfer, Receive };

enum class LinkKind { Composite, Shared };

const char* to_string(ActionKind k);
const char* to_string(LinkKind k);

/// Parses the lowercase action keyword ("create", "process", ...).
std::optional<ActionKind> action_kind_from_string(const std::string& s);

/// A thing/machine: the basic modeling unit. `parent` is the lexical
/// container; parent edges always materialize as Composite part links.
struct Thimac {
    std::string id;                    // unique model-wide; dot-path by convention
    std::string name;                  // unique among siblings of the same parent
    std::optional<std::string> parent; // containment; forms a forest
    bool declared_oo = false;

    bool operator==(const Thimac&) const = default;
};

/// Whole->part edge. A part has at most one Composite whole; Shared wholes
/// are unbounded. The union of all part links is acyclic.
struct PartLink {
    std::string whole;
    std::string part;
    LinkKind kind = LinkKind::Composite;

    bool operator==(const PartLink&) const = default;
    auto operator<=>(const PartLink&) const = default;
};

struct Action {
    std::string id;    // unique model-wide; canonical form "kind.owner[:label]"
    ActionKind kind = ActionKind::Create;
    std::string owner; // thimac id
    std::string thing_label; // optional; names the thing handled

    bool operator==(const Action&) const = default;
};

/// Solid arrow: a thing moves between actions.
struct Flow {
    std::string src; // action id
    std::string dst; // action id; src != dst, no duplicate pairs

    bool operator==(const Flow&) const = default;
    auto operator<=>(const Flow&) const = default;
};

/// Dashed arrow: movement of one thing starts the movement of a different
/// thing. Consumes nothing at the source.
struct Trigger {
    std::string src;
    std::string dst;

    bool operator==(const Trigger&) const = default;
    auto operator<=>(const Trigger&) const = default;
};

/// Codes for structure and syntax violations (build_model, parse).
enum class ErrorCode {
    DuplicateId,
    DanglingReference,
    ContainmentCycle,
    MultipleCompositeWholes,
    PartCycle,
    SelfFlow,
    DuplicateFlow,
    // parser-only
    LexError,
    SyntaxError,
    AmbiguousReference,
};

/// Codes for analysis diagnostics and operation precondition failures.
enum class DiagCode {
    IllegalIntraFlow,
    IllegalInterFlow,
    IntraMachineTrigger,
    BoundaryBypass,
    UnknownThimac,
    UnknownAction,
    UnknownEvent,
    EmptyKinds,
    EmptyEvent,
    DisconnectedEvent,
    DepViolation,
    CyclicBehavior,
    CyclicEvent,
    StarvedFlow,
};

const char* to_string(ErrorCode c);
const char* to_string(DiagCode c);

struct StructureError {
    ErrorCode code = ErrorCode::DuplicateId;
    std::string subject; // offending id or edge, "" when not applicable
    std::string message;
};

/// The full static model. Immutable after build_model succeeds; every
/// analysis in this library is a pure function over it.
class StaticModel {
public:
    const std::vector<Thimac>& thimacs() const { return thimacs_; }
    const std::vector<PartLink>& part_links() const { return part_links_; }
    const std::vector<Action>& actions() const { return actions_; }
    const std::vector<Flow>& flows() const { return flows_; }
    const std::vector<Trigger>& triggers() const { return triggers_; }

    bool has_thimac(const std::string& id) const;
    bool has_action(const std::string& id) const;
    const Thimac* find_thimac(const std::string& id) const;
    const Action* find_action(const std::string& id) const;

    /// Composite children in declaration order.
    std::vector<std::string> composite_children(const std::string& id) const;

    /// Part links in declaration order where `id` is the whole.
    std::vector<PartLink> parts_of(const std::string& id) const;

    /// Actions owned by a thimac, declaration order.
    std::vector<const Action*> actions_of(const std::string& thimac_id) const;

    std::vector<Flow> inbound_flows(const std::string& action_id) const;
    std::vector<Flow> outbound_flows(const std::string& action_id) const;
    std::vector<Trigger> inbound_triggers(const std::string& action_id) const;
    std::vector<Trigger> outbound_triggers(const std::string& action_id) const;

    bool empty() const { return thimacs_.empty() && actions_.empty(); }

private:
    friend struct ModelBuilder;
    std::vector<Thimac> thimacs_;
    std::vector<PartLink> part_links_;
    std::vector<Action> actions_;
    std::vector<Flow> flows_;
    std::vector<Trigger> triggers_;
};

/// `model` is engaged iff `errors` is empty — never both, never neither.
struct BuildResult {
    std::optional<StaticModel> model;
    std::vector<StructureError> errors;

    bool ok() const { return errors.empty(); }
};

/// Validates the raw declarations and assembles a StaticModel. All
/// violations are collected; nothing short-circuits. Parent edges are
/// unified with the declared Composite links (a parent edge with no
/// matching declared link is added as one).
BuildResult build_model(std::vector<Thimac> thimacs,
                        std::vector<PartLink> part_links,
                        std::vector<Action> actions,
                        std::vector<Flow> flows,
                        std::vector<Trigger> triggers);

/// Thrown by operations whose preconditions reference unknown ids or
/// demand properties the inputs lack (e.g. acyclicity).
class TmError : public std::exception {
public:
    TmError(DiagCode code, std::string subject, std::string message);
    const char* what() const noexcept override { return message_.c_str(); }
    DiagCode code() const { return code_; }
    const std::string& subject() const { return subject_; }

private:
    DiagCode code_;
    std::string subject_;
    std::string message_;
};

/// Transitive closure of part links restricted to `kinds`, excluding `t`
/// itself. Throws TmError(UNKNOWN_THIMAC) when `t` is not declared.
std::set<std::string> descendants(const StaticModel& model, const std::string& t,
                                  const std::set<LinkKind>& kinds);

/// Actions plus the flow/trigger edges with both endpoints inside the set.
struct InducedSubgraph {
    std::vector<std::string> action_ids; // model declaration order
    std::vector<Flow> flows;
    std::vector<Trigger> triggers;
};

InducedSubgraph induced_subgraph(const StaticModel& model,
                                 const std::set<std::string>& action_ids);

} // namespace tmkit
