/// @file model.h
/// Domain types for redundant digital control architectures.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace resha {

/// Location of a declaration in a model document. 1-based line/column.
///
/// Location is metadata: two spans always compare equal so that models
/// parsed from differently formatted documents are structurally equal.
struct SourceSpan {
  std::string file;
  int line = 0;
  int column = 0;

  bool known() const { return line > 0; }
  std::string str() const;

  friend bool operator==(const SourceSpan&, const SourceSpan&) { return true; }
};

/// Raised for unrecoverable model errors (e.g. chained replication).
class ModelError : public std::runtime_error {
 public:
  explicit ModelError(const std::string& msg, SourceSpan span = {})
      : std::runtime_error(span.known() ? span.str() + ": " + msg : msg),
        span_(std::move(span)) {}
  const SourceSpan& span() const { return span_; }

 private:
  SourceSpan span_;
};

enum class ComponentKind {
  kController,
  kSensor,
  kCalculator,
  kAlarm,
  kConverter,
  kConditioner,
  kPowerSupply,
  kComms,
  kDisplay,
  kTestPanel,
  kOperator,
};

enum class Tech { kDigital, kAnalog, kHuman };

enum class LinkKind { kControlAction, kInformationFlow };

/// The seven unsafe control action / information flow types.
enum class FailureMode : std::uint8_t { A, B, C, D, E, F, G };

inline constexpr FailureMode kAllFailureModes[] = {
    FailureMode::A, FailureMode::B, FailureMode::C, FailureMode::D,
    FailureMode::E, FailureMode::F, FailureMode::G};

/// The four original STPA unsafe control action categories.
enum class StpaCategory { kMissing, kNotNeeded, kTimingOrder, kDurationMagnitude };

enum class RedundancyLevel { kSystem, kDivision, kModule };

enum class GroupLogic { kAllMustFail, kAnyMisleads };

enum class ResourceScope { kInternal, kExternal };

std::string_view to_string(ComponentKind kind);
std::string_view to_string(Tech tech);
std::string_view to_string(LinkKind kind);
std::string_view to_string(StpaCategory category);
std::string_view to_string(RedundancyLevel level);
std::string_view to_string(GroupLogic logic);
std::string_view to_string(ResourceScope scope);
char to_char(FailureMode mode);

std::optional<ComponentKind> parse_component_kind(std::string_view text);
std::optional<Tech> parse_tech(std::string_view text);
std::optional<RedundancyLevel> parse_redundancy_level(std::string_view text);
std::optional<GroupLogic> parse_group_logic(std::string_view text);
std::optional<ResourceScope> parse_resource_scope(std::string_view text);
std::optional<FailureMode> parse_failure_mode(std::string_view text);

StpaCategory stpa_category(FailureMode mode);

/// Short description of a failure mode, e.g. "missing when needed".
std::string_view describe(FailureMode mode);

/// True if `id` matches [A-Za-z][A-Za-z0-9_-]*.
bool is_identifier(std::string_view id);

struct Loss {
  std::string id;
  std::string description;
  SourceSpan span;
  bool operator==(const Loss&) const = default;
};

struct Hazard {
  std::string id;
  std::string description;
  std::vector<std::string> linked_losses;
  SourceSpan span;
  bool operator==(const Hazard&) const = default;
};

struct DesignClass {
  std::string id;
  std::string description;
  std::string diversity_tag;  ///< Classes sharing a tag are non-diverse.
  SourceSpan span;
  bool operator==(const DesignClass&) const = default;
};

/// One applicable failure mode of a link with its hazard links.
struct Applicability {
  FailureMode mode = FailureMode::A;
  std::vector<std::string> hazards;
  SourceSpan span;
  bool operator==(const Applicability&) const = default;
};

/// A control action or information flow emitted by its owning component.
struct Link {
  std::string id;
  LinkKind kind = LinkKind::kInformationFlow;
  std::string port = "out";
  std::vector<std::string> targets;
  std::vector<Applicability> applicability;
  SourceSpan span;
  bool operator==(const Link&) const = default;
};

struct Component {
  std::string id;
  ComponentKind kind = ComponentKind::kSensor;
  Tech tech = Tech::kAnalog;
  std::string design_class;
  /// Link ids or component ids (plain signal wires).
  std::vector<std::string> inputs;
  /// Closed-loop feedback; excluded from dependency expansion.
  std::vector<std::string> feedback_inputs;
  std::vector<Link> links;  ///< Links this component sources.
  SourceSpan span;
  bool operator==(const Component&) const = default;
};

struct Division {
  std::string id;
  std::optional<std::string> replicates;
  std::vector<Component> components;
  SourceSpan span;
  bool operator==(const Division&) const = default;
};

struct RedundancyGroup {
  std::string id;
  RedundancyLevel level = RedundancyLevel::kDivision;
  std::vector<std::string> members;  ///< Division ids or component ids.
  GroupLogic logic = GroupLogic::kAllMustFail;
  SourceSpan span;
  bool operator==(const RedundancyGroup&) const = default;
};

struct SharedResource {
  std::string id;
  ResourceScope scope = ResourceScope::kExternal;
  std::vector<std::string> dependents;
  SourceSpan span;
  bool operator==(const SharedResource&) const = default;
};

struct SystemModel {
  std::string name;
  std::string top_event;
  std::vector<Loss> losses;
  std::vector<Hazard> hazards;
  std::vector<DesignClass> design_classes;
  std::vector<Division> divisions;
  /// Components outside every division (operator, shared terminals).
  std::vector<Component> shared_components;
  std::vector<RedundancyGroup> redundancy_groups;
  std::vector<SharedResource> shared_resources;
  bool operator==(const SystemModel&) const = default;
};

struct Violation {
  SourceSpan span;
  std::string message;
  std::string str() const;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks every model invariant. Never throws; violations are entries.
/// Cross-division references are resolved against the expanded model.
ValidationReport validate_model(const SystemModel& model);

/// Materializes every `replicates` division as a deep copy of its source.
/// Copied component and link ids get a `_<division>` suffix; design classes
/// are kept. Idempotent.
/// @throws ModelError on chained replication or a missing source division.
SystemModel expand_replication(const SystemModel& model);

/// A resolved non-feedback input edge of a component.
struct InputEdge {
  std::string source;  ///< Source component id.
  std::string link;    ///< Link id, empty for a plain wire.
  bool operator==(const InputEdge&) const = default;
};

/// Read-only lookup tables over an expanded model.
///
/// Holds pointers into the model; the model must outlive the index.
class ModelIndex {
 public:
  explicit ModelIndex(const SystemModel& model);

  const SystemModel& model() const { return *model_; }

  const Component* component(std::string_view id) const;
  const Link* link(std::string_view id) const;
  /// Owner component of a link.
  const Component* link_owner(std::string_view link_id) const;
  /// Division of a component; empty for shared components.
  const std::string& division_of(std::string_view component_id) const;
  const DesignClass* design_class(std::string_view id) const;
  const Division* division(std::string_view id) const;
  const Hazard* hazard(std::string_view id) const;
  bool has_loss(std::string_view id) const;

  /// All components in declaration order (divisions first, then shared).
  const std::vector<const Component*>& components() const { return order_; }

  /// Non-feedback inputs: declared inputs followed by links that target the
  /// component without being declared. Deduplicated by source.
  const std::vector<InputEdge>& inputs(std::string_view component_id) const;
  /// Components consuming `component_id` through non-feedback edges.
  const std::vector<std::string>& consumers(std::string_view component_id) const;

  /// The single operator component, if any.
  const Component* op() const { return operator_; }

  /// Deterministic topological order of the non-feedback dependency graph.
  /// Empty optional if the graph has a cycle.
  std::optional<std::vector<std::string>> topological_order() const;

 private:
  const SystemModel* model_;
  std::vector<const Component*> order_;
  std::map<std::string, const Component*, std::less<>> components_;
  std::map<std::string, std::string, std::less<>> division_of_;
  std::map<std::string, const Link*, std::less<>> links_;
  std::map<std::string, const Component*, std::less<>> link_owner_;
  std::map<std::string, const DesignClass*, std::less<>> classes_;
  std::map<std::string, const Division*, std::less<>> divisions_;
  std::map<std::string, const Hazard*, std::less<>> hazards_;
  std::map<std::string, bool, std::less<>> losses_;
  std::map<std::string, std::vector<InputEdge>, std::less<>> inputs_;
  std::map<std::string, std::vector<std::string>, std::less<>> consumers_;
  const Component* operator_ = nullptr;
};

}  // namespace resha
