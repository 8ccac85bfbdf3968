/// @file fault_tree.h
/// Monotone AND/OR fault trees: synthesis from a model and software
/// integration.

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "resha/model.h"
#include "resha/stpa.h"

namespace resha {

class FaultTreeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class GateOp { kAnd, kOr };

enum class EventCategory {
  kHwStochastic,
  kHwDesign,
  kDependencyLeaf,
  kSwUca,
  kSwUif,
  kCcf,
};

/// What a gate stands for in the branch template.
enum class GateRole {
  kTop,
  kComponent,   ///< Fail(C)
  kDependency,  ///< dependency failure branch of C
  kSoftware,    ///< software design failure branch of C
  kRedundancy,  ///< redundancy-group combination
  kGeneric,
};

std::string_view to_string(GateOp op);
std::string_view to_string(EventCategory category);
std::string_view to_string(GateRole role);
std::optional<GateOp> parse_gate_op(std::string_view text);
std::optional<EventCategory> parse_event_category(std::string_view text);
std::optional<GateRole> parse_gate_role(std::string_view text);

/// Hardware (stochastic, design, dependency leaf) versus software (UCA, UIF,
/// software CCF) events.
bool is_software(EventCategory category);

struct Gate {
  GateOp op = GateOp::kOr;
  std::vector<std::size_t> children;
  GateRole role = GateRole::kGeneric;
  std::string component;  ///< Owning component for template gates.
  bool unresolved = false;  ///< Software branch with no integrated events.
  bool operator==(const Gate&) const = default;
};

struct BasicEvent {
  EventCategory category = EventCategory::kHwStochastic;
  bool operator==(const BasicEvent&) const = default;
};

struct Node {
  std::string id;
  std::string label;
  std::variant<Gate, BasicEvent> body;

  bool is_gate() const { return std::holds_alternative<Gate>(body); }
  const Gate& gate() const { return std::get<Gate>(body); }
  Gate& gate() { return std::get<Gate>(body); }
  const BasicEvent& event() const { return std::get<BasicEvent>(body); }
  bool operator==(const Node&) const = default;
};

struct TreeMetadata {
  std::string model;
  std::string top_event;
  bool include_hw_design = false;
  bool software_integrated = false;
  bool ccf_injected = false;
  bool operator==(const TreeMetadata&) const = default;
};

/// Arena-backed DAG. Node indices are stable; subtrees may be shared.
class FaultTree {
 public:
  /// @throws FaultTreeError if `id` is already taken.
  std::size_t add_gate(const std::string& id, GateOp op, GateRole role, std::string label,
                       std::string component = {});
  std::size_t add_event(const std::string& id, EventCategory category, std::string label);
  /// Appends `child` unless it is already a child of `gate`.
  void add_child(std::size_t gate, std::size_t child);

  void set_root(std::size_t index) { root_ = index; }
  std::size_t root() const { return root_; }

  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(std::size_t index) const { return nodes_.at(index); }
  Node& node(std::size_t index) { return nodes_.at(index); }
  std::optional<std::size_t> find(const std::string& id) const;

  /// Nodes reachable from the root, children before parents.
  /// @throws FaultTreeError on a cycle.
  std::vector<std::size_t> bottom_up_order() const;

  /// Ids of basic events reachable from the root, in arena order.
  std::vector<std::string> basic_events() const;

  /// Top event state when exactly the events in `failed` have occurred.
  bool evaluate(const std::set<std::string>& failed) const;
  /// Same, with `event_state` indexed by node index (non-events ignored).
  bool evaluate(const std::vector<char>& event_state) const;

  /// Gates with more than one parent among reachable nodes, by index.
  std::map<std::size_t, std::vector<std::size_t>> parents() const;

  TreeMetadata metadata;

  bool operator==(const FaultTree& other) const {
    return root_ == other.root_ && nodes_ == other.nodes_ && metadata == other.metadata;
  }

 private:
  std::vector<Node> nodes_;
  std::map<std::string, std::size_t> by_id_;
  std::size_t root_ = 0;
};

struct SynthesisOptions {
  bool include_hw_design = false;
};

/// Builds the hardware tree: each component upstream of the operator gets
/// Fail(C) = OR(stochastic, [design], [dependency], [software placeholder]).
/// @throws FaultTreeError for a missing operator or top event.
FaultTree synthesize_hardware_ft(const SystemModel& model, const SynthesisOptions& options = {});

struct BranchCensus {
  int hw_stochastic_events = 0;
  int dependency_branches = 0;
  int sw_design_branches = 0;
  int hw_design_branches = 0;
  bool operator==(const BranchCensus&) const = default;
};

/// Counts each shared subtree once.
BranchCensus branch_census(const FaultTree& ft);

/// Adds each instance as a basic event under its owner's software branch.
/// @throws FaultTreeError if an owner has no software branch in the tree.
FaultTree integrate_software(const FaultTree& ft, const std::vector<UcaUifInstance>& instances);

/// Node id conventions of the synthesized tree.
std::string fail_gate_id(std::string_view component);
std::string dependency_gate_id(std::string_view component);
std::string software_gate_id(std::string_view component);

}  // namespace resha
