#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tfg/signature.hpp"

namespace tfg {

using NodeId = std::uint32_t;

struct Arc {
  FeatId feature;
  NodeId target;
};

struct Node {
  TypeId type = Signature::top;
  std::vector<Arc> arcs;  // sorted by feature id, at most one per feature
};

/// A pool of typed nodes with feature arcs. A graph may have several roots:
/// clause and edge arguments live in one graph so that node identity realizes
/// structure sharing across head, body, and delayed literals.
class Graph {
public:
  NodeId add(TypeId type) {
    nodes_.push_back(Node{type, {}});
    return static_cast<NodeId>(nodes_.size() - 1);
  }
  /// Inserts or replaces the arc for `f` on `from`.
  void set_arc(NodeId from, FeatId f, NodeId to);

  std::optional<NodeId> arc(NodeId from, FeatId f) const;

  const Node& node(NodeId n) const { return nodes_.at(n); }
  Node& node(NodeId n) { return nodes_.at(n); }
  TypeId type(NodeId n) const { return nodes_.at(n).type; }
  std::size_t size() const noexcept { return nodes_.size(); }
  bool empty() const noexcept { return nodes_.empty(); }

private:
  std::vector<Node> nodes_;
};

/// A rooted typed feature structure: a normal-form term over the signature.
struct FeatureStructure {
  Graph graph;
  NodeId root = 0;

  TypeId root_type() const { return graph.type(root); }
};

/// Position where unification found two types without a meet.
struct Clash {
  TypeId left;
  TypeId right;
  std::vector<FeatId> path;
};

struct UnificationOutcome {
  std::optional<FeatureStructure> result;
  // For each node of the left/right input, the corresponding result node.
  std::vector<NodeId> left_map;
  std::vector<NodeId> right_map;
  std::optional<Clash> clash;

  bool ok() const noexcept { return result.has_value(); }
};

/// Most general satisfier of `t`: every appropriate feature is present and
/// filled with the satisfier of its restriction. Expansion stops at a type that
/// is already being expanded on the current path, leaving a bare node.
FeatureStructure mgsat(const Signature& sig, TypeId t);

/// Non-destructive graph unification.
UnificationOutcome unify(const Signature& sig, const FeatureStructure& a, const FeatureStructure& b);

/// Subsumption over root tuples: `general` is at least as general as
/// `specific` when a root- and arc-preserving mapping exists that only
/// specializes types and maps every reentrancy of `general` onto one node.
/// A feature missing in `specific` is read as its appropriateness restriction.
bool subsumes(const Signature& sig, const Graph& general, std::span<const NodeId> general_roots,
              const Graph& specific, std::span<const NodeId> specific_roots);
bool subsumes(const Signature& sig, const FeatureStructure& general, const FeatureStructure& specific);

/// Returns a description of the first well-typedness violation, if any.
std::optional<std::string> check_well_typed(const Signature& sig, const Graph& g);

/// Empty path denotes the root.
std::optional<NodeId> follow(const Graph& g, NodeId from, std::span<const FeatId> path);

/// Canonical term syntax. Nodes are visited depth-first in feature order;
/// reentrant nodes get tags `#1`, `#2`, ... by first visit. A feature whose
/// value is an untagged bare node of exactly its appropriateness restriction
/// carries no information and is omitted, so structures that differ only by
/// such arcs print identically. Lists print with `< >` sugar.
class TermWriter {
public:
  /// `roots` are all roots that will be written, in order; tags are shared across them.
  TermWriter(const Signature& sig, const Graph& g, std::span<const NodeId> roots);

  std::string write(NodeId root);

private:
  enum class Ctx { top, nested };
  void write_node(std::string& out, NodeId n, Ctx ctx);
  bool informative(NodeId parent, const Arc& a) const;
  bool list_sugar(NodeId n) const;

  const Signature& sig_;
  const Graph& g_;
  std::vector<std::uint32_t> refs_;
  std::vector<std::uint32_t> tag_of_;
  std::uint32_t next_tag_ = 1;
  std::optional<TypeId> e_list_, ne_list_;
  std::optional<FeatId> hd_, tl_;
};

std::string canonical(const Signature& sig, const FeatureStructure& fs);

/// Isomorphism up to uninformative arcs, via canonical forms.
bool isomorphic(const Signature& sig, const FeatureStructure& a, const FeatureStructure& b);

}  // namespace tfg
