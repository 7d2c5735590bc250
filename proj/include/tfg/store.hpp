#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tfg/feature_structure.hpp"
#include "tfg/signature.hpp"

namespace tfg {

/// Mutable working memory for unification with a trail.
///
/// Nodes are union-find cells; unification binds one representative to the
/// other, narrows types to their meet, and coerces arc values to the
/// appropriateness restrictions of the narrowed type. Every destructive
/// change is trailed so that `undo(mark)` restores the exact earlier state,
/// which is what backtracking in both engines relies on.
class Store {
public:
  struct Mark {
    std::size_t cells;
    std::size_t trail;
  };

  explicit Store(const Signature& sig) : sig_(&sig) {}

  const Signature& signature() const noexcept { return *sig_; }

  NodeId add(TypeId type);
  NodeId deref(NodeId n) const {
    while (cells_[n].forward != n) n = cells_[n].forward;
    return n;
  }
  TypeId type(NodeId n) const { return cells_[deref(n)].type; }
  std::span<const Arc> arcs(NodeId n) const { return cells_[deref(n)].arcs; }
  /// Dereferenced target of `f` on `n`, if present.
  std::optional<NodeId> arc(NodeId n, FeatId f) const;

  /// Narrows `n` to meet(type(n), t), coercing its arcs as needed.
  bool specialize(NodeId n, TypeId t, Clash* clash = nullptr);
  bool unify(NodeId a, NodeId b, Clash* clash = nullptr);
  /// Returns the value of `f` on `n`, creating it (and narrowing `n` to a type
  /// carrying `f`) when absent. nullopt when `n` cannot carry `f`.
  std::optional<NodeId> ensure_arc(NodeId n, FeatId f);

  Mark mark() const noexcept { return {cells_.size(), trail_.size()}; }
  void undo(Mark m);

  /// Copies `g` into fresh cells; graph node i becomes `base + i`.
  NodeId import(const Graph& g);

  /// Copies the structure reachable from `roots` into a compact graph.
  /// `out_roots[i]` is the graph node for `roots[i]`.
  Graph extract(std::span<const NodeId> roots, std::vector<NodeId>& out_roots) const;

  std::size_t size() const noexcept { return cells_.size(); }

private:
  struct Cell {
    TypeId type;
    NodeId forward;
    std::vector<Arc> arcs;
  };
  enum class Undo : std::uint8_t { bind, type, arc };
  struct TrailEntry {
    Undo kind;
    NodeId node;
    std::uint32_t old;  // previous type id, or feature id of an inserted arc
  };
  struct Work {
    NodeId a;
    NodeId b;  // kNone for a coercion of `a` to `type`
    TypeId type;
    int path;
  };
  static constexpr NodeId kNone = 0xffffffffu;

  bool run(std::vector<Work>& work, std::vector<std::pair<int, FeatId>>& paths, Clash* clash);
  void set_type(NodeId n, TypeId t);
  void insert_arc(NodeId n, FeatId f, NodeId target);

  const Signature* sig_;
  std::vector<Cell> cells_;
  std::vector<TrailEntry> trail_;
};

}  // namespace tfg
