#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "tfg/control.hpp"
#include "tfg/grammar.hpp"
#include "tfg/store.hpp"

namespace tfg {

struct TopDownOptions {
  bool deterministic_closure = true;
  std::size_t max_depth = 512;
  std::uint64_t max_steps = 1000000;
};

struct TopDownStats {
  std::uint64_t steps = 0;          // head unifications attempted
  std::uint64_t choice_points = 0;  // selections with more than one candidate clause
  std::uint64_t solutions = 0;
  std::uint64_t suspensions = 0;
  std::size_t max_depth = 0;

  TopDownStats& operator+=(const TopDownStats& o);
};

/// Depth-first resolution over a grammar with clause indexing, deterministic
/// closure, and delay patterns.
///
/// Goals are atoms whose arguments are nodes of a caller-owned Store. Each
/// solution is reported while its bindings are in the store; the store is
/// restored to its entry state before `solve` returns.
class TopDownEngine {
public:
  /// Called per solution with the goals still delayed; return false to stop.
  using SolutionFn = std::function<bool(Store&, const std::vector<Atom>& delayed)>;

  TopDownEngine(const Grammar& g, Control control, TopDownOptions opts = {});

  const Grammar& grammar() const noexcept { return *g_; }
  const Control& control() const noexcept { return control_; }
  const TopDownOptions& options() const noexcept { return opts_; }

  /// Enumerates solutions of `goals` together with `delayed_in`. Throws
  /// ResourceLimitError when the depth or step cap is exceeded.
  void solve(Store& store, const std::vector<Atom>& goals, const std::vector<Atom>& delayed_in,
             const SolutionFn& on_solution);

  /// Clauses whose head may unify with `goal`, in grammar order. Only
  /// index keys whose types have no meet rule a clause out.
  std::vector<std::size_t> clause_lookup(const Store& store, const Atom& goal) const;

  bool is_delayed(const Store& store, const Atom& goal) const;

  /// Index of the goal to run next among `goals` (which must not be delayed),
  /// with its candidate clauses.
  std::pair<std::size_t, std::vector<std::size_t>> select_goal(const Store& store, const std::vector<Atom>& goals) const;

  const TopDownStats& stats() const noexcept { return stats_; }
  void reset_stats() { stats_ = {}; }

private:
  struct Goal {
    Atom atom;
    std::size_t depth;
  };
  struct Keyed {
    std::vector<std::optional<TypeId>> types;  // per index key of the clause's relation
  };

  std::optional<TypeId> key_type(const Store& store, const Atom& goal, const IndexKey& key) const;
  bool condition_holds(const Store& store, const Atom& goal, const DelayCondition& c) const;
  /// Moves runnable goals out of `delayed` to the front of `goals`.
  void wake(const Store& store, std::vector<Goal>& goals, std::vector<Goal>& delayed) const;

  const Grammar* g_;
  Control control_;
  TopDownOptions opts_;
  std::vector<Keyed> keyed_;  // per clause
  std::map<std::string, std::vector<IndexKey>> keys_;
  TopDownStats stats_;
};

}  // namespace tfg
