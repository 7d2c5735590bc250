#include "tfg/topdown.hpp"

#include <algorithm>

namespace tfg {

TopDownStats& TopDownStats::operator+=(const TopDownStats& o) {
  steps += o.steps;
  choice_points += o.choice_points;
  solutions += o.solutions;
  suspensions += o.suspensions;
  max_depth = std::max(max_depth, o.max_depth);
  return *this;
}

namespace {

std::optional<NodeId> follow_store(const Store& store, NodeId n, std::span<const FeatId> path) {
  for (FeatId f : path) {
    auto next = store.arc(n, f);
    if (!next) return std::nullopt;
    n = *next;
  }
  return store.deref(n);
}

}  // namespace

TopDownEngine::TopDownEngine(const Grammar& g, Control control, TopDownOptions opts)
    : g_(&g), control_(std::move(control)), opts_(opts) {
  for (const auto& [rel, arity] : g.relations()) keys_[rel] = control_.keys(rel, arity);
  keyed_.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Clause& c = g.clause(i);
    for (const IndexKey& k : keys_[c.head.relation]) {
      std::optional<TypeId> t;
      if (k.arg < c.head.arity())
        if (auto n = follow(c.graph, c.head.args[k.arg], k.path)) t = c.graph.type(*n);
      keyed_[i].types.push_back(t);
    }
  }
}

std::optional<TypeId> TopDownEngine::key_type(const Store& store, const Atom& goal, const IndexKey& key) const {
  if (key.arg >= goal.arity()) return std::nullopt;
  auto n = follow_store(store, goal.args[key.arg], key.path);
  if (!n) return std::nullopt;
  return store.type(*n);
}

std::vector<std::size_t> TopDownEngine::clause_lookup(const Store& store, const Atom& goal) const {
  std::vector<std::size_t> out;
  auto defining = g_->defining(goal.relation);
  if (defining.empty()) return out;
  const auto& keys = keys_.at(goal.relation);
  std::vector<std::optional<TypeId>> goal_types;
  for (const IndexKey& k : keys) goal_types.push_back(key_type(store, goal, k));
  const Signature& sig = g_->signature();
  for (std::size_t ci : defining) {
    if (g_->clause(ci).head.arity() != goal.arity()) continue;
    bool keep = true;
    for (std::size_t k = 0; k < keys.size() && keep; ++k) {
      const auto& ct = keyed_[ci].types[k];
      if (ct && goal_types[k] && !sig.meet(*ct, *goal_types[k])) keep = false;
    }
    if (keep) out.push_back(ci);
  }
  return out;
}

bool TopDownEngine::condition_holds(const Store& store, const Atom& goal, const DelayCondition& c) const {
  const Signature& sig = g_->signature();
  NodeId n = store.deref(goal.args[c.arg]);
  TypeId reference = Signature::top;
  for (FeatId f : c.path) {
    TypeId parent = store.type(n);
    auto next = store.arc(n, f);
    if (!next) return true;
    reference = sig.restriction(parent, f).value_or(Signature::top);
    n = *next;
  }
  if (c.type) reference = *c.type;
  return sig.subtype(reference, store.type(n));
}

bool TopDownEngine::is_delayed(const Store& store, const Atom& goal) const {
  for (const DelayPattern& p : control_.delays) {
    if (p.relation != goal.relation || p.arity != goal.arity()) continue;
    if (std::all_of(p.when.begin(), p.when.end(), [&](const DelayCondition& c) { return condition_holds(store, goal, c); }))
      return true;
  }
  return false;
}

std::pair<std::size_t, std::vector<std::size_t>> TopDownEngine::select_goal(const Store& store,
                                                                            const std::vector<Atom>& goals) const {
  if (opts_.deterministic_closure) {
    for (std::size_t i = 0; i < goals.size(); ++i) {
      auto c = clause_lookup(store, goals[i]);
      if (c.size() <= 1) return {i, std::move(c)};
    }
  }
  return {0, clause_lookup(store, goals.front())};
}

void TopDownEngine::wake(const Store& store, std::vector<Goal>& goals, std::vector<Goal>& delayed) const {
  std::vector<Goal> woken, still;
  for (Goal& d : delayed) (is_delayed(store, d.atom) ? still : woken).push_back(std::move(d));
  delayed = std::move(still);
  if (woken.empty()) return;
  woken.insert(woken.end(), std::make_move_iterator(goals.begin()), std::make_move_iterator(goals.end()));
  goals = std::move(woken);
}

void TopDownEngine::solve(Store& store, const std::vector<Atom>& goals_in, const std::vector<Atom>& delayed_in,
                          const SolutionFn& on_solution) {
  struct Frame {
    Store::Mark mark;
    std::vector<Goal> rest;
    std::vector<Goal> delayed;
    Goal goal;
    std::vector<std::size_t> candidates;
    std::size_t next = 0;
  };

  const Store::Mark entry = store.mark();
  std::vector<Frame> stack;
  std::vector<Goal> goals, delayed;
  for (const Atom& a : goals_in) goals.push_back({a, 0});
  for (const Atom& a : delayed_in) delayed.push_back({a, 0});

  // Runs the current state forward to a choice; false once the search space is exhausted or stopped.
  auto advance = [&]() -> bool {
    wake(store, goals, delayed);
    std::vector<Goal> runnable;
    for (Goal& g : goals) {
      if (is_delayed(store, g.atom)) {
        ++stats_.suspensions;
        delayed.push_back(std::move(g));
      } else {
        runnable.push_back(std::move(g));
      }
    }
    if (runnable.empty()) {
      ++stats_.solutions;
      std::vector<Atom> out;
      for (const Goal& d : delayed) out.push_back(d.atom);
      return on_solution(store, out);
    }
    std::vector<Atom> atoms;
    for (const Goal& g : runnable) atoms.push_back(g.atom);
    auto [pick, candidates] = select_goal(store, atoms);
    if (candidates.size() > 1) ++stats_.choice_points;
    Frame f{store.mark(), {}, std::move(delayed), std::move(runnable[pick]), std::move(candidates), 0};
    runnable.erase(runnable.begin() + static_cast<std::ptrdiff_t>(pick));
    f.rest = std::move(runnable);
    stack.push_back(std::move(f));
    return true;
  };

  // Tries the next alternative of the top frame; false when it has none left.
  auto retry = [&]() -> bool {
    Frame& f = stack.back();
    while (f.next < f.candidates.size()) {
      const Clause& c = g_->clause(f.candidates[f.next++]);
      store.undo(f.mark);
      if (++stats_.steps > opts_.max_steps) throw ResourceLimitError(ResourceLimitError::Kind::steps, opts_.max_steps);
      NodeId base = store.import(c.graph);
      bool ok = true;
      for (std::size_t i = 0; i < c.head.arity() && ok; ++i) ok = store.unify(f.goal.atom.args[i], base + c.head.args[i]);
      if (!ok) continue;
      const std::size_t depth = f.goal.depth + 1;
      if (depth > opts_.max_depth) throw ResourceLimitError(ResourceLimitError::Kind::depth, opts_.max_depth);
      stats_.max_depth = std::max(stats_.max_depth, depth);
      goals.clear();
      for (const Atom& b : c.body) {
        Atom a{b.relation, b.args};
        for (NodeId& n : a.args) n += base;
        goals.push_back({std::move(a), depth});
      }
      goals.insert(goals.end(), f.rest.begin(), f.rest.end());
      delayed = f.delayed;
      return true;
    }
    store.undo(f.mark);
    stack.pop_back();
    return false;
  };

  try {
    bool running = advance();
    while (running && !stack.empty()) {
      if (retry() && !advance()) break;
    }
  } catch (...) {
    store.undo(entry);
    throw;
  }
  store.undo(entry);
}

}  // namespace tfg
