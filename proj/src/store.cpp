#include "tfg/store.hpp"

#include <algorithm>
#include <unordered_map>

namespace tfg {

namespace {
auto arc_position(std::vector<Arc>& arcs, FeatId f) {
  return std::lower_bound(arcs.begin(), arcs.end(), f,
                          [](const Arc& a, FeatId x) { return index(a.feature) < index(x); });
}
}  // namespace

NodeId Store::add(TypeId type) {
  auto id = static_cast<NodeId>(cells_.size());
  cells_.push_back(Cell{type, id, {}});
  return id;
}

std::optional<NodeId> Store::arc(NodeId n, FeatId f) const {
  const auto& arcs = cells_[deref(n)].arcs;
  for (const Arc& a : arcs)
    if (a.feature == f) return deref(a.target);
  return std::nullopt;
}

void Store::set_type(NodeId n, TypeId t) {
  trail_.push_back({Undo::type, n, index(cells_[n].type)});
  cells_[n].type = t;
}

void Store::insert_arc(NodeId n, FeatId f, NodeId target) {
  auto& arcs = cells_[n].arcs;
  arcs.insert(arc_position(arcs, f), Arc{f, target});
  trail_.push_back({Undo::arc, n, index(f)});
}

bool Store::specialize(NodeId n, TypeId t, Clash* clash) {
  std::vector<Work> work{{n, kNone, t, -1}};
  std::vector<std::pair<int, FeatId>> paths;
  return run(work, paths, clash);
}

bool Store::unify(NodeId a, NodeId b, Clash* clash) {
  std::vector<Work> work{{a, b, Signature::top, -1}};
  std::vector<std::pair<int, FeatId>> paths;
  return run(work, paths, clash);
}

bool Store::run(std::vector<Work>& work, std::vector<std::pair<int, FeatId>>& paths, Clash* clash) {
  const Signature& sig = *sig_;
  auto child_path = [&](int parent, FeatId f) {
    if (!clash) return -1;
    paths.emplace_back(parent, f);
    return static_cast<int>(paths.size() - 1);
  };
  auto report = [&](TypeId l, TypeId r, int path) {
    if (!clash) return;
    clash->left = l;
    clash->right = r;
    clash->path.clear();
    for (int p = path; p >= 0; p = paths[p].first) clash->path.push_back(paths[p].second);
    std::reverse(clash->path.begin(), clash->path.end());
  };
  // After a node's type narrows, its arc values must meet the new restrictions.
  auto coerce_arcs = [&](NodeId x, int path) {
    TypeId t = cells_[x].type;
    for (const Arc& a : cells_[x].arcs)
      work.push_back({a.target, kNone, *sig.restriction(t, a.feature), child_path(path, a.feature)});
  };

  while (!work.empty()) {
    Work w = work.back();
    work.pop_back();
    NodeId x = deref(w.a);
    if (w.b == kNone) {
      TypeId old = cells_[x].type;
      auto m = sig.meet(old, w.type);
      if (!m) {
        report(old, w.type, w.path);
        return false;
      }
      if (*m != old) {
        set_type(x, *m);
        coerce_arcs(x, w.path);
      }
      continue;
    }
    NodeId y = deref(w.b);
    if (x == y) continue;
    TypeId tx = cells_[x].type, ty = cells_[y].type;
    auto m = sig.meet(tx, ty);
    if (!m) {
      report(tx, ty, w.path);
      return false;
    }
    // Keep the representative with more arcs to limit arc moves.
    if (cells_[y].arcs.size() > cells_[x].arcs.size()) {
      std::swap(x, y);
      std::swap(tx, ty);
    }
    cells_[y].forward = x;
    trail_.push_back({Undo::bind, y, 0});
    for (const Arc& a : cells_[y].arcs) {
      auto& xarcs = cells_[x].arcs;
      auto it = arc_position(xarcs, a.feature);
      if (it != xarcs.end() && it->feature == a.feature)
        work.push_back({it->target, a.target, Signature::top, child_path(w.path, a.feature)});
      else
        insert_arc(x, a.feature, a.target);
    }
    if (*m != tx) set_type(x, *m);
    if (*m != tx || *m != ty) coerce_arcs(x, w.path);
  }
  return true;
}

std::optional<NodeId> Store::ensure_arc(NodeId n, FeatId f) {
  NodeId x = deref(n);
  if (auto v = arc(x, f)) return v;
  if (!specialize(x, sig_->introducer(f))) return std::nullopt;
  x = deref(x);
  auto r = sig_->restriction(cells_[x].type, f);
  if (!r) return std::nullopt;
  NodeId v = add(*r);
  insert_arc(x, f, v);
  return v;
}

void Store::undo(Mark m) {
  while (trail_.size() > m.trail) {
    TrailEntry e = trail_.back();
    trail_.pop_back();
    Cell& c = cells_[e.node];
    switch (e.kind) {
      case Undo::bind: c.forward = e.node; break;
      case Undo::type: c.type = TypeId{e.old}; break;
      case Undo::arc: {
        auto it = arc_position(c.arcs, FeatId{e.old});
        c.arcs.erase(it);
        break;
      }
    }
  }
  cells_.resize(m.cells);
}

NodeId Store::import(const Graph& g) {
  auto base = static_cast<NodeId>(cells_.size());
  cells_.reserve(cells_.size() + g.size());
  for (NodeId i = 0; i < g.size(); ++i) {
    const Node& n = g.node(i);
    Cell c{n.type, base + i, {}};
    c.arcs.reserve(n.arcs.size());
    for (const Arc& a : n.arcs) c.arcs.push_back({a.feature, base + a.target});
    cells_.push_back(std::move(c));
  }
  return base;
}

Graph Store::extract(std::span<const NodeId> roots, std::vector<NodeId>& out_roots) const {
  Graph g;
  std::unordered_map<NodeId, NodeId> map;
  std::vector<std::pair<NodeId, NodeId>> pending;  // (store cell, graph node) awaiting arcs
  auto visit = [&](NodeId n) {
    n = deref(n);
    auto [it, fresh] = map.try_emplace(n, 0);
    if (fresh) {
      it->second = g.add(cells_[n].type);
      pending.emplace_back(n, it->second);
    }
    return it->second;
  };
  out_roots.clear();
  for (NodeId r : roots) {
    out_roots.push_back(visit(r));
    // Depth-first, features in order, so numbering is canonical.
    while (!pending.empty()) {
      auto [cell, node] = pending.back();
      pending.pop_back();
      for (const Arc& a : cells_[cell].arcs) g.set_arc(node, a.feature, visit(a.target));
    }
  }
  return g;
}

}  // namespace tfg
