#include "tfg/feature_structure.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "tfg/store.hpp"

namespace tfg {

void Graph::set_arc(NodeId from, FeatId f, NodeId to) {
  auto& arcs = nodes_.at(from).arcs;
  auto it = std::lower_bound(arcs.begin(), arcs.end(), f,
                             [](const Arc& a, FeatId x) { return index(a.feature) < index(x); });
  if (it != arcs.end() && it->feature == f)
    it->target = to;
  else
    arcs.insert(it, Arc{f, to});
}

std::optional<NodeId> Graph::arc(NodeId from, FeatId f) const {
  for (const Arc& a : nodes_.at(from).arcs)
    if (a.feature == f) return a.target;
  return std::nullopt;
}

std::optional<NodeId> follow(const Graph& g, NodeId from, std::span<const FeatId> path) {
  NodeId n = from;
  for (FeatId f : path) {
    auto next = g.arc(n, f);
    if (!next) return std::nullopt;
    n = *next;
  }
  return n;
}

FeatureStructure mgsat(const Signature& sig, TypeId t) {
  FeatureStructure fs;
  std::vector<TypeId> expanding;
  auto expand = [&](auto& self, TypeId type) -> NodeId {
    NodeId n = fs.graph.add(type);
    expanding.push_back(type);
    for (const Appropriate& a : sig.features(type)) {
      bool recursive = std::find(expanding.begin(), expanding.end(), a.restriction) != expanding.end();
      NodeId v = recursive ? fs.graph.add(a.restriction) : self(self, a.restriction);
      fs.graph.set_arc(n, a.feature, v);
    }
    expanding.pop_back();
    return n;
  };
  fs.root = expand(expand, t);
  return fs;
}

UnificationOutcome unify(const Signature& sig, const FeatureStructure& a, const FeatureStructure& b) {
  UnificationOutcome out;
  Store store(sig);
  NodeId base_a = store.import(a.graph);
  NodeId base_b = store.import(b.graph);
  Clash clash;
  if (!store.unify(base_a + a.root, base_b + b.root, &clash)) {
    out.clash = std::move(clash);
    return out;
  }
  // Extract every input node so the correspondence maps are total.
  std::vector<NodeId> roots{base_a + a.root};
  for (NodeId i = 0; i < a.graph.size(); ++i) roots.push_back(base_a + i);
  for (NodeId i = 0; i < b.graph.size(); ++i) roots.push_back(base_b + i);
  std::vector<NodeId> mapped;
  FeatureStructure fs;
  fs.graph = store.extract(roots, mapped);
  fs.root = mapped[0];
  out.left_map.assign(mapped.begin() + 1, mapped.begin() + 1 + a.graph.size());
  out.right_map.assign(mapped.begin() + 1 + a.graph.size(), mapped.end());
  out.result = std::move(fs);
  return out;
}

namespace {

// Specific-side node in a subsumption check: a real graph node, or the implicit
// value of a feature the specific structure leaves unstated.
struct SpecNode {
  bool is_virtual;
  std::uint32_t id;  // graph node, or index into the virtual table
};

class SubsumptionCheck {
public:
  SubsumptionCheck(const Signature& sig, const Graph& g, const Graph& s) : sig_(sig), g_(g), s_(s) {
    map_.assign(g.size(), kUnmapped);
  }

  bool run(std::span<const NodeId> groots, std::span<const NodeId> sroots) {
    if (groots.size() != sroots.size()) return false;
    for (std::size_t i = 0; i < groots.size(); ++i) work_.push_back({groots[i], encode({false, sroots[i]})});
    while (!work_.empty()) {
      auto [gn, code] = work_.back();
      work_.pop_back();
      if (map_[gn] != kUnmapped) {
        if (map_[gn] != code) return false;
        continue;
      }
      map_[gn] = code;
      SpecNode sn = decode(code);
      TypeId st = type_of(sn);
      if (!sig_.subtype(st, g_.type(gn))) return false;
      for (const Arc& a : g_.node(gn).arcs) {
        auto child = spec_child(sn, st, a.feature);
        if (!child) return false;
        work_.push_back({a.target, *child});
      }
    }
    return true;
  }

private:
  static constexpr std::uint64_t kUnmapped = ~std::uint64_t{0};

  static std::uint64_t encode(SpecNode n) { return (std::uint64_t{n.is_virtual} << 32) | n.id; }
  static SpecNode decode(std::uint64_t c) { return {(c >> 32) != 0, static_cast<std::uint32_t>(c)}; }

  TypeId type_of(SpecNode n) const { return n.is_virtual ? virtual_types_[n.id] : s_.type(n.id); }

  std::optional<std::uint64_t> spec_child(SpecNode n, TypeId type, FeatId f) {
    if (!n.is_virtual)
      if (auto t = s_.arc(n.id, f)) return encode({false, *t});
    auto key = std::make_pair(encode(n), index(f));
    if (auto it = virtual_ids_.find(key); it != virtual_ids_.end()) return it->second;
    auto r = sig_.restriction(type, f);
    if (!r) return std::nullopt;
    auto id = static_cast<std::uint32_t>(virtual_types_.size());
    virtual_types_.push_back(*r);
    std::uint64_t code = encode({true, id});
    virtual_ids_.emplace(key, code);
    return code;
  }

  const Signature& sig_;
  const Graph& g_;
  const Graph& s_;
  std::vector<std::uint64_t> map_;
  std::vector<std::pair<NodeId, std::uint64_t>> work_;
  std::vector<TypeId> virtual_types_;
  std::map<std::pair<std::uint64_t, std::uint32_t>, std::uint64_t> virtual_ids_;
};

}  // namespace

bool subsumes(const Signature& sig, const Graph& general, std::span<const NodeId> general_roots,
              const Graph& specific, std::span<const NodeId> specific_roots) {
  SubsumptionCheck check(sig, general, specific);
  return check.run(general_roots, specific_roots);
}

bool subsumes(const Signature& sig, const FeatureStructure& general, const FeatureStructure& specific) {
  NodeId g = general.root, s = specific.root;
  return subsumes(sig, general.graph, std::span<const NodeId>(&g, 1), specific.graph, std::span<const NodeId>(&s, 1));
}

std::optional<std::string> check_well_typed(const Signature& sig, const Graph& g) {
  for (NodeId n = 0; n < g.size(); ++n) {
    const Node& node = g.node(n);
    if (index(node.type) >= sig.type_count()) return "node " + std::to_string(n) + " has an unknown type";
    for (std::size_t i = 0; i < node.arcs.size(); ++i) {
      const Arc& a = node.arcs[i];
      if (i > 0 && index(node.arcs[i - 1].feature) >= index(a.feature))
        return "node " + std::to_string(n) + " has unsorted or duplicate arcs";
      if (a.target >= g.size()) return "node " + std::to_string(n) + " has a dangling arc";
      auto r = sig.restriction(node.type, a.feature);
      if (!r)
        return "feature '" + sig.name(a.feature) + "' is not appropriate for type '" + sig.name(node.type) + "'";
      if (!sig.subtype(g.type(a.target), *r))
        return "value of '" + sig.name(a.feature) + "' on '" + sig.name(node.type) + "' is '" +
               sig.name(g.type(a.target)) + "', not below '" + sig.name(*r) + "'";
    }
  }
  return std::nullopt;
}

TermWriter::TermWriter(const Signature& sig, const Graph& g, std::span<const NodeId> roots)
    : sig_(sig), g_(g), refs_(g.size(), 0), tag_of_(g.size(), 0) {
  e_list_ = sig.find_type("e_list");
  ne_list_ = sig.find_type("ne_list");
  hd_ = sig.find_feature("hd");
  tl_ = sig.find_feature("tl");
  std::vector<NodeId> stack(roots.begin(), roots.end());
  std::vector<char> seen(g.size(), 0);
  for (NodeId r : roots) ++refs_[r];
  while (!stack.empty()) {
    NodeId n = stack.back();
    stack.pop_back();
    if (seen[n]) continue;
    seen[n] = 1;
    for (const Arc& a : g.node(n).arcs) {
      ++refs_[a.target];
      stack.push_back(a.target);
    }
  }
}

bool TermWriter::informative(NodeId parent, const Arc& a) const {
  NodeId v = a.target;
  if (refs_[v] > 1) return true;
  if (g_.type(v) != *sig_.restriction(g_.type(parent), a.feature)) return true;
  for (const Arc& b : g_.node(v).arcs)
    if (informative(v, b)) return true;
  return false;
}

bool TermWriter::list_sugar(NodeId n) const {
  if (!e_list_ || !ne_list_ || !hd_ || !tl_) return false;
  const Node& node = g_.node(n);
  if (node.type == *e_list_) return node.arcs.empty();
  if (node.type != *ne_list_) return false;
  return std::all_of(node.arcs.begin(), node.arcs.end(),
                     [&](const Arc& a) { return a.feature == *hd_ || a.feature == *tl_; });
}

std::string TermWriter::write(NodeId root) {
  std::string out;
  write_node(out, root, Ctx::top);
  return out;
}

void TermWriter::write_node(std::string& out, NodeId n, Ctx ctx) {
  std::vector<std::string> parts;
  if (refs_[n] > 1) {
    if (tag_of_[n] != 0) {
      out += "#" + std::to_string(tag_of_[n]);
      return;
    }
    tag_of_[n] = next_tag_++;
    parts.push_back("#" + std::to_string(tag_of_[n]));
  }
  const Node& node = g_.node(n);
  if (list_sugar(n)) {
    std::string list = "<";
    NodeId cur = n;
    bool first = true;
    for (;;) {
      const Node& c = g_.node(cur);
      if (c.type == *e_list_) break;
      if (!first) list += ", ";
      first = false;
      if (auto h = g_.arc(cur, *hd_))
        write_node(list, *h, Ctx::nested);
      else
        list += sig_.name(*sig_.restriction(c.type, *hd_));
      auto t = g_.arc(cur, *tl_);
      if (!t) {
        list += " | " + sig_.name(*sig_.restriction(c.type, *tl_));
        break;
      }
      if (refs_[*t] > 1 || !list_sugar(*t)) {
        list += " | ";
        write_node(list, *t, Ctx::nested);
        break;
      }
      cur = *t;
    }
    list += ">";
    parts.push_back(std::move(list));
  } else {
    std::vector<std::string> feats;
    for (const Arc& a : node.arcs) {
      if (!informative(n, a)) continue;
      std::string value;
      write_node(value, a.target, Ctx::nested);
      feats.push_back(sig_.name(a.feature) + ":" + value);
    }
    if (node.type != Signature::top || (parts.empty() && feats.empty())) parts.push_back(sig_.name(node.type));
    for (auto& f : feats) parts.push_back(std::move(f));
  }
  bool paren = ctx == Ctx::nested && parts.size() > 1;
  if (paren) out += "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += " & ";
    out += parts[i];
  }
  if (paren) out += ")";
}

std::string canonical(const Signature& sig, const FeatureStructure& fs) {
  NodeId r = fs.root;
  TermWriter w(sig, fs.graph, std::span<const NodeId>(&r, 1));
  return w.write(fs.root);
}

bool isomorphic(const Signature& sig, const FeatureStructure& a, const FeatureStructure& b) {
  return canonical(sig, a) == canonical(sig, b);
}

}  // namespace tfg
