#include "tfg/bottomup.hpp"

#include <algorithm>

namespace tfg {

namespace {

std::vector<NodeId> fact_roots(const Edge& e) { return e.fact.args; }

std::vector<NodeId> all_roots(const Edge& e) {
  std::vector<NodeId> r = e.fact.args;
  for (const Atom& d : e.delayed) r.insert(r.end(), d.args.begin(), d.args.end());
  return r;
}

Atom offset(const Atom& a, NodeId base) {
  Atom out{a.relation, a.args};
  for (NodeId& n : out.args) n += base;
  return out;
}

/// Copies `head` and `delayed` out of the store into a fresh edge.
Edge extract_edge(const Store& store, const Atom& head, const std::vector<Atom>& delayed) {
  std::vector<NodeId> roots = head.args;
  for (const Atom& d : delayed) roots.insert(roots.end(), d.args.begin(), d.args.end());
  std::vector<NodeId> mapped;
  Edge e;
  e.graph = store.extract(roots, mapped);
  std::size_t k = 0;
  e.fact.relation = head.relation;
  for (std::size_t i = 0; i < head.arity(); ++i) e.fact.args.push_back(mapped[k++]);
  for (const Atom& d : delayed) {
    Atom a{d.relation, {}};
    for (std::size_t i = 0; i < d.arity(); ++i) a.args.push_back(mapped[k++]);
    e.delayed.push_back(std::move(a));
  }
  return e;
}

bool unify_args(Store& store, const Atom& a, const Atom& b, NodeId b_base) {
  if (a.arity() != b.arity()) return false;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (!store.unify(a.args[i], b_base + b.args[i])) return false;
  return true;
}

std::vector<Literal> most_general(const Signature& sig, std::vector<Literal> in) {
  std::vector<Literal> out;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (!seen.insert(to_string(sig, in[i])).second) continue;
    bool covered = false;
    for (std::size_t j = 0; j < in.size() && !covered; ++j) {
      if (i == j) continue;
      bool ji = subsumes(sig, in[j].graph, in[j].atom.args, in[i].graph, in[i].atom.args);
      bool ij = subsumes(sig, in[i].graph, in[i].atom.args, in[j].graph, in[j].atom.args);
      covered = ji && !ij;
    }
    if (!covered) out.push_back(std::move(in[i]));
  }
  return out;
}

}  // namespace

std::string to_string(const Signature& sig, const Edge& e) {
  std::vector<Atom> atoms{e.fact};
  atoms.insert(atoms.end(), e.delayed.begin(), e.delayed.end());
  auto parts = atom_strings(sig, e.graph, atoms);
  std::string out = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) out += (i == 1 ? " | " : ", ") + parts[i];
  return out;
}

bool prunes(const Signature& sig, const Edge& a, const Edge& b) {
  if (a.fact.relation != b.fact.relation || a.fact.arity() != b.fact.arity()) return false;
  if (!subsumes(sig, a.graph, fact_roots(a), b.graph, fact_roots(b))) return false;
  if (a.delayed.empty()) return true;
  if (a.delayed.size() != b.delayed.size()) return false;
  for (std::size_t i = 0; i < a.delayed.size(); ++i)
    if (a.delayed[i].relation != b.delayed[i].relation || a.delayed[i].arity() != b.delayed[i].arity()) return false;
  return subsumes(sig, a.graph, all_roots(a), b.graph, all_roots(b));
}

std::size_t Table::add(Edge e) {
  std::size_t id = edges_.size();
  e.id = id;
  by_relation_[e.fact.relation].push_back(id);
  edges_.push_back(std::move(e));
  alive_.push_back(true);
  processed_.push_back(false);
  ++live_;
  return id;
}

std::vector<std::size_t> Table::live() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < edges_.size(); ++i)
    if (alive_[i]) out.push_back(i);
  return out;
}

const std::vector<std::size_t>& Table::with_relation(const std::string& relation) const {
  static const std::vector<std::size_t> none;
  auto it = by_relation_.find(relation);
  return it == by_relation_.end() ? none : it->second;
}

AgendaOrder parse_agenda_order(std::string_view text) {
  if (text == "fifo") return AgendaOrder::fifo;
  if (text == "lifo") return AgendaOrder::lifo;
  throw Error("unknown agenda order '" + std::string(text) + "' (expected fifo or lifo)");
}

std::size_t Agenda::pop() {
  std::size_t id;
  if (order_ == AgendaOrder::fifo) {
    id = q_.front();
    q_.pop_front();
  } else {
    id = q_.back();
    q_.pop_back();
  }
  return id;
}

std::vector<std::string> answer_strings(const Signature& sig, const ParseResult& r) {
  std::vector<std::string> out;
  for (const Literal& a : r.answers) out.push_back(to_string(sig, a));
  std::sort(out.begin(), out.end());
  return out;
}

BottomUpEngine::BottomUpEngine(const MagicGrammar& mg, Control control, BottomUpOptions opts)
    : mg_(&mg),
      sig_(&mg.source.signature()),
      opts_(std::move(opts)),
      td_(mg.source, std::move(control), opts_.topdown),
      agenda_(opts_.agenda) {
  phon_enabled_ = !opts_.phon_path.empty();
  for (const std::string& f : opts_.phon_path) {
    auto id = sig_->find_feature(f);
    if (!id) {
      phon_enabled_ = false;
      break;
    }
    phon_.push_back(*id);
  }
}

void BottomUpEngine::emit(const std::string& event, const std::string& detail) const {
  if (opts_.trace) opts_.trace(event + "\t" + detail);
}

bool BottomUpEngine::contiguous(const std::vector<std::string>& words, const std::vector<std::string>& input) {
  if (words.empty()) return true;
  return std::search(input.begin(), input.end(), words.begin(), words.end()) != input.end();
}

bool BottomUpEngine::admitted(const Edge& e, const std::vector<std::string>& phon) const {
  if (!phon_enabled_) return true;
  for (NodeId arg : e.fact.args) {
    auto n = follow(e.graph, arg, phon_);
    if (!n) continue;
    auto words = fs_to_words(*sig_, e.graph, *n);
    if (words && !contiguous(*words, phon)) return false;
  }
  return true;
}

void BottomUpEngine::initialize(const Literal& goal, const std::vector<std::string>& phon) {
  Literal seed = make_seed(goal, *mg_);
  Edge s;
  s.graph = std::move(seed.graph);
  s.fact = std::move(seed.atom);
  emit("SEED", to_string(*sig_, s));
  std::vector<Edge> init{std::move(s)};

  for (std::size_t ci = 0; ci < mg_->clauses.size(); ++ci) {
    const CompiledClause& cc = mg_->clauses[ci];
    const bool unguarded_fact = cc.origin == Origin::pass_through && cc.clause.is_fact();
    if (!cc.initial && !unguarded_fact) continue;
    const Clause& c = cc.clause;
    Store store(*sig_);
    NodeId base = store.import(c.graph);
    std::vector<Atom> goals;
    for (std::size_t i = cc.initial ? 1 : 0; i < c.body.size(); ++i) goals.push_back(offset(c.body[i], base));
    ++stats_.reductions;
    reduced_.insert({ci, {}});
    std::vector<Edge> found;
    td_.solve(store, goals, {}, [&](Store& st, const std::vector<Atom>& delayed) {
      found.push_back(extract_edge(st, offset(c.head, base), delayed));
      return true;
    });
    for (Edge& e : found) {
      ++stats_.derived;
      std::string text = to_string(*sig_, e);
      if (admitted(e, phon)) {
        emit("INIT-FACT", "clause=" + std::to_string(ci) + "\t" + text);
        init.push_back(std::move(e));
      } else {
        ++stats_.excluded;
        emit("EXCLUDE", "clause=" + std::to_string(ci) + "\t" + text);
      }
    }
  }
  store(std::move(init));
}

void BottomUpEngine::run_fixpoint() {
  while (!agenda_.empty()) {
    std::size_t id = agenda_.pop();
    if (!table_.alive(id)) continue;
    if (++stats_.pops > opts_.max_steps) throw ResourceLimitError(ResourceLimitError::Kind::steps, opts_.max_steps);
    table_.mark_processed(id);
    Edge e = table_.edge(id);
    emit("POP", "edge=" + std::to_string(id) + "\t" + to_string(*sig_, e));
    store(match(e));
  }
  stats_.topdown = td_.stats();
}

std::vector<Edge> BottomUpEngine::match(const Edge& edge) {
  ++stats_.matches;
  std::vector<Edge> out;
  for (std::size_t ci = 0; ci < mg_->clauses.size(); ++ci) {
    const CompiledClause& cc = mg_->clauses[ci];
    if (cc.initial) continue;
    const Clause& c = cc.clause;
    for (std::size_t i = 0; i < c.body.size(); ++i) {
      if (!cc.tabled[i] || c.body[i].relation != edge.fact.relation || c.body[i].arity() != edge.fact.arity()) continue;
      Store store(*sig_);
      NodeId base = store.import(c.graph);
      NodeId eb = store.import(edge.graph);
      if (!unify_args(store, offset(c.body[i], base), edge.fact, eb)) continue;
      std::vector<Atom> delayed;
      for (const Atom& d : edge.delayed) delayed.push_back(offset(d, eb));
      std::vector<std::size_t> premises(c.body.size(), edge.id);
      collect_edges(store, ci, base, 0, i, edge, premises, delayed, out);
    }
  }
  return out;
}

void BottomUpEngine::collect_edges(Store& store, std::size_t ci, NodeId base, std::size_t pos, std::size_t trigger,
                                   const Edge& new_edge, std::vector<std::size_t>& premises, std::vector<Atom>& delayed,
                                   std::vector<Edge>& out) {
  const CompiledClause& cc = mg_->clauses[ci];
  const Clause& c = cc.clause;
  while (pos < c.body.size() && (pos == trigger || !cc.tabled[pos])) ++pos;
  if (pos == c.body.size()) {
    finish(store, ci, base, premises, delayed, out);
    return;
  }
  const Atom lit = offset(c.body[pos], base);
  const std::vector<std::size_t> candidates = table_.with_relation(lit.relation);
  for (std::size_t id : candidates) {
    if (!table_.alive(id) || !table_.processed(id)) continue;
    // Semi-naive: the new edge fills positions from `trigger` on, never before it.
    if (pos < trigger && id == new_edge.id) continue;
    const Edge& e = table_.edge(id);
    auto mark = store.mark();
    NodeId eb = store.import(e.graph);
    if (unify_args(store, lit, e.fact, eb)) {
      std::size_t held = delayed.size();
      for (const Atom& d : e.delayed) delayed.push_back(offset(d, eb));
      premises[pos] = id;
      collect_edges(store, ci, base, pos + 1, trigger, new_edge, premises, delayed, out);
      delayed.resize(held);
    }
    store.undo(mark);
  }
}

void BottomUpEngine::finish(Store& store, std::size_t ci, NodeId base, const std::vector<std::size_t>& premises,
                            const std::vector<Atom>& delayed, std::vector<Edge>& out) {
  const CompiledClause& cc = mg_->clauses[ci];
  const Clause& c = cc.clause;
  std::vector<std::size_t> used;
  std::vector<Atom> goals;
  for (std::size_t j = 0; j < c.body.size(); ++j) {
    if (cc.tabled[j])
      used.push_back(premises[j]);
    else
      goals.push_back(offset(c.body[j], base));
  }
  ++stats_.reductions;
  std::vector<std::size_t> multiset = used;
  std::sort(multiset.begin(), multiset.end());
  if (!reduced_.insert({ci, multiset}).second) ++stats_.repeated_reductions;

  std::string from;
  for (std::size_t k = 0; k < used.size(); ++k) from += (k ? "," : "") + std::to_string(used[k]);
  const Atom head = offset(c.head, base);
  td_.solve(store, goals, delayed, [&](Store& st, const std::vector<Atom>& residue) {
    Edge e = extract_edge(st, head, residue);
    ++stats_.derived;
    emit("DERIVE", "clause=" + std::to_string(ci) + "\tfrom=" + from + "\t" + to_string(*sig_, e));
    out.push_back(std::move(e));
    return true;
  });
}

std::vector<std::size_t> BottomUpEngine::store(std::vector<Edge> edges) {
  std::vector<std::size_t> kept;
  for (Edge& n : edges) {
    const std::vector<std::size_t> same = table_.with_relation(n.fact.relation);
    std::optional<std::size_t> by;
    for (std::size_t id : same)
      if (table_.alive(id) && prunes(*sig_, table_.edge(id), n)) {
        by = id;
        break;
      }
    if (by) {
      ++stats_.pruned;
      emit("PRUNE", "subsumed-by=" + std::to_string(*by) + "\t" + to_string(*sig_, n));
      continue;
    }
    for (std::size_t id : same)
      if (table_.alive(id) && prunes(*sig_, n, table_.edge(id))) {
        table_.evict(id);
        ++stats_.evicted;
        emit("EVICT", "edge=" + std::to_string(id));
      }
    if (table_.stored() >= opts_.max_edges) throw ResourceLimitError(ResourceLimitError::Kind::edges, opts_.max_edges);
    std::string text = to_string(*sig_, n);
    std::size_t id = table_.add(std::move(n));
    ++stats_.stored;
    emit("STORE", "edge=" + std::to_string(id) + "\t" + text);
    agenda_.push(id);
    kept.push_back(id);
    if (opts_.check_table) check_table();
  }
  return kept;
}

void BottomUpEngine::check_table() {
  auto live = table_.live();
  for (std::size_t a : live)
    for (std::size_t b : live)
      if (a != b && prunes(*sig_, table_.edge(a), table_.edge(b))) ++stats_.table_violations;
}

ParseResult BottomUpEngine::collect(const Literal& goal) const {
  ParseResult r;
  std::vector<Literal> answers;
  for (std::size_t id : table_.with_relation(goal.atom.relation)) {
    if (!table_.alive(id)) continue;
    const Edge& e = table_.edge(id);
    Store store(*sig_);
    NodeId gb = store.import(goal.graph);
    NodeId eb = store.import(e.graph);
    if (!unify_args(store, offset(goal.atom, gb), e.fact, eb)) continue;
    if (!e.delayed.empty()) {
      r.floundered.push_back(e);
      continue;
    }
    Edge inst = extract_edge(store, offset(goal.atom, gb), {});
    answers.push_back(Literal{std::move(inst.graph), std::move(inst.fact)});
  }
  r.answers = most_general(*sig_, std::move(answers));
  r.stats = stats_;
  return r;
}

ParseResult BottomUpEngine::parse(const Literal& goal, const std::vector<std::string>& phon) {
  initialize(goal, phon);
  run_fixpoint();
  return collect(goal);
}

ParseResult solve_topdown(const Grammar& g, const Control& control, const Literal& goal, TopDownOptions opts) {
  const Signature& sig = g.signature();
  TopDownEngine td(g, control, opts);
  Store store(sig);
  NodeId base = store.import(goal.graph);
  const Atom root = offset(goal.atom, base);
  ParseResult r;
  std::vector<Literal> answers;
  td.solve(store, {root}, {}, [&](Store& st, const std::vector<Atom>& residue) {
    Edge e = extract_edge(st, root, residue);
    if (residue.empty())
      answers.push_back(Literal{std::move(e.graph), std::move(e.fact)});
    else
      r.floundered.push_back(std::move(e));
    return true;
  });
  r.answers = most_general(sig, std::move(answers));
  r.stats.topdown = td.stats();
  return r;
}

}  // namespace tfg
