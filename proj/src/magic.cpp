#include "tfg/magic.hpp"

namespace tfg {

namespace {

constexpr std::string_view kPrefix = "magic_";

bool is_magic(const std::string& relation) { return relation.rfind(kPrefix, 0) == 0; }

Clause compacted(Clause c) {
  std::vector<Atom*> atoms{&c.head};
  for (Atom& b : c.body) atoms.push_back(&b);
  c.graph = compact(c.graph, atoms);
  return c;
}

void require_parse_head(const Clause& c, const ParseTypeSpec& spec) {
  if (!is_parse_type_literal(c.graph, c.head, spec))
    throw GrammarError(c.where.str() + ": head '" + c.head.relation + "' is not a parse-type literal");
}

void fill_flags(const MagicGrammar& mg, CompiledClause& cc) {
  const Clause& c = cc.clause;
  cc.tabled.clear();
  for (const Atom& b : c.body) cc.tabled.push_back(is_magic(b.relation) || mg.bottom_up_goal(c.graph, b));
  cc.initial = false;
  if (cc.origin == Origin::magic_variant) {
    cc.initial = true;
    for (std::size_t i = 1; i < cc.tabled.size(); ++i) cc.initial = cc.initial && !cc.tabled[i];
  }
}

}  // namespace

std::string to_string(MagicMode m) { return m == MagicMode::full ? "full" : "selective"; }

MagicMode parse_magic_mode(std::string_view text) {
  if (text == "selective") return MagicMode::selective;
  if (text == "full") return MagicMode::full;
  throw Error("unknown magic mode '" + std::string(text) + "' (expected selective or full)");
}

std::string magic_name(const std::string& relation) { return std::string(kPrefix) + relation; }

bool MagicGrammar::bottom_up_goal(const Graph& g, const Atom& a) const {
  if (mode == MagicMode::full) return transformed.count(a.relation) > 0;
  return is_parse_type_literal(g, a, spec);
}

Grammar MagicGrammar::compiled() const {
  Grammar out(source.signature_ptr());
  for (const CompiledClause& cc : clauses) out.add(cc.clause);
  return out;
}

Clause magic_variant(const Clause& c, const ParseTypeSpec& spec) {
  require_parse_head(c, spec);
  Clause out = c;
  out.body.insert(out.body.begin(), Atom{magic_name(c.head.relation), c.head.args});
  return out;
}

std::vector<Clause> derive_magic_rules(const Clause& c, const ParseTypeSpec& spec, MagicMode mode) {
  if (mode == MagicMode::selective) require_parse_head(c, spec);
  std::vector<Clause> rules;
  for (std::size_t i = 0; i < c.body.size(); ++i) {
    const Atom& b = c.body[i];
    if (mode == MagicMode::selective && !is_parse_type_literal(c.graph, b, spec)) continue;
    Clause r;
    r.graph = c.graph;
    r.where = c.where;
    r.head = Atom{magic_name(b.relation), b.args};
    r.body.push_back(Atom{magic_name(c.head.relation), c.head.args});
    r.body.insert(r.body.end(), c.body.begin(), c.body.begin() + static_cast<std::ptrdiff_t>(i));
    rules.push_back(compacted(std::move(r)));
  }
  return rules;
}

MagicGrammar transform_grammar(const Grammar& g, const ParseTypeSpec& spec, MagicMode mode) {
  MagicGrammar mg{Grammar(g.signature_ptr()), spec, mode, {}, {}};
  for (const Clause& c : g.clauses()) mg.source.add(normalize_clause(c, spec));

  auto heads_transformed = [&](const Clause& c) {
    return mode == MagicMode::full || is_parse_type_literal(c.graph, c.head, spec);
  };
  if (mode == MagicMode::full) {
    for (const auto& [rel, arity] : g.relations()) mg.transformed.insert(rel);
  } else {
    for (const Clause& c : mg.source.clauses()) {
      if (is_parse_type_literal(c.graph, c.head, spec)) mg.transformed.insert(c.head.relation);
      for (const Atom& b : c.body)
        if (is_parse_type_literal(c.graph, b, spec)) mg.transformed.insert(b.relation);
    }
  }
  for (const std::string& rel : mg.transformed)
    if (g.arity(magic_name(rel)))
      throw GrammarError("magic relation '" + magic_name(rel) + "' collides with a user relation");

  for (std::size_t i = 0; i < mg.source.size(); ++i) {
    const Clause& c = mg.source.clause(i);
    if (!heads_transformed(c)) {
      mg.clauses.push_back({c, Origin::pass_through, i, {}, false});
      continue;
    }
    Clause variant = c;
    variant.body.insert(variant.body.begin(), Atom{magic_name(c.head.relation), c.head.args});
    mg.clauses.push_back({std::move(variant), Origin::magic_variant, i, {}, false});
    for (Clause& r : derive_magic_rules(c, spec, mode)) mg.clauses.push_back({std::move(r), Origin::magic_rule, i, {}, false});
  }
  for (CompiledClause& cc : mg.clauses) fill_flags(mg, cc);
  return mg;
}

MagicGrammar from_compiled(const Grammar& compiled, const ParseTypeSpec& spec, MagicMode mode) {
  MagicGrammar mg{Grammar(compiled.signature_ptr()), spec, mode, {}, {}};
  std::size_t last_source = 0;
  for (const Clause& c : compiled.clauses()) {
    if (is_magic(c.head.relation)) mg.transformed.insert(c.head.relation.substr(kPrefix.size()));
    for (const Atom& b : c.body)
      if (is_magic(b.relation)) mg.transformed.insert(b.relation.substr(kPrefix.size()));
  }
  if (mode == MagicMode::full)
    for (const auto& [rel, arity] : compiled.relations())
      if (!is_magic(rel)) mg.transformed.insert(rel);
  for (const Clause& c : compiled.clauses()) {
    if (is_magic(c.head.relation)) {
      mg.clauses.push_back({c, Origin::magic_rule, last_source, {}, false});
      continue;
    }
    bool variant = !c.body.empty() && c.body[0].relation == magic_name(c.head.relation) && c.body[0].args == c.head.args;
    Clause src = c;
    if (variant) src.body.erase(src.body.begin());
    last_source = mg.source.size();
    mg.source.add(std::move(src));
    mg.clauses.push_back({c, variant ? Origin::magic_variant : Origin::pass_through, last_source, {}, false});
  }
  for (CompiledClause& cc : mg.clauses) fill_flags(mg, cc);
  return mg;
}

Literal make_seed(const Literal& goal, const MagicGrammar& mg) {
  if (!mg.bottom_up_goal(goal.graph, goal.atom))
    throw GrammarError("goal '" + goal.atom.relation + "' is not answered bottom-up");
  Literal seed;
  seed.atom = Atom{magic_name(goal.atom.relation), goal.atom.args};
  std::vector<Atom*> atoms{&seed.atom};
  seed.graph = compact(goal.graph, atoms);
  return seed;
}

}  // namespace tfg
