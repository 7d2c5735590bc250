#include "tfg/grammar.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "lexer.hpp"
#include "tfg/store.hpp"

namespace tfg {

using detail::Lexer;
using detail::Tok;
using detail::Token;

std::vector<NodeId> Clause::roots() const {
  std::vector<NodeId> r(head.args.begin(), head.args.end());
  for (const Atom& b : body) r.insert(r.end(), b.args.begin(), b.args.end());
  return r;
}

void Grammar::add(Clause c) {
  auto check = [&](const Atom& a) {
    auto [it, fresh] = arity_.try_emplace(a.relation, a.arity());
    if (!fresh && it->second != a.arity())
      throw GrammarError(c.where.str() + ": arity conflict for relation '" + a.relation + "': " +
                         std::to_string(it->second) + " vs " + std::to_string(a.arity()));
  };
  // Validate everything before mutating so a failed add leaves the grammar intact.
  auto saved = arity_;
  try {
    check(c.head);
    for (const Atom& b : c.body) check(b);
  } catch (...) {
    arity_ = std::move(saved);
    throw;
  }
  by_relation_[c.head.relation].push_back(clauses_.size());
  clauses_.push_back(std::move(c));
}

std::span<const std::size_t> Grammar::defining(const std::string& relation) const {
  auto it = by_relation_.find(relation);
  if (it == by_relation_.end()) return {};
  return it->second;
}

std::vector<std::size_t> Grammar::facts() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < clauses_.size(); ++i)
    if (clauses_[i].is_fact()) out.push_back(i);
  return out;
}

std::optional<std::size_t> Grammar::arity(const std::string& relation) const {
  auto it = arity_.find(relation);
  if (it == arity_.end()) return std::nullopt;
  return it->second;
}

namespace {

// Recursive-descent reader that builds terms directly into a Store.
class TermReader {
public:
  TermReader(Lexer& lex, const Signature& sig, Store& store) : lex_(lex), sig_(sig), store_(store) {}

  void reset_tags() { tags_.clear(); }

  void term(NodeId target) {
    factor(target);
    while (lex_.is_punct("&")) {
      lex_.next();
      factor(target);
    }
  }

  Atom literal() {
    Token name = lex_.peek();
    Atom a;
    a.relation = lex_.expect_ident("relation name");
    if (lex_.is_punct("(")) {
      lex_.next();
      for (;;) {
        NodeId arg = store_.add(Signature::top);
        term(arg);
        a.args.push_back(arg);
        if (lex_.is_punct(")")) break;
        lex_.expect_punct(",");
      }
      lex_.next();
    }
    return a;
  }

private:
  void narrow(NodeId target, TypeId t, const Token& where) {
    TypeId before = store_.type(target);
    if (!store_.specialize(target, t))
      lex_.fail_at(where, "ill-typed term: '" + sig_.name(t) + "' is incompatible with '" + sig_.name(before) + "'");
  }

  NodeId feature_value(NodeId target, const Token& where) {
    auto f = sig_.find_feature(where.text);
    if (!f) lex_.fail_at(where, "unknown feature '" + where.text + "'");
    TypeId before = store_.type(target);
    auto v = store_.ensure_arc(target, *f);
    if (!v)
      lex_.fail_at(where, "ill-typed term: feature '" + where.text + "' is not appropriate for type '" +
                              sig_.name(before) + "'");
    return *v;
  }

  TypeId type_named(const Token& where) {
    auto t = sig_.find_type(where.text);
    if (!t) lex_.fail_at(where, "unknown type '" + where.text + "'");
    return *t;
  }

  void factor(NodeId target) {
    const Token tok = lex_.peek();
    if (tok.kind == Tok::tag) {
      lex_.next();
      auto [it, fresh] = tags_.try_emplace(tok.text, target);
      if (!fresh && !store_.unify(it->second, target))
        lex_.fail_at(tok, "ill-typed term: tag '#" + tok.text + "' joins incompatible structures");
      return;
    }
    if (tok.kind == Tok::ident) {
      lex_.next();
      if (lex_.is_punct(":")) {
        lex_.next();
        NodeId v = feature_value(target, tok);
        factor(v);
        return;
      }
      narrow(target, type_named(tok), tok);
      return;
    }
    if (lex_.is_punct("(")) {
      lex_.next();
      term(target);
      lex_.expect_punct(")");
      return;
    }
    if (lex_.is_punct("<")) {
      lex_.next();
      list(target, tok);
      return;
    }
    lex_.fail("expected a term but found " + Lexer::describe(tok));
  }

  void list(NodeId target, const Token& where) {
    auto e_list = sig_.find_type("e_list");
    auto ne_list = sig_.find_type("ne_list");
    auto hd = sig_.find_feature("hd");
    auto tl = sig_.find_feature("tl");
    if (!e_list || !ne_list || !hd || !tl)
      lex_.fail_at(where, "list syntax needs types e_list, ne_list and features hd, tl in the signature");
    NodeId cur = target;
    bool first = true;
    while (!lex_.is_punct(">") && !lex_.is_punct("|")) {
      if (!first) lex_.expect_punct(",");
      first = false;
      narrow(cur, *ne_list, where);
      auto head = store_.ensure_arc(cur, *hd);
      auto tail = store_.ensure_arc(cur, *tl);
      if (!head || !tail) lex_.fail_at(where, "ill-typed list cell");
      term(*head);
      cur = *tail;
    }
    if (lex_.is_punct("|")) {
      if (first) lex_.fail("list tail without elements");
      lex_.next();
      term(cur);
    } else {
      narrow(cur, *e_list, where);
    }
    lex_.expect_punct(">");
  }

  Lexer& lex_;
  const Signature& sig_;
  Store& store_;
  std::unordered_map<std::string, NodeId> tags_;
};

Clause read_clause(Lexer& lex, const Signature& sig) {
  Store store(sig);
  TermReader reader(lex, sig, store);
  Clause c;
  c.where = lex.location(lex.peek());
  Atom head = reader.literal();
  std::vector<Atom> body;
  if (lex.is_punct(":=") || lex.is_punct(":-")) {
    lex.next();
    for (;;) {
      body.push_back(reader.literal());
      if (!lex.is_punct(",")) break;
      lex.next();
    }
  }
  lex.expect_punct(".");
  std::vector<NodeId> roots(head.args.begin(), head.args.end());
  for (const Atom& b : body) roots.insert(roots.end(), b.args.begin(), b.args.end());
  std::vector<NodeId> mapped;
  c.graph = store.extract(roots, mapped);
  std::size_t k = 0;
  c.head.relation = head.relation;
  for (std::size_t i = 0; i < head.args.size(); ++i) c.head.args.push_back(mapped[k++]);
  for (const Atom& b : body) {
    Atom nb{b.relation, {}};
    for (std::size_t i = 0; i < b.args.size(); ++i) nb.args.push_back(mapped[k++]);
    c.body.push_back(std::move(nb));
  }
  return c;
}

constexpr detail::LexerOptions kClauseLexing{.hash_tags = true, .percent_comments = true};

}  // namespace

Grammar parse_grammar(std::string_view text, std::shared_ptr<const Signature> sig, std::string_view filename,
                      std::vector<Diagnostic>* diagnostics) {
  Grammar g(sig);
  Lexer lex(text, filename, kClauseLexing);
  while (!lex.at_end()) {
    SourceLocation start = lex.location(lex.peek());
    try {
      g.add(read_clause(lex, *sig));
    } catch (const ParseError& e) {
      if (!diagnostics) throw;
      diagnostics->push_back({e.where(), e.message()});
      lex.skip_statement();
    } catch (const GrammarError& e) {
      if (!diagnostics) throw;
      std::string msg = e.what();
      std::string prefix = start.str() + ": ";
      if (msg.rfind(prefix, 0) == 0) msg = msg.substr(prefix.size());
      diagnostics->push_back({start, msg});
    }
  }
  return g;
}

Literal parse_literal(std::string_view text, const Signature& sig) {
  Lexer lex(text, "<literal>", kClauseLexing);
  Store store(sig);
  TermReader reader(lex, sig, store);
  Atom a = reader.literal();
  if (lex.is_punct(".")) lex.next();
  if (!lex.at_end()) lex.fail("unexpected " + Lexer::describe(lex.peek()) + " after literal");
  Literal l;
  l.graph = store.extract(a.args, l.atom.args);
  l.atom.relation = a.relation;
  return l;
}

FeatureStructure parse_term(std::string_view text, const Signature& sig) {
  Lexer lex(text, "<term>", kClauseLexing);
  Store store(sig);
  TermReader reader(lex, sig, store);
  NodeId root = store.add(Signature::top);
  reader.term(root);
  if (!lex.at_end()) lex.fail("unexpected " + Lexer::describe(lex.peek()) + " after term");
  FeatureStructure fs;
  std::vector<NodeId> mapped;
  fs.graph = store.extract(std::span<const NodeId>(&root, 1), mapped);
  fs.root = mapped[0];
  return fs;
}

std::pair<std::string, std::string> split_combined(std::string_view text) {
  Lexer lex(text, "<combined>", {.hash_tags = false, .percent_comments = false});
  std::size_t end = 0;
  while (lex.is_ident("type")) {
    while (!lex.at_end() && !lex.is_punct(".")) lex.next();
    if (lex.at_end()) break;
    end = lex.peek().offset + 1;
    lex.next();
  }
  std::string sig(text.substr(0, end));
  std::string rest(text);
  for (std::size_t i = 0; i < end; ++i)
    if (rest[i] != '\n') rest[i] = ' ';
  return {std::move(sig), std::move(rest)};
}

FeatureStructure list_to_fs(std::span<const FeatureStructure> items, const Signature& sig) {
  TypeId e_list = sig.type("e_list"), ne_list = sig.type("ne_list");
  FeatId hd = sig.feature("hd"), tl = sig.feature("tl");
  FeatureStructure out;
  out.root = out.graph.add(items.empty() ? e_list : ne_list);
  NodeId cur = out.root;
  for (std::size_t i = 0; i < items.size(); ++i) {
    // Splice the item graph in with offset node ids.
    auto base = static_cast<NodeId>(out.graph.size());
    const Graph& ig = items[i].graph;
    for (NodeId n = 0; n < ig.size(); ++n) out.graph.add(ig.type(n));
    for (NodeId n = 0; n < ig.size(); ++n)
      for (const Arc& a : ig.node(n).arcs) out.graph.set_arc(base + n, a.feature, base + a.target);
    out.graph.set_arc(cur, hd, base + items[i].root);
    NodeId next = out.graph.add(i + 1 == items.size() ? e_list : ne_list);
    out.graph.set_arc(cur, tl, next);
    cur = next;
  }
  return out;
}

std::optional<std::vector<std::string>> fs_to_words(const Signature& sig, const Graph& g, NodeId list) {
  auto e_list = sig.find_type("e_list"), ne_list = sig.find_type("ne_list");
  auto hd = sig.find_feature("hd"), tl = sig.find_feature("tl");
  if (!e_list || !ne_list || !hd || !tl) return std::nullopt;
  std::vector<std::string> words;
  NodeId cur = list;
  for (std::size_t guard = 0; guard <= g.size(); ++guard) {
    TypeId t = g.type(cur);
    if (t == *e_list) return words;
    if (t != *ne_list) return std::nullopt;
    auto h = g.arc(cur, *hd);
    auto next = g.arc(cur, *tl);
    if (!h || !next) return std::nullopt;
    if (!g.node(*h).arcs.empty() || !sig.children(g.type(*h)).empty()) return std::nullopt;
    words.push_back(sig.name(g.type(*h)));
    cur = *next;
  }
  return std::nullopt;
}

Clause normalize_clause(const Clause& c, const ParseTypeSpec& spec) {
  Clause out = c;
  std::stable_partition(out.body.begin(), out.body.end(),
                        [&](const Atom& a) { return is_parse_type_literal(c.graph, a, spec); });
  return out;
}

namespace {
void write_atom(std::string& out, TermWriter& w, const Atom& a) {
  out += a.relation;
  if (a.args.empty()) return;
  out += "(";
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) out += ", ";
    out += w.write(a.args[i]);
  }
  out += ")";
}
}  // namespace

std::vector<std::string> atom_strings(const Signature& sig, const Graph& g, std::span<const Atom> atoms) {
  std::vector<NodeId> roots;
  for (const Atom& a : atoms) roots.insert(roots.end(), a.args.begin(), a.args.end());
  TermWriter w(sig, g, roots);
  std::vector<std::string> out(atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) write_atom(out[i], w, atoms[i]);
  return out;
}

std::string write_atoms(const Signature& sig, const Graph& g, std::span<const Atom> atoms) {
  std::string out;
  for (const std::string& a : atom_strings(sig, g, atoms)) out += (out.empty() ? "" : ", ") + a;
  return out;
}

std::string to_string(const Signature& sig, const Clause& c) {
  auto roots = c.roots();
  TermWriter w(sig, c.graph, roots);
  std::string out;
  write_atom(out, w, c.head);
  if (!c.body.empty()) {
    out += " :=";
    for (std::size_t i = 0; i < c.body.size(); ++i) {
      out += i ? ",\n    " : "\n    ";
      write_atom(out, w, c.body[i]);
    }
  }
  out += ".";
  return out;
}

std::string to_string(const Signature& sig, const Literal& l) {
  return write_atoms(sig, l.graph, std::span<const Atom>(&l.atom, 1));
}

std::string to_dsl(const Grammar& g) {
  std::string out;
  for (const Clause& c : g.clauses()) {
    out += to_string(g.signature(), c);
    out += "\n";
  }
  return out;
}

Graph compact(const Graph& g, std::span<Atom* const> atoms) {
  // Signature only matters for unification, which extraction never does.
  static const Signature empty_sig;
  Store store(empty_sig);
  NodeId base = store.import(g);
  std::vector<NodeId> roots;
  for (Atom* a : atoms)
    for (NodeId n : a->args) roots.push_back(base + n);
  std::vector<NodeId> mapped;
  Graph out = store.extract(roots, mapped);
  std::size_t k = 0;
  for (Atom* a : atoms)
    for (NodeId& n : a->args) n = mapped[k++];
  return out;
}

}  // namespace tfg
