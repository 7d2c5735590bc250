#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tfg/error.hpp"
#include "tfg/feature_structure.hpp"
#include "tfg/parse_types.hpp"
#include "tfg/signature.hpp"

namespace tfg {

/// A relational literal whose arguments are roots in some enclosing graph
/// (a clause, an edge, or a resolution store).
struct Atom {
  std::string relation;
  std::vector<NodeId> args;

  std::size_t arity() const noexcept { return args.size(); }
};

/// A literal that owns its graph.
struct Literal {
  Graph graph;
  Atom atom;
};

/// Head literal and ordered body over one shared graph.
struct Clause {
  Graph graph;
  Atom head;
  std::vector<Atom> body;
  SourceLocation where;

  bool is_fact() const noexcept { return body.empty(); }
  /// All argument roots: head first, then body literals in order.
  std::vector<NodeId> roots() const;
};

struct Diagnostic {
  SourceLocation where;
  std::string message;
};

class Grammar {
public:
  explicit Grammar(std::shared_ptr<const Signature> sig) : sig_(std::move(sig)) {}

  const Signature& signature() const noexcept { return *sig_; }
  const std::shared_ptr<const Signature>& signature_ptr() const noexcept { return sig_; }

  /// Appends a clause; throws GrammarError on an arity conflict.
  void add(Clause c);

  const std::vector<Clause>& clauses() const noexcept { return clauses_; }
  const Clause& clause(std::size_t i) const { return clauses_.at(i); }
  std::size_t size() const noexcept { return clauses_.size(); }

  /// Indices of the clauses defining `relation`, in grammar order.
  std::span<const std::size_t> defining(const std::string& relation) const;
  std::vector<std::size_t> facts() const;
  std::optional<std::size_t> arity(const std::string& relation) const;
  const std::map<std::string, std::size_t>& relations() const noexcept { return arity_; }

private:
  std::shared_ptr<const Signature> sig_;
  std::vector<Clause> clauses_;
  std::map<std::string, std::vector<std::size_t>> by_relation_;
  std::map<std::string, std::size_t> arity_;
};

/// Parses the clause DSL:
///
///     constituent(sign & cat:s & phon:#1 & sem:#5) :=
///         constituent(cat:np & phon:#2 & agr:#4 & sem:#6),
///         constituent(cat:v & phon:#3 & agr:#4 & sem:(#5 & subj:#6)),
///         append(#2, #3, #1).
///
/// Terms conjoin `Type`, `feat:Value`, `#Tag`, and `<a, b | Rest>` lists with
/// `&`; a feature value is a single factor, so conjunctions there need
/// parentheses. `%` (or `#` followed by a space) starts a comment. `:-` is
/// accepted for `:=`. Equations are eliminated while parsing: tags and
/// feature paths are unified in place.
///
/// When `diagnostics` is given, errors are collected per clause and parsing
/// continues; otherwise the first error is thrown.
Grammar parse_grammar(std::string_view text, std::shared_ptr<const Signature> sig,
                      std::string_view filename = "<grammar>", std::vector<Diagnostic>* diagnostics = nullptr);

/// A single literal, with optional trailing '.'.
Literal parse_literal(std::string_view text, const Signature& sig);
/// A single term.
FeatureStructure parse_term(std::string_view text, const Signature& sig);

/// Splits a combined file into its signature part (leading `type`
/// statements) and clause part. The clause part keeps its line numbers.
std::pair<std::string, std::string> split_combined(std::string_view text);

/// Builds `<items...>` as e_list / ne_list[hd, tl] cells.
FeatureStructure list_to_fs(std::span<const FeatureStructure> items, const Signature& sig);
/// Inverse of list_to_fs on closed lists of bare atoms; nullopt otherwise.
std::optional<std::vector<std::string>> fs_to_words(const Signature& sig, const Graph& g, NodeId list);

/// Stable reordering putting parse-type body literals first. The head is unchanged.
Clause normalize_clause(const Clause& c, const ParseTypeSpec& spec);

std::string to_string(const Signature& sig, const Clause& c);
std::string to_string(const Signature& sig, const Literal& l);
/// Writes atoms over one graph with shared tag numbering, separated by ", ".
std::string write_atoms(const Signature& sig, const Graph& g, std::span<const Atom> atoms);
/// Same, one string per atom.
std::vector<std::string> atom_strings(const Signature& sig, const Graph& g, std::span<const Atom> atoms);
std::string to_dsl(const Grammar& g);

/// Copies the subgraph reachable from the atoms' arguments into a fresh
/// graph and rewrites the atoms to point into it.
Graph compact(const Graph& g, std::span<Atom* const> atoms);

}  // namespace tfg
