#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "tfg/grammar.hpp"
#include "tfg/parse_types.hpp"

namespace tfg {

enum class MagicMode { selective, full };

std::string to_string(MagicMode m);
MagicMode parse_magic_mode(std::string_view text);

/// Name of the magic relation guarding `relation`.
std::string magic_name(const std::string& relation);

enum class Origin { magic_variant, magic_rule, pass_through };

struct CompiledClause {
  Clause clause;
  Origin origin = Origin::pass_through;
  /// Index of the originating clause in the source grammar.
  std::size_t source = 0;
  /// Per body literal: resolved against the table (true) or handed to the
  /// top-down interpreter (false).
  std::vector<bool> tabled;
  /// A magic variant whose body has nothing to table besides its magic
  /// literal. Such clauses are closed once at initialization (with the magic
  /// literal dropped) instead of being triggered by magic facts.
  bool initial = false;
};

/// The transformed grammar plus what the engines need alongside it.
struct MagicGrammar {
  /// Source clauses after normalization; the top-down interpreter resolves against these.
  Grammar source;
  ParseTypeSpec spec;
  MagicMode mode = MagicMode::selective;
  std::vector<CompiledClause> clauses;
  /// Relations that received a magic relation.
  std::set<std::string> transformed;

  /// True when goals of `a` are seeded and answered bottom-up.
  bool bottom_up_goal(const Graph& g, const Atom& a) const;
  /// The compiled clauses as an ordinary grammar.
  Grammar compiled() const;
};

/// Prepends `magic_R(arg)` to the body, sharing the head argument.
/// Throws GrammarError unless the head is a parse-type literal.
Clause magic_variant(const Clause& c, const ParseTypeSpec& spec);

/// Magic rules for a normalized clause: one per parse-type body literal
/// (selective) or per body literal (full). Throws GrammarError in selective
/// mode unless the head is a parse-type literal.
std::vector<Clause> derive_magic_rules(const Clause& c, const ParseTypeSpec& spec, MagicMode mode);

/// Throws GrammarError when a magic relation name collides with a user relation.
MagicGrammar transform_grammar(const Grammar& g, const ParseTypeSpec& spec, MagicMode mode);

/// Rebuilds the engine view from a grammar previously written by `compiled()`.
MagicGrammar from_compiled(const Grammar& compiled, const ParseTypeSpec& spec, MagicMode mode);

/// The seed fact `magic_R(copy of arg)` for a goal that is answered bottom-up.
/// Throws GrammarError for any other goal.
Literal make_seed(const Literal& goal, const MagicGrammar& mg);

}  // namespace tfg
