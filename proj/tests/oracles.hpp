#pragma once

// Test-only reference implementations. Each one follows a definition directly
// (closure by brute force, equivalence classes, path sets) and shares no code
// with the library routine it is compared against.

#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "tfg/feature_structure.hpp"
#include "tfg/grammar.hpp"
#include "tfg/signature.hpp"

namespace oracle {

/// Signature reread with a line-by-line regex reader.
struct RawSignature {
  std::set<std::string> types;                              // including top
  std::map<std::string, std::set<std::string>> parents;     // immediate
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> intro;

  static RawSignature read(const std::string& text);

  /// Reflexive-transitive "a is below b".
  std::map<std::pair<std::string, std::string>, bool> closure() const;
  /// Greatest lower bound found by scanning all types.
  std::optional<std::string> glb(const std::string& a, const std::string& b) const;

private:
  mutable std::optional<std::map<std::pair<std::string, std::string>, bool>> closure_cache_;
};

/// Unification by equivalence classes over the disjoint union of both inputs,
/// then type propagation to a fixpoint. Returns nullopt on failure.
std::optional<tfg::FeatureStructure> unify(const tfg::Signature& sig, const tfg::FeatureStructure& a,
                                           const tfg::FeatureStructure& b);

/// Path-set definition of subsumption on acyclic structures.
bool subsumes(const tfg::Signature& sig, const tfg::FeatureStructure& general, const tfg::FeatureStructure& specific);

/// Map-enumeration definition of subsumption: tries every assignment of
/// general nodes to specific nodes. Only for tiny graphs (specific must be
/// total for the features general uses).
bool subsumes_by_enumeration(const tfg::Signature& sig, const tfg::FeatureStructure& general,
                             const tfg::FeatureStructure& specific);

/// Random acyclic well-typed structure with at most `max_nodes` nodes.
tfg::FeatureStructure random_structure(const tfg::Signature& sig, std::mt19937& rng, std::size_t max_nodes,
                                       std::optional<tfg::TypeId> root_type = std::nullopt);

/// Naive bottom-up evaluation of an untransformed grammar: every round applies
/// every clause to every tuple of known facts. Facts are deduplicated by
/// canonical form (no subsumption); facts larger than `max_nodes` are dropped
/// so recursive relations stay finite. Returns all derived facts.
std::vector<tfg::Literal> naive_fixpoint(const tfg::Grammar& g, std::size_t max_nodes, std::size_t max_rounds);

/// Canonical forms of the goal instances obtained by unifying `goal` with
/// every derived fact of the same relation.
std::set<std::string> naive_answers(const tfg::Grammar& g, const tfg::Literal& goal, std::size_t max_nodes,
                                    std::size_t max_rounds);

}  // namespace oracle
