#pragma once

#include <string>
#include <vector>

#include "tfg/feature_structure.hpp"
#include "tfg/signature.hpp"

namespace tfg {

struct Atom;

/// User-declared parse types, closed under subtypes.
class ParseTypeSpec {
public:
  ParseTypeSpec() = default;
  /// Throws Error on an unknown type name.
  ParseTypeSpec(const Signature& sig, std::vector<std::string> declared);

  const std::vector<std::string>& declared() const noexcept { return declared_; }
  bool contains(TypeId t) const { return index(t) < closed_.size() && closed_[index(t)]; }
  /// The closed set, by type id.
  std::vector<TypeId> closure() const;

private:
  std::vector<std::string> declared_;
  std::vector<bool> closed_;
};

/// A literal is a parse-type literal when it has exactly one argument whose
/// root type lies in the closed parse-type set.
bool is_parse_type_literal(const Graph& g, const Atom& lit, const ParseTypeSpec& spec);

}  // namespace tfg
