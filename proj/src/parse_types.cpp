#include "tfg/parse_types.hpp"

#include "tfg/error.hpp"
#include "tfg/grammar.hpp"

namespace tfg {

ParseTypeSpec::ParseTypeSpec(const Signature& sig, std::vector<std::string> declared)
    : declared_(std::move(declared)), closed_(sig.type_count(), false) {
  for (const std::string& name : declared_) {
    auto t = sig.find_type(name);
    if (!t) throw Error("unknown parse type '" + name + "'");
    for (std::uint32_t u = 0; u < sig.type_count(); ++u)
      if (sig.subtype(TypeId{u}, *t)) closed_[u] = true;
  }
}

std::vector<TypeId> ParseTypeSpec::closure() const {
  std::vector<TypeId> out;
  for (std::uint32_t u = 0; u < closed_.size(); ++u)
    if (closed_[u]) out.push_back(TypeId{u});
  return out;
}

bool is_parse_type_literal(const Graph& g, const Atom& lit, const ParseTypeSpec& spec) {
  return lit.arity() == 1 && spec.contains(g.type(lit.args[0]));
}

}  // namespace tfg
