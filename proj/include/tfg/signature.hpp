#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tfg {

enum class TypeId : std::uint32_t {};
enum class FeatId : std::uint32_t {};

constexpr std::uint32_t index(TypeId t) noexcept { return static_cast<std::uint32_t>(t); }
constexpr std::uint32_t index(FeatId f) noexcept { return static_cast<std::uint32_t>(f); }

/// One appropriateness condition: `feature` is legal on the owning type and its
/// value must be of type `restriction` or below.
struct Appropriate {
  FeatId feature;
  TypeId restriction;
};

/// Finite type hierarchy with appropriateness conditions.
///
/// Immutable once loaded. The most general type is always `top` with id 0.
/// Subtype closure and the meet table are computed eagerly, so `meet` and
/// `subtype` are table lookups.
class Signature {
public:
  static constexpr TypeId top = TypeId{0};

  std::size_t type_count() const noexcept { return type_names_.size(); }
  std::size_t feature_count() const noexcept { return feature_names_.size(); }

  const std::string& name(TypeId t) const { return type_names_.at(index(t)); }
  const std::string& name(FeatId f) const { return feature_names_.at(index(f)); }

  std::optional<TypeId> find_type(std::string_view name) const;
  std::optional<FeatId> find_feature(std::string_view name) const;
  /// Throws Error on unknown names.
  TypeId type(std::string_view name) const;
  FeatId feature(std::string_view name) const;

  /// Greatest lower bound, or nullopt when the types have no common subtype.
  std::optional<TypeId> meet(TypeId a, TypeId b) const {
    auto m = meet_[index(a) * type_count() + index(b)];
    if (m == kNoType) return std::nullopt;
    return TypeId{m};
  }
  /// True iff `a` is equal to or below `b`.
  bool subtype(TypeId a, TypeId b) const { return below_[index(a) * type_count() + index(b)] != 0; }

  std::optional<std::string> meet(std::string_view a, std::string_view b) const;
  bool subtype(std::string_view a, std::string_view b) const;

  std::span<const TypeId> children(TypeId t) const { return children_.at(index(t)); }
  std::span<const TypeId> parents(TypeId t) const { return parents_.at(index(t)); }

  /// Appropriate features of `t` (inherited and own), ordered by feature id.
  std::span<const Appropriate> features(TypeId t) const { return appropriate_.at(index(t)); }
  /// Value restriction of `f` on `t`, or nullopt when `f` is not appropriate for `t`.
  std::optional<TypeId> restriction(TypeId t, FeatId f) const {
    auto r = restriction_[index(t) * feature_count() + index(f)];
    if (r == kNoType) return std::nullopt;
    return TypeId{r};
  }
  /// The unique most general type carrying `f`.
  TypeId introducer(FeatId f) const { return introducer_.at(index(f)); }

private:
  friend class SignatureBuilder;
  static constexpr std::uint32_t kNoType = 0xffffffffu;

  std::vector<std::string> type_names_;
  std::vector<std::string> feature_names_;
  std::unordered_map<std::string, TypeId> type_ids_;
  std::unordered_map<std::string, FeatId> feature_ids_;
  std::vector<std::vector<TypeId>> children_;
  std::vector<std::vector<TypeId>> parents_;
  std::vector<char> below_;
  std::vector<std::uint32_t> meet_;
  std::vector<std::uint32_t> restriction_;
  std::vector<TypeId> introducer_;
  std::vector<std::vector<Appropriate>> appropriate_;
};

/// Parses the line-oriented signature DSL:
///
///     type cat sub [s, np, v].
///     type sign intro [cat:cat, phon:list].
///
/// `#` starts a comment. Types without a declared parent become children of
/// `top`. Throws ParseError on syntax errors and SignatureError on cycles,
/// meet-closure violations, and ambiguous feature introduction.
Signature load_signature(std::string_view text, std::string_view filename = "<signature>");

/// Serializes a signature back to the DSL (one statement per type).
std::string to_dsl(const Signature& sig);

}  // namespace tfg
