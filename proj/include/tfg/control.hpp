#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tfg/signature.hpp"

namespace tfg {

/// One condition of a delay pattern: the value at `path` under argument `arg`
/// (0-based) still lacks restricting information. With `type` unset the
/// reference is the most general type appropriate at that position; otherwise
/// it is `type`. The condition holds while the value is absent or its type is
/// equal to or above the reference.
struct DelayCondition {
  std::size_t arg = 0;
  std::vector<FeatId> path;
  std::optional<TypeId> type;
};

/// A goal of `relation`/`arity` is delayed while every condition holds.
/// Several patterns for one relation delay the goal if any of them applies.
struct DelayPattern {
  std::string relation;
  std::size_t arity = 0;
  std::vector<DelayCondition> when;
};

struct IndexKey {
  std::size_t arg = 0;
  std::vector<FeatId> path;
};

/// Control configuration read from a file with `parse_types:`, `delays:` and
/// `index:` sections:
///
///     parse_types:
///       sign
///     delays:
///       delay append/3 when arg1 at root is list and arg3 at root is list.
///     index:
///       index append/3 on arg1 at root.
///
/// Relations without index lines are indexed on the root type of their
/// first argument.
struct Control {
  std::vector<std::string> parse_types;
  std::vector<DelayPattern> delays;
  std::map<std::string, std::vector<IndexKey>> index;

  /// Keys for `relation`, falling back to the default.
  std::vector<IndexKey> keys(const std::string& relation, std::size_t arity) const;
};

/// Throws ParseError on malformed input or unknown types/features.
Control parse_control(std::string_view text, const Signature& sig, std::string_view filename = "<control>");

/// Merges `from` into `into` (later sections extend earlier ones).
void merge(Control& into, const Control& from);

/// `sign, phrase` style list, or the contents of a control file.
std::vector<std::string> split_type_list(std::string_view text);

std::string describe(const Signature& sig, const DelayPattern& p);

}  // namespace tfg
