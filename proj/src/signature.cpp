#include "tfg/signature.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "lexer.hpp"
#include "tfg/error.hpp"

namespace tfg {

using detail::Token;

std::string SourceLocation::str() const {
  std::ostringstream os;
  os << (file.empty() ? "<input>" : file) << ':' << line << ':' << column;
  return os.str();
}

ParseError::ParseError(SourceLocation where, const std::string& message)
    : Error(where.str() + ": " + message), where_(std::move(where)), message_(message) {}

namespace {
std::string limit_message(ResourceLimitError::Kind kind, std::size_t limit) {
  const char* what = kind == ResourceLimitError::Kind::edges   ? "edge"
                     : kind == ResourceLimitError::Kind::steps ? "step"
                                                               : "depth";
  return std::string("resource limit exceeded: ") + what + " cap " + std::to_string(limit);
}
}  // namespace

ResourceLimitError::ResourceLimitError(Kind kind, std::size_t limit)
    : Error(limit_message(kind, limit)), kind_(kind), limit_(limit) {}

std::optional<TypeId> Signature::find_type(std::string_view name) const {
  auto it = type_ids_.find(std::string(name));
  if (it == type_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<FeatId> Signature::find_feature(std::string_view name) const {
  auto it = feature_ids_.find(std::string(name));
  if (it == feature_ids_.end()) return std::nullopt;
  return it->second;
}

TypeId Signature::type(std::string_view name) const {
  if (auto t = find_type(name)) return *t;
  throw Error("unknown type '" + std::string(name) + "'");
}

FeatId Signature::feature(std::string_view name) const {
  if (auto f = find_feature(name)) return *f;
  throw Error("unknown feature '" + std::string(name) + "'");
}

std::optional<std::string> Signature::meet(std::string_view a, std::string_view b) const {
  auto m = meet(type(a), type(b));
  if (!m) return std::nullopt;
  return name(*m);
}

bool Signature::subtype(std::string_view a, std::string_view b) const { return subtype(type(a), type(b)); }

class SignatureBuilder {
public:
  struct Decl {
    std::string feature;
    std::string restriction;
    Token where;
  };

  Signature sig;
  std::vector<std::vector<Decl>> declared;  // per type
  std::vector<Token> first_mention;

  TypeId intern(const std::string& name, const Token& where) {
    if (auto it = sig.type_ids_.find(name); it != sig.type_ids_.end()) return it->second;
    TypeId id{static_cast<std::uint32_t>(sig.type_names_.size())};
    sig.type_names_.push_back(name);
    sig.type_ids_.emplace(name, id);
    sig.children_.emplace_back();
    sig.parents_.emplace_back();
    declared.emplace_back();
    first_mention.push_back(where);
    return id;
  }

  void add_child(TypeId parent, TypeId child) {
    auto& kids = sig.children_[index(parent)];
    if (std::find(kids.begin(), kids.end(), child) != kids.end()) return;
    kids.push_back(child);
    sig.parents_[index(child)].push_back(parent);
  }

  void finish(const detail::Lexer& lex) {
    const std::size_t n = sig.type_names_.size();
    for (std::size_t t = 1; t < n; ++t)
      if (sig.parents_[t].empty()) add_child(Signature::top, TypeId{static_cast<std::uint32_t>(t)});

    check_acyclic();
    compute_closure();
    compute_meets();
    compute_features(lex);
  }

private:
  void check_acyclic() {
    const std::size_t n = sig.type_names_.size();
    std::vector<int> state(n, 0);
    std::vector<std::string> stack;
    std::function<void(std::size_t)> visit = [&](std::size_t t) {
      state[t] = 1;
      stack.push_back(sig.type_names_[t]);
      for (TypeId c : sig.children_[t]) {
        if (state[index(c)] == 1) {
          std::string cycle;
          auto from = std::find(stack.begin(), stack.end(), sig.type_names_[index(c)]);
          for (auto it = from; it != stack.end(); ++it) cycle += *it + " > ";
          cycle += sig.type_names_[index(c)];
          throw SignatureError("cycle in type hierarchy: " + cycle);
        }
        if (state[index(c)] == 0) visit(index(c));
      }
      stack.pop_back();
      state[t] = 2;
    };
    for (std::size_t t = 0; t < n; ++t)
      if (state[t] == 0) visit(t);
  }

  void compute_closure() {
    const std::size_t n = sig.type_names_.size();
    sig.below_.assign(n * n, 0);
    for (std::size_t t = 0; t < n; ++t) {
      std::vector<std::size_t> work{t};
      while (!work.empty()) {
        std::size_t u = work.back();
        work.pop_back();
        if (sig.below_[t * n + u]) continue;
        sig.below_[t * n + u] = 1;
        for (TypeId p : sig.parents_[u]) work.push_back(index(p));
      }
    }
  }

  void compute_meets() {
    const std::size_t n = sig.type_names_.size();
    sig.meet_.assign(n * n, Signature::kNoType);
    std::vector<std::size_t> lower;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a; b < n; ++b) {
        lower.clear();
        for (std::size_t u = 0; u < n; ++u)
          if (sig.below_[u * n + a] && sig.below_[u * n + b]) lower.push_back(u);
        if (lower.empty()) continue;
        std::uint32_t glb = Signature::kNoType;
        for (std::size_t g : lower) {
          bool greatest = std::all_of(lower.begin(), lower.end(),
                                      [&](std::size_t u) { return sig.below_[u * n + g] != 0; });
          if (greatest) {
            glb = static_cast<std::uint32_t>(g);
            break;
          }
        }
        if (glb == Signature::kNoType)
          throw SignatureError("meet-closure violation: types '" + sig.type_names_[a] + "' and '" +
                               sig.type_names_[b] + "' have no unique greatest common subtype");
        sig.meet_[a * n + b] = glb;
        sig.meet_[b * n + a] = glb;
      }
    }
  }

  void compute_features(const detail::Lexer& lex) {
    const std::size_t n = sig.type_names_.size();
    // Feature ids follow first declaration order.
    std::map<FeatId, std::vector<std::pair<std::size_t, const Decl*>>> decls;
    for (std::size_t t = 0; t < n; ++t) {
      for (const Decl& d : declared[t]) {
        auto it = sig.feature_ids_.find(d.feature);
        if (it == sig.feature_ids_.end()) {
          FeatId f{static_cast<std::uint32_t>(sig.feature_names_.size())};
          sig.feature_names_.push_back(d.feature);
          it = sig.feature_ids_.emplace(d.feature, f).first;
        }
        decls[it->second].emplace_back(t, &d);
      }
    }
    const std::size_t nf = sig.feature_names_.size();
    sig.restriction_.assign(n * nf, Signature::kNoType);
    sig.introducer_.assign(nf, Signature::top);
    sig.appropriate_.assign(n, {});

    for (auto& [f, sites] : decls) {
      std::optional<std::size_t> most_general;
      for (const auto& site : sites) {
        const std::size_t cand = site.first;
        bool covers = std::all_of(sites.begin(), sites.end(),
                                  [&](const auto& s) { return sig.below_[s.first * n + cand] != 0; });
        if (covers) {
          most_general = cand;
          break;
        }
      }
      if (!most_general) {
        std::size_t a = sites.front().first, b = a;
        for (auto& [t, d] : sites)
          if (!sig.below_[t * n + a] && !sig.below_[a * n + t]) b = t;
        throw SignatureError("feature '" + sig.feature_names_[index(f)] + "' introduced at incomparable types '" +
                             sig.type_names_[a] + "' and '" + sig.type_names_[b] + "'");
      }
      const std::size_t intro = *most_general;
      sig.introducer_[index(f)] = TypeId{static_cast<std::uint32_t>(intro)};
      for (std::size_t t = 0; t < n; ++t) {
        if (!sig.below_[t * n + intro]) continue;
        std::optional<TypeId> r;
        for (auto& [site, d] : sites) {
          if (!sig.below_[t * n + site]) continue;
          auto rt = sig.find_type(d->restriction);
          if (!rt) lex.fail_at(d->where, "unknown restriction type '" + d->restriction + "'");
          if (!r) {
            r = rt;
          } else {
            r = sig.meet(*r, *rt);
            if (!r)
              throw SignatureError("feature '" + sig.feature_names_[index(f)] + "' has incompatible restrictions on '" +
                                   sig.type_names_[t] + "'");
          }
        }
        sig.restriction_[t * nf + index(f)] = index(*r);
      }
    }
    for (std::size_t t = 0; t < n; ++t)
      for (std::size_t f = 0; f < nf; ++f)
        if (sig.restriction_[t * nf + f] != Signature::kNoType)
          sig.appropriate_[t].push_back({FeatId{static_cast<std::uint32_t>(f)}, TypeId{sig.restriction_[t * nf + f]}});
  }
};

Signature load_signature(std::string_view text, std::string_view filename) {
  detail::Lexer lex(text, filename, {.hash_tags = false, .percent_comments = false});
  SignatureBuilder b;
  b.intern("top", Token{});

  while (!lex.at_end()) {
    if (!lex.is_ident("type")) lex.fail("expected 'type' declaration but found " + detail::Lexer::describe(lex.peek()));
    lex.next();
    Token name_tok = lex.peek();
    TypeId self = b.intern(lex.expect_ident("type name"), name_tok);
    bool any_clause = false;
    while (!lex.is_punct(".")) {
      if (lex.is_ident("sub")) {
        lex.next();
        lex.expect_punct("[");
        while (!lex.is_punct("]")) {
          Token child_tok = lex.peek();
          TypeId child = b.intern(lex.expect_ident("subtype name"), child_tok);
          if (child == self) lex.fail_at(child_tok, "type '" + child_tok.text + "' declared as its own subtype");
          b.add_child(self, child);
          if (!lex.is_punct("]")) lex.expect_punct(",");
        }
        lex.next();
      } else if (lex.is_ident("intro")) {
        lex.next();
        lex.expect_punct("[");
        while (!lex.is_punct("]")) {
          Token feat_tok = lex.peek();
          std::string feat = lex.expect_ident("feature name");
          lex.expect_punct(":");
          Token restr_tok = lex.peek();
          std::string restr = lex.expect_ident("restriction type");
          for (const auto& d : b.declared[index(self)])
            if (d.feature == feat) lex.fail_at(feat_tok, "feature '" + feat + "' declared twice on '" + name_tok.text + "'");
          b.declared[index(self)].push_back({feat, restr, restr_tok});
          if (!lex.is_punct("]")) lex.expect_punct(",");
        }
        lex.next();
      } else {
        lex.fail("expected 'sub', 'intro' or '.' but found " + detail::Lexer::describe(lex.peek()));
      }
      any_clause = true;
    }
    if (!any_clause) lex.fail("empty type declaration for '" + name_tok.text + "'");
    lex.next();
  }
  b.finish(lex);
  return std::move(b.sig);
}

std::string to_dsl(const Signature& sig) {
  std::ostringstream os;
  for (std::uint32_t t = 0; t < sig.type_count(); ++t) {
    TypeId id{t};
    auto kids = sig.children(id);
    std::vector<Appropriate> own;
    for (const auto& a : sig.features(id)) {
      bool inherited = std::any_of(sig.parents(id).begin(), sig.parents(id).end(),
                                   [&](TypeId p) { return sig.restriction(p, a.feature) == a.restriction; });
      if (!inherited) own.push_back(a);
    }
    if (kids.empty() && own.empty()) continue;
    os << "type " << sig.name(id);
    if (!kids.empty()) {
      os << " sub [";
      for (std::size_t i = 0; i < kids.size(); ++i) os << (i ? ", " : "") << sig.name(kids[i]);
      os << "]";
    }
    if (!own.empty()) {
      os << " intro [";
      for (std::size_t i = 0; i < own.size(); ++i)
        os << (i ? ", " : "") << sig.name(own[i].feature) << ":" << sig.name(own[i].restriction);
      os << "]";
    }
    os << ".\n";
  }
  return os.str();
}

}  // namespace tfg
