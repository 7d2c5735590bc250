#include "tfg/control.hpp"

#include <cctype>

#include "lexer.hpp"
#include "tfg/error.hpp"

namespace tfg {

using detail::Lexer;
using detail::Tok;
using detail::Token;

namespace {

class ControlReader {
public:
  ControlReader(std::string_view text, const Signature& sig, std::string_view file)
      : lex_(text, file, {.hash_tags = false, .percent_comments = true}), sig_(sig) {}

  Control read() {
    Control c;
    std::string section;
    while (!lex_.at_end()) {
      if (header()) {
        section = lex_.next().text;
        lex_.expect_punct(":");
        if (section != "parse_types" && section != "delays" && section != "index")
          fail("unknown section '" + section + "'");
        continue;
      }
      if (section.empty()) lex_.fail("expected a section header (parse_types:, delays:, index:)");
      if (section == "parse_types") {
        Token t = lex_.peek();
        std::string name = lex_.expect_ident("a type name");
        if (!sig_.find_type(name)) lex_.fail_at(t, "unknown parse type '" + name + "'");
        c.parse_types.push_back(name);
        if (lex_.is_punct(",") || lex_.is_punct(".")) lex_.next();
      } else if (section == "delays") {
        c.delays.push_back(delay());
      } else {
        auto [rel, key] = index();
        c.index[rel].push_back(key);
      }
    }
    return c;
  }

private:
  [[noreturn]] void fail(const std::string& m) { lex_.fail(m); }

  bool header() const {
    if (lex_.peek().kind != Tok::ident) return false;
    Lexer ahead = lex_;
    ahead.next();
    return ahead.is_punct(":");
  }

  std::pair<std::string, std::size_t> relation() {
    std::string rel = lex_.expect_ident("a relation name");
    lex_.expect_punct("/");
    Token n = lex_.peek();
    std::string digits = lex_.expect_ident("an arity");
    if (digits.find_first_not_of("0123456789") != std::string::npos) lex_.fail_at(n, "arity must be a number");
    return {rel, std::stoul(digits)};
  }

  std::size_t argument(std::size_t arity) {
    Token t = lex_.peek();
    std::string a = lex_.expect_ident("arg<N>");
    if (a.size() < 4 || a.rfind("arg", 0) != 0 || a.find_first_not_of("0123456789", 3) != std::string::npos)
      lex_.fail_at(t, "expected arg<N> but found '" + a + "'");
    std::size_t i = std::stoul(a.substr(3));
    if (i < 1 || i > arity) lex_.fail_at(t, "argument index " + std::to_string(i) + " out of range");
    return i - 1;
  }

  std::vector<FeatId> path() {
    std::vector<FeatId> p;
    if (lex_.is_ident("root")) {
      lex_.next();
      return p;
    }
    for (;;) {
      Token t = lex_.peek();
      std::string f = lex_.expect_ident("a feature path");
      auto id = sig_.find_feature(f);
      if (!id) lex_.fail_at(t, "unknown feature '" + f + "'");
      p.push_back(*id);
      if (!lex_.is_punct(":")) return p;
      lex_.next();
    }
  }

  DelayPattern delay() {
    if (!lex_.is_ident("delay")) fail("expected 'delay' but found " + Lexer::describe(lex_.peek()));
    lex_.next();
    DelayPattern p;
    std::tie(p.relation, p.arity) = relation();
    if (!lex_.is_ident("when")) fail("expected 'when'");
    lex_.next();
    for (;;) {
      DelayCondition c;
      c.arg = argument(p.arity);
      if (!lex_.is_ident("at")) fail("expected 'at'");
      lex_.next();
      c.path = path();
      if (!lex_.is_ident("is")) fail("expected 'is'");
      lex_.next();
      Token t = lex_.peek();
      std::string ty = lex_.expect_ident("'general' or a type");
      if (ty != "general") {
        c.type = sig_.find_type(ty);
        if (!c.type) lex_.fail_at(t, "unknown type '" + ty + "'");
      }
      p.when.push_back(std::move(c));
      if (!lex_.is_ident("and")) break;
      lex_.next();
    }
    lex_.expect_punct(".");
    return p;
  }

  std::pair<std::string, IndexKey> index() {
    if (!lex_.is_ident("index")) fail("expected 'index' but found " + Lexer::describe(lex_.peek()));
    lex_.next();
    auto [rel, arity] = relation();
    if (!lex_.is_ident("on")) fail("expected 'on'");
    lex_.next();
    IndexKey k;
    k.arg = argument(arity);
    if (!lex_.is_ident("at")) fail("expected 'at'");
    lex_.next();
    k.path = path();
    lex_.expect_punct(".");
    return {rel, k};
  }

  Lexer lex_;
  const Signature& sig_;
};

}  // namespace

std::vector<IndexKey> Control::keys(const std::string& relation, std::size_t arity) const {
  if (auto it = index.find(relation); it != index.end()) return it->second;
  if (arity == 0) return {};
  return {IndexKey{0, {}}};
}

Control parse_control(std::string_view text, const Signature& sig, std::string_view filename) {
  return ControlReader(text, sig, filename).read();
}

void merge(Control& into, const Control& from) {
  into.parse_types.insert(into.parse_types.end(), from.parse_types.begin(), from.parse_types.end());
  into.delays.insert(into.delays.end(), from.delays.begin(), from.delays.end());
  for (const auto& [rel, keys] : from.index) {
    auto& dst = into.index[rel];
    dst.insert(dst.end(), keys.begin(), keys.end());
  }
}

std::vector<std::string> split_type_list(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (detail::is_ident_char(ch)) {
      cur += ch;
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::string describe(const Signature& sig, const DelayPattern& p) {
  std::string out = "delay " + p.relation + "/" + std::to_string(p.arity) + " when ";
  for (std::size_t i = 0; i < p.when.size(); ++i) {
    const DelayCondition& c = p.when[i];
    if (i) out += " and ";
    out += "arg" + std::to_string(c.arg + 1) + " at ";
    if (c.path.empty()) out += "root";
    for (std::size_t j = 0; j < c.path.size(); ++j) out += (j ? ":" : "") + sig.name(c.path[j]);
    out += " is " + (c.type ? sig.name(*c.type) : std::string("general"));
  }
  return out + ".";
}

}  // namespace tfg
