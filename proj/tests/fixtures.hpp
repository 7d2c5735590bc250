#pragma once

#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "tfg/control.hpp"
#include "tfg/grammar.hpp"
#include "tfg/signature.hpp"

namespace fixture {

inline std::string read(const std::string& name) {
  std::ifstream in(std::string(TFG_GRAMMAR_DIR) + "/" + name);
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::shared_ptr<const tfg::Signature> signature(const std::string& name = "toy.sig") {
  return std::make_shared<const tfg::Signature>(tfg::load_signature(read(name), name));
}

inline tfg::Grammar grammar(const std::shared_ptr<const tfg::Signature>& sig, const std::string& name = "toy.tfg") {
  return tfg::parse_grammar(read(name), sig, name);
}

inline tfg::Control control(const tfg::Signature& sig, const std::string& name = "toy.ctl") {
  return tfg::parse_control(read(name), sig, name);
}

inline std::vector<std::string> words(const std::string& sentence) {
  std::istringstream in(sentence);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

/// constituent(sign & cat:s & phon:<words> & sem:sem)
inline tfg::Literal sentence(const tfg::Signature& sig, const std::string& text) {
  std::string phon;
  for (const auto& w : words(text)) phon += (phon.empty() ? "" : ", ") + w;
  return tfg::parse_literal("constituent(sign & cat:s & phon:<" + phon + "> & sem:sem)", sig);
}

}  // namespace fixture
