#include "tfg/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

#include <json.hpp>

namespace tfg::cli {

namespace {

using json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> split_path(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ':') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

// Signature and clause texts per grammar file.
struct Sources {
  std::string sig_name, sig_text;
  std::vector<std::pair<std::string, std::string>> grammars;
};

Sources read_sources(const SessionConfig& c) {
  if (c.grammars.empty()) throw Error("no grammar file given");
  Sources s;
  for (const auto& g : c.grammars) s.grammars.emplace_back(g, read_file(g));
  if (!c.signature.empty()) {
    s.sig_name = c.signature;
    s.sig_text = read_file(c.signature);
  } else {
    auto [sig, rest] = split_combined(s.grammars[0].second);
    if (sig.empty()) throw Error(s.grammars[0].first + ": no signature given and the grammar file has no type statements");
    s.sig_name = s.grammars[0].first;
    s.sig_text = std::move(sig);
    s.grammars[0].second = std::move(rest);
  }
  return s;
}

Control read_control(const SessionConfig& c, const Signature& sig) {
  Control ctl;
  for (const auto& f : c.delays) merge(ctl, parse_control(read_file(f), sig, f));
  for (const auto& f : c.index) merge(ctl, parse_control(read_file(f), sig, f));
  if (!c.parse_types.empty()) {
    std::error_code ec;
    if (std::filesystem::is_regular_file(c.parse_types, ec))
      ctl.parse_types = parse_control(read_file(c.parse_types), sig, c.parse_types).parse_types;
    else
      ctl.parse_types = split_type_list(c.parse_types);
  }
  return ctl;
}

void check_caps(const SessionConfig& c) {
  if (c.max_edges == 0) throw Error("--max-edges must be positive");
  if (c.max_depth == 0) throw Error("--max-depth must be positive");
  if (c.max_steps == 0) throw Error("--max-steps must be positive");
}

std::string status_of(const ResourceLimitError& e) {
  switch (e.kind()) {
    case ResourceLimitError::Kind::edges: return "limit:edges";
    case ResourceLimitError::Kind::steps: return "limit:steps";
    case ResourceLimitError::Kind::depth: return "limit:depth";
  }
  return "limit";
}

json stats_record(const ParseResult& r) {
  const BottomUpStats& s = r.stats;
  return {{"answers", r.answers.size()},
          {"floundered", r.floundered.size()},
          {"stored", s.stored},
          {"pruned", s.pruned},
          {"evicted", s.evicted},
          {"excluded", s.excluded},
          {"pops", s.pops},
          {"matches", s.matches},
          {"reductions", s.reductions},
          {"topdown_steps", s.topdown.steps},
          {"choice_points", s.topdown.choice_points}};
}

// Bottom-up for parse-type goals, top-down otherwise.
ParseResult run(const Session& s, const MagicGrammar& mg, const Literal& goal, const std::vector<std::string>& words,
                const BottomUpOptions& opts) {
  if (is_parse_type_literal(goal.graph, goal.atom, s.spec)) {
    BottomUpEngine engine(mg, s.control, opts);
    return engine.parse(goal, words);
  }
  return solve_topdown(mg.source, s.control, goal, opts.topdown);
}

}  // namespace

Session load(const SessionConfig& c) {
  check_caps(c);
  Sources src = read_sources(c);
  Session s;
  s.sig = std::make_shared<const Signature>(load_signature(src.sig_text, src.sig_name));
  s.grammar = std::make_unique<Grammar>(s.sig);
  for (const auto& [name, text] : src.grammars) {
    Grammar g = parse_grammar(text, s.sig, name);
    for (const Clause& cl : g.clauses()) s.grammar->add(cl);
  }
  s.control = read_control(c, *s.sig);
  s.spec = ParseTypeSpec(*s.sig, s.control.parse_types);
  if (c.compiled) {
    MagicMode mode = read_compiled_header(src.grammars[0].second).value_or(c.mode);
    s.magic = std::make_unique<MagicGrammar>(from_compiled(*s.grammar, s.spec, mode));
  } else {
    s.magic = std::make_unique<MagicGrammar>(transform_grammar(*s.grammar, s.spec, c.mode));
  }

  BottomUpOptions& o = s.options;
  o.agenda = c.agenda;
  o.max_edges = c.max_edges;
  o.max_steps = c.max_steps;
  o.topdown.max_depth = c.max_depth;
  o.topdown.max_steps = c.max_steps;
  o.phon_path = split_path(c.phon_path);
  for (const auto& f : o.phon_path)
    if (!s.sig->find_feature(f)) throw Error("--phon-path: unknown feature '" + f + "'");
  return s;
}

std::string phon_list(const std::vector<std::string>& words) {
  std::string out = "<";
  for (std::size_t i = 0; i < words.size(); ++i) out += (i ? ", " : "") + words[i];
  return out + ">";
}

std::string instantiate_goal(const std::string& templ, const std::vector<std::string>& words) {
  std::string out = templ;
  const std::string key = "$phon", list = phon_list(words);
  for (auto pos = out.find(key); pos != std::string::npos; pos = out.find(key, pos + list.size()))
    out.replace(pos, key.size(), list);
  return out;
}

std::string compiled_header(MagicMode mode) { return "% compiled grammar, magic mode " + to_string(mode) + "\n"; }

std::optional<MagicMode> read_compiled_header(const std::string& text) {
  static const std::regex header(R"(^\s*% compiled grammar, magic mode (\w+))");
  std::smatch m;
  if (!std::regex_search(text, m, header)) return std::nullopt;
  return parse_magic_mode(m[1].str());
}

int cmd_check(const SessionConfig& c, std::ostream& out, std::ostream& err) {
  std::vector<Diagnostic> diags;
  auto report = [&](const Error& e) {
    if (auto* p = dynamic_cast<const ParseError*>(&e))
      diags.push_back({p->where(), p->message()});
    else
      diags.push_back({{}, e.what()});
  };

  try {
    check_caps(c);
  } catch (const Error& e) {
    report(e);
  }
  std::shared_ptr<const Signature> sig;
  Sources src;
  try {
    src = read_sources(c);
    sig = std::make_shared<const Signature>(load_signature(src.sig_text, src.sig_name));
  } catch (const Error& e) {
    report(e);
  }
  if (sig) {
    Grammar all(sig);
    for (const auto& [name, text] : src.grammars) {
      Grammar g = parse_grammar(text, sig, name, &diags);
      for (const Clause& cl : g.clauses()) {
        try {
          all.add(cl);
        } catch (const GrammarError& e) {
          diags.push_back({cl.where, e.what()});
        }
      }
    }
    try {
      Control ctl = read_control(c, *sig);
      ParseTypeSpec spec(*sig, ctl.parse_types);
      if (c.compiled)
        from_compiled(all, spec, read_compiled_header(src.grammars[0].second).value_or(c.mode));
      else
        transform_grammar(all, spec, c.mode);
    } catch (const Error& e) {
      report(e);
    }
    for (const auto& f : split_path(c.phon_path))
      if (!sig->find_feature(f)) diags.push_back({{}, "--phon-path: unknown feature '" + f + "'"});
  }

  for (const Diagnostic& d : diags) {
    const bool located = !d.where.file.empty();
    if (c.format == Format::records) {
      json r{{"type", "diagnostic"}, {"message", d.message}};
      if (located) {
        r["file"] = d.where.file;
        r["line"] = d.where.line;
        r["column"] = d.where.column;
      }
      out << r.dump() << "\n";
    } else {
      out << (located ? d.where.str() + ": " : std::string()) << d.message << "\n";
    }
  }
  if (c.format == Format::text) err << diags.size() << (diags.size() == 1 ? " diagnostic\n" : " diagnostics\n");
  return diags.empty() ? Exit::ok : Exit::failure;
}

int cmd_compile(const SessionConfig& c, std::ostream& out, std::ostream& err) {
  try {
    Session s = load(c);
    const MagicGrammar& mg = *s.magic;
    if (c.format == Format::records) {
      const Grammar compiled = mg.compiled();
      for (std::size_t i = 0; i < mg.clauses.size(); ++i) {
        const CompiledClause& cc = mg.clauses[i];
        const char* origin = cc.origin == Origin::magic_variant ? "magic_variant"
                             : cc.origin == Origin::magic_rule  ? "magic_rule"
                                                                : "pass_through";
        out << json{{"type", "clause"},   {"index", i},          {"origin", origin},
                    {"source", cc.source}, {"initial", cc.initial}, {"clause", to_string(*s.sig, cc.clause)}}
                   .dump()
            << "\n";
      }
    } else {
      out << compiled_header(mg.mode) << to_dsl(mg.compiled());
    }
    return Exit::ok;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return Exit::failure;
  }
}

int cmd_parse(const SessionConfig& c, const std::vector<std::string>& words, std::ostream& out, std::ostream& err) {
  std::unique_ptr<Session> s;
  Literal goal;
  try {
    s = std::make_unique<Session>(load(c));
    goal = parse_literal(instantiate_goal(c.goal, words), *s->sig);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return Exit::failure;
  }
  BottomUpOptions opts = s->options;
  if (c.trace) opts.trace = [&err](const std::string& line) { err << line << "\n"; };

  ParseResult r;
  try {
    r = run(*s, *s->magic, goal, words, opts);
  } catch (const ResourceLimitError& e) {
    err << "resource limit: " << e.what() << "\n";
    return Exit::resource_limit;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return Exit::failure;
  }

  const Signature& sig = *s->sig;
  const auto answers = answer_strings(sig, r);
  if (c.format == Format::records) {
    for (std::size_t i = 0; i < answers.size(); ++i)
      out << json{{"type", "answer"}, {"index", i}, {"literal", answers[i]}}.dump() << "\n";
    for (std::size_t i = 0; i < r.floundered.size(); ++i) {
      const Edge& e = r.floundered[i];
      std::vector<Atom> atoms{e.fact};
      atoms.insert(atoms.end(), e.delayed.begin(), e.delayed.end());
      auto parts = atom_strings(sig, e.graph, atoms);
      out << json{{"type", "floundered"},
                  {"index", i},
                  {"fact", parts[0]},
                  {"delayed", std::vector<std::string>(parts.begin() + 1, parts.end())}}
                 .dump()
          << "\n";
    }
    json summary{{"type", "summary"}};
    summary.update(stats_record(r));
    out << summary.dump() << "\n";
  } else {
    for (const auto& a : answers) out << a << "\n";
    for (const Edge& e : r.floundered) out << "floundered: " << to_string(sig, e) << "\n";
    out << "% " << answers.size() << (answers.size() == 1 ? " answer" : " answers") << ", " << r.floundered.size()
        << " floundered, " << r.stats.stored << " edges stored, " << r.stats.pruned << " pruned\n";
  }
  return answers.empty() ? Exit::no_answer : Exit::ok;
}

int cmd_bench(const SessionConfig& c, const std::string& corpus_path, std::ostream& out, std::ostream& err) {
  std::unique_ptr<Session> s;
  std::vector<std::string> sentences;
  try {
    s = std::make_unique<Session>(load(c));
    std::istringstream corpus(read_file(corpus_path));
    for (std::string line; std::getline(corpus, line);) {
      auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '%') continue;
      auto last = line.find_last_not_of(" \t\r");
      sentences.push_back(line.substr(first, last - first + 1));
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return Exit::failure;
  }

  const MagicGrammar selective = transform_grammar(s->magic->source, s->spec, MagicMode::selective);
  const MagicGrammar full = transform_grammar(s->magic->source, s->spec, MagicMode::full);
  const std::vector<std::string> columns{"sentence", "strategy", "answers", "stored", "pruned", "matches",
                                         "topdown_steps", "status"};
  if (c.format == Format::text) {
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "\t" : "") << columns[i];
    out << "\n";
  }

  int status = Exit::ok;
  for (const auto& sentence : sentences) {
    std::istringstream in(sentence);
    std::vector<std::string> words;
    for (std::string w; in >> w;) words.push_back(w);
    for (const char* strategy : {"selective", "full", "topdown"}) {
      json row{{"sentence", sentence}, {"strategy", strategy}};
      try {
        Literal goal = parse_literal(instantiate_goal(c.goal, words), *s->sig);
        ParseResult r;
        if (std::string_view(strategy) == "topdown")
          r = solve_topdown(s->magic->source, s->control, goal, s->options.topdown);
        else
          r = run(*s, std::string_view(strategy) == "full" ? full : selective, goal, words, s->options);
        row["answers"] = r.answers.size();
        row["stored"] = r.stats.stored;
        row["pruned"] = r.stats.pruned;
        row["matches"] = r.stats.matches;
        row["topdown_steps"] = r.stats.topdown.steps;
        row["status"] = "ok";
      } catch (const ResourceLimitError& e) {
        row["status"] = status_of(e);
      } catch (const Error& e) {
        row["status"] = "error";
        err << "error: " << sentence << " (" << strategy << "): " << e.what() << "\n";
        status = Exit::failure;
      }
      if (c.format == Format::records) {
        out << row.dump() << "\n";
      } else {
        for (std::size_t i = 0; i < columns.size(); ++i) {
          const json& v = row.contains(columns[i]) ? row[columns[i]] : json("-");
          out << (i ? "\t" : "") << (v.is_string() ? v.get<std::string>() : v.dump());
        }
        out << "\n";
      }
    }
  }
  return status;
}

}  // namespace tfg::cli
