#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tfg/bottomup.hpp"
#include "tfg/control.hpp"
#include "tfg/grammar.hpp"
#include "tfg/magic.hpp"

namespace tfg::cli {

enum class Format { text, records };

/// Exit statuses shared by all commands.
enum Exit : int { ok = 0, no_answer = 1, failure = 2, resource_limit = 3 };

struct SessionConfig {
  std::string signature;               // empty: the first grammar file carries its own signature
  std::vector<std::string> grammars;
  std::string parse_types;             // comma list, or a control file
  std::vector<std::string> delays;     // control files
  std::vector<std::string> index;      // control files
  MagicMode mode = MagicMode::selective;
  AgendaOrder agenda = AgendaOrder::fifo;
  std::size_t max_edges = 100000;
  std::size_t max_depth = 512;
  std::uint64_t max_steps = 1000000;
  std::string phon_path = "phon";      // colon separated; empty disables the filter
  bool trace = false;
  Format format = Format::text;
  /// Initial goal; `$phon` is replaced by the input as a list.
  std::string goal = "constituent(sign & cat:s & phon:$phon & sem:sem)";
  /// The grammar is the output of `compile` (mode read from its header).
  bool compiled = false;
};

/// Loaded and validated configuration.
struct Session {
  std::shared_ptr<const Signature> sig;
  std::unique_ptr<Grammar> grammar;  // source grammar, or compiled clauses with `compiled`
  Control control;
  ParseTypeSpec spec;
  std::unique_ptr<MagicGrammar> magic;
  BottomUpOptions options;
};

/// Throws tfg::Error (with file:line where known) on the first problem.
Session load(const SessionConfig& config);

/// `<mary, sleeps>`
std::string phon_list(const std::vector<std::string>& words);
std::string instantiate_goal(const std::string& templ, const std::vector<std::string>& words);

/// Header line written by `compile`.
std::string compiled_header(MagicMode mode);
/// Mode named in a compiled header, if the text starts with one.
std::optional<MagicMode> read_compiled_header(const std::string& text);

int cmd_check(const SessionConfig& config, std::ostream& out, std::ostream& err);
int cmd_compile(const SessionConfig& config, std::ostream& out, std::ostream& err);
int cmd_parse(const SessionConfig& config, const std::vector<std::string>& words, std::ostream& out,
              std::ostream& err);
/// One row per sentence and strategy (selective, full, topdown).
int cmd_bench(const SessionConfig& config, const std::string& corpus_path, std::ostream& out, std::ostream& err);

}  // namespace tfg::cli
