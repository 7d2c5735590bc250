#include <iostream>

#include <CLI11.hpp>

#include "tfg/cli.hpp"

namespace {

void add_session_options(CLI::App* cmd, tfg::cli::SessionConfig& c, std::string& mode, std::string& agenda,
                         std::string& format) {
  cmd->add_option("--signature", c.signature, "Signature file (default: type statements at the top of the grammar)");
  cmd->add_option("--grammar", c.grammars, "Grammar file; repeat for several")->required()->allow_extra_args(false);
  cmd->add_option("--parse-types", c.parse_types, "Comma-separated parse types, or a control file");
  cmd->add_option("--delays", c.delays, "Control file with delay patterns")->allow_extra_args(false);
  cmd->add_option("--index", c.index, "Control file with index declarations")->allow_extra_args(false);
  cmd->add_option("--magic-mode", mode, "selective or full")->check(CLI::IsMember({"selective", "full"}));
  cmd->add_option("--agenda", agenda, "fifo or lifo")->check(CLI::IsMember({"fifo", "lifo"}));
  cmd->add_option("--max-edges", c.max_edges, "Cap on stored edges");
  cmd->add_option("--max-depth", c.max_depth, "Cap on top-down proof depth");
  cmd->add_option("--max-steps", c.max_steps, "Cap on agenda pops and resolution steps");
  cmd->add_option("--phon-path", c.phon_path, "Feature path to the phonology, e.g. phon or synsem:phon; empty disables");
  cmd->add_option("--format", format, "text or records")->check(CLI::IsMember({"text", "records"}));
  cmd->add_option("--goal", c.goal, "Initial goal; $phon stands for the input words");
  cmd->add_flag("--compiled", c.compiled, "The grammar is output of the compile command");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Typed feature grammar compiler and parser"};
  app.require_subcommand(1);

  tfg::cli::SessionConfig config;
  std::string mode = "selective", agenda = "fifo", format = "text";
  std::vector<std::string> sentence;
  std::string corpus;

  auto* check = app.add_subcommand("check", "Validate signature, grammar and control files");
  auto* compile = app.add_subcommand("compile", "Print the magic-compiled grammar");
  auto* parse = app.add_subcommand("parse", "Parse one sentence");
  auto* bench = app.add_subcommand("bench", "Compare strategies on a corpus");
  for (auto* cmd : {check, compile, parse, bench}) add_session_options(cmd, config, mode, agenda, format);
  parse->add_option("sentence", sentence, "Words of the sentence (one quoted argument or several)");
  parse->add_flag("--trace", config.trace, "Write engine events to stderr");
  bench->add_option("corpus", corpus, "One sentence per line")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : tfg::cli::Exit::failure;
  }

  config.mode = tfg::parse_magic_mode(mode);
  config.agenda = tfg::parse_agenda_order(agenda);
  config.format = format == "records" ? tfg::cli::Format::records : tfg::cli::Format::text;

  if (check->parsed()) return tfg::cli::cmd_check(config, std::cout, std::cerr);
  if (compile->parsed()) return tfg::cli::cmd_compile(config, std::cout, std::cerr);
  if (bench->parsed()) return tfg::cli::cmd_bench(config, corpus, std::cout, std::cerr);

  std::vector<std::string> words;
  for (const auto& arg : sentence) {
    std::istringstream in(arg);
    for (std::string w; in >> w;) words.push_back(w);
  }
  return tfg::cli::cmd_parse(config, words, std::cout, std::cerr);
}
