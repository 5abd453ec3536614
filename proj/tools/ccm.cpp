#include <iostream>

#include <CLI11.hpp>

#include "ccm/cli.hpp"

namespace {

void add_common(CLI::App* cmd, ccm::cli::CommonOptions& o) {
  cmd->add_option("file", o.file, "Program file (.ccm)")->required();
  cmd->add_option("--init", o.init, "Initial value override, name=value (repeatable)");
  cmd->add_flag("--json", o.json, "Emit one JSON report");
  cmd->add_option("--max-ops", o.max_ops, "Operation cap");
  cmd->add_option("--max-states", o.max_states, "Cap on explored executions or traces");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coherent causal memory: enumerate, check, and simulate litmus programs"};
  app.require_subcommand(1);

  ccm::cli::EnumerateOptions en;
  auto* enumerate = app.add_subcommand("enumerate", "List executions or TSO traces");
  add_common(enumerate, en);
  enumerate->add_option("--model", en.model, "Memory model")
      ->check(CLI::IsMember({"cc", "cc-oracle", "sc", "tso-plain", "tso-disciplined"}));
  enumerate->add_flag("--complete-only", en.complete_only, "Only complete executions");

  ccm::cli::CheckOptions ck;
  auto* check = app.add_subcommand("check", "Check an annotation, augmentation, or TSO bridge");
  add_common(check, ck);
  check->add_flag("--annotation", ck.annotation, "Local correctness and noninterference");
  check->add_flag("--ghost", ck.ghost, "Projection, commutation preservation, simulation");
  check->add_flag("--soundness", ck.soundness, "Annotation against every prefix execution");
  check->add_flag("--bridge", ck.bridge, "TSO traces against CC validity");
  check->add_option("--model", ck.model, "TSO mode for --bridge")
      ->check(CLI::IsMember({"tso-plain", "tso-disciplined"}));

  ccm::cli::CorpusOptions co;
  co.dir = CCM_DEFAULT_CORPUS;
  auto* corpus = app.add_subcommand("corpus", "Run the acceptance matrix over the corpus");
  corpus->add_option("--dir", co.dir, "Corpus directory");
  corpus->add_flag("--json", co.json, "One JSON object per row");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ccm::cli::kUsage;
  }

  if (enumerate->parsed()) return ccm::cli::cmd_enumerate(en, std::cout, std::cerr);
  if (check->parsed()) return ccm::cli::cmd_check(ck, std::cout, std::cerr);
  return ccm::cli::cmd_corpus(co, std::cout, std::cerr);
}
