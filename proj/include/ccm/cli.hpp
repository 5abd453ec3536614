#ifndef CCM_CLI_HPP_
#define CCM_CLI_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ccm/dsl.hpp"
#include "ccm/enumerate.hpp"

namespace ccm::cli {

enum Exit : int {
  kOk = 0,
  kFailed = 1,
  kInvalid = 2,
  kCap = 3,
  kUsage = 64,
};

struct CommonOptions {
  std::string file;
  std::vector<std::string> init;  // `name=value` overrides
  bool json = false;
  std::size_t max_ops = Limits{}.max_ops;
  std::size_t max_states = Limits{}.max_states;
};

struct EnumerateOptions : CommonOptions {
  std::string model = "cc";
  bool complete_only = false;
};

struct CheckOptions : CommonOptions {
  bool annotation = false;
  bool ghost = false;
  bool soundness = false;
  bool bridge = false;
  std::string model = "tso-disciplined";
};

struct CorpusOptions {
  std::string dir;
  bool json = false;
};

// Each command writes its report to `out`, diagnostics to `err`, and returns
// the process exit code.
int cmd_enumerate(const EnumerateOptions& opts, std::ostream& out, std::ostream& err);
int cmd_check(const CheckOptions& opts, std::ostream& out, std::ostream& err);
int cmd_corpus(const CorpusOptions& opts, std::ostream& out, std::ostream& err);

std::uint64_t fnv1a64(std::string_view bytes);

// Applies `name=value` overrides (values true/false/T/F or an integer).
// Throws ValidationError.
State apply_overrides(const VarTable& vars, State s,
                      const std::vector<std::string>& overrides);

// Drops the wall-time field from every JSON line of a report.
std::string strip_wall_time(const std::string& json_lines);

struct AcceptanceRow {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Parse rows for every corpus file plus one row per acceptance criterion,
// sorted by name.
std::vector<AcceptanceRow> run_acceptance(const std::string& corpus_dir);

}  // namespace ccm::cli

#endif  // CCM_CLI_HPP_
