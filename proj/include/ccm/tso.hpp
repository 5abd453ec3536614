#ifndef CCM_TSO_HPP_
#define CCM_TSO_HPP_

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ccm/check_report.hpp"
#include "ccm/enumerate.hpp"
#include "ccm/program.hpp"

namespace ccm::tso {

struct VarClass {
  bool shared = true;
  int owner = -1;  // thread index when unshared

  static VarClass shared_var() { return {true, -1}; }
  static VarClass owned_by(int thread) { return {false, thread}; }
  bool operator==(const VarClass&) const = default;
};

using VarClasses = std::vector<VarClass>;  // one per program variable

// Declared classes win; the rest are inferred: shared iff written by two or
// more threads, otherwise owned by the unique writer (or by the unique reader
// of a never-written variable). Init/final operations are not thread writers.
// Throws ValidationError for an unshared declaration written by a non-owner.
VarClasses classify_variables(const Program& program,
                              const std::map<int, VarClass>& declared = {});

enum class Mode { kPlain, kDisciplined };
const char* to_string(Mode m);

CheckReport check_shapes(const Program& program, const VarClasses& classes);

struct BufferedWrite {
  std::vector<std::pair<int, int>> writes;  // (variable, value)
  int op = -1;
  bool operator==(const BufferedWrite&) const = default;
};

struct TsoConfiguration {
  State memory;
  std::vector<std::deque<BufferedWrite>> buffers;
  std::vector<std::size_t> pc;  // position within each thread
  std::int64_t clock = 0;
  std::vector<std::int64_t> executed_at;   // -1 until executed
  std::vector<std::int64_t> committed_at;  // -1 until in memory (writes)

  bool done(const Program& program) const;
  bool operator==(const TsoConfiguration&) const = default;
};

TsoConfiguration initial_configuration(const Program& program,
                                       const State& init);

struct Action {
  enum class Kind {
    kBufferedWrite,  // write appended to the thread's store buffer
    kInterlocked,    // write or rmw applied to memory with an empty buffer
    kRead,           // guard-only operation passed on the forwarded view
    kDrain,          // oldest buffered write reaches memory
    kGlobal,         // init/final operation, all buffers empty
  };
  Kind kind;
  int thread = -1;
  int op = -1;
  std::int64_t timestamp = 0;
  // Values of the guard's variables as seen by the operation.
  std::vector<std::pair<int, int>> observed;

  bool operator==(const Action&) const = default;
};

std::string describe(const Action& a, const Program& program);

struct TsoContext {
  const Program& program;
  const VarClasses& classes;
  Mode mode;
};

std::vector<std::pair<Action, TsoConfiguration>> step(
    const TsoConfiguration& config, const TsoContext& ctx);

struct TsoTrace {
  std::vector<Action> actions;
  TsoConfiguration final_config;
  bool complete = false;  // all operations executed, all buffers drained
};

struct TsoLimits {
  std::size_t max_traces = 1'000'000;
};

// Every maximal trace from (init, empty buffers). Throws CapExceeded.
std::vector<TsoTrace> explore(const Program& program, const State& init,
                              const VarClasses& classes, Mode mode,
                              const TsoLimits& limits = {});

// o' before o iff program-ordered, or some write w reached memory before o
// executed with o' = w or o' program-ordered before w. Throws InternalError
// if the result is not a strict order.
Order derived_order(const TsoTrace& trace, const Program& program);

struct BridgeResult {
  CheckReport report;
  std::size_t traces = 0;
  std::size_t complete = 0;
  std::size_t valid = 0;  // complete traces whose derived order is CC-valid
  std::set<State> behaviors;  // final memories of complete traces
};

BridgeResult bridge_check(const Program& program, const State& init,
                          const VarClasses& classes, Mode mode,
                          const TsoLimits& limits = {});

std::set<State> complete_behaviors(const std::vector<TsoTrace>& traces);

}  // namespace ccm::tso

#endif  // CCM_TSO_HPP_
