#ifndef CCM_ENUMERATE_HPP_
#define CCM_ENUMERATE_HPP_

#include <cstddef>
#include <set>
#include <utility>
#include <vector>

#include "ccm/execution.hpp"
#include "ccm/program.hpp"

namespace ccm {

struct Limits {
  std::size_t max_ops = 16;
  // Per partial execution.
  std::size_t max_downsets = 4096;
  // Distinct partial executions visited by one search.
  std::size_t max_states = std::size_t{1} << 20;
};

struct ExecutionRecord {
  Order order;  // carrier = executed operations
  State final_state;
  // Index into desugar_reads(program) of the concrete program it executes.
  std::size_t variant = 0;

  OpSet carrier() const { return order.carrier(); }
};

// (carrier, sorted edge list): execution identity.
using ExecutionKey = std::pair<OpSet, std::vector<Edge>>;
ExecutionKey key_of(const ExecutionRecord& r);
bool key_less(const ExecutionKey& a, const ExecutionKey& b);

struct EnumerationStats {
  std::size_t variants = 0;
  std::size_t explored = 0;
  std::size_t pruned_guard = 0;
  std::size_t pruned_coherence = 0;
  std::size_t duplicates = 0;
};

struct EnumerationResult {
  std::vector<ExecutionRecord> executions;  // sorted by key
  bool complete_only = false;
  EnumerationStats stats;
};

// One concrete program per choice of value for each weak read.
std::vector<Program> desugar_reads(const Program& program);

EnumerationResult enumerate_cc(const Program& program, const State& init,
                               bool complete_only, const Limits& limits = {});

// Brute force over every strict order extending the program order on every
// prefix. Throws PreconditionError beyond kOracleMaxOps operations.
constexpr std::size_t kOracleMaxOps = 6;
EnumerationResult enumerate_cc_oracle(const Program& program, const State& init,
                                      bool complete_only = false);

EnumerationResult enumerate_sc(const Program& program, const State& init,
                               bool complete_only, const Limits& limits = {});

std::set<State> behaviors(const EnumerationResult& result);
std::set<ExecutionKey> execution_keys(const EnumerationResult& result);

}  // namespace ccm

#endif  // CCM_ENUMERATE_HPP_
