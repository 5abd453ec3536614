#ifndef CCM_EXECUTION_HPP_
#define CCM_EXECUTION_HPP_

#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "ccm/order.hpp"
#include "ccm/program.hpp"
#include "ccm/state.hpp"

namespace ccm {

bool eval_guard(const Expr& guard, const State& s);
State eval_update(const Update& update, const State& s, const VarTable& vars);
bool commute_at(const Update& u1, const Update& u2, const State& s,
                const VarTable& vars);
// Shared conflict variable, or non-commutation somewhere in the declared
// state space.
bool static_conflict(const Operation& o1, const Operation& o2,
                     const Program& program);

// State reached at every downset of an execution order.
class RedMap {
 public:
  const State& at(OpSet downset) const;
  bool contains(OpSet downset) const { return states_.contains(downset); }
  // Downsets in canonical order.
  const std::vector<OpSet>& downsets() const { return downsets_; }
  std::size_t size() const { return downsets_.size(); }

  void insert(OpSet downset, State s);
  void sort_canonical();

 private:
  std::vector<OpSet> downsets_;
  std::unordered_map<OpSet, State> states_;
};

struct Valid {
  bool operator==(const Valid&) const = default;
};

// Guard of `op` fails in the state it sees.
struct E1Violation {
  int op;
  State state;
  bool operator==(const E1Violation&) const = default;
};

// Two maximal operations of `downset` lead to different states.
struct E2Violation {
  OpSet downset;
  int op_a;
  int op_b;
  State state_a;
  State state_b;
  bool operator==(const E2Violation&) const = default;
};

// The execution order omits a program-order edge.
struct OrderViolation {
  Edge missing;
  bool operator==(const OrderViolation&) const = default;
};

// Two executed operations share a conflict variable but are unordered.
struct ConflictViolation {
  int op_a;
  int op_b;
  std::string resource;
  bool operator==(const ConflictViolation&) const = default;
};

using Verdict = std::variant<Valid, E1Violation, E2Violation, OrderViolation,
                             ConflictViolation>;

inline bool is_valid(const Verdict& v) {
  return std::holds_alternative<Valid>(v);
}
std::string describe(const Verdict& v, const Program& program);

using RedResult = std::variant<RedMap, E2Violation>;

// Builds the downset-to-state map of `order` (over its carrier) from `init`,
// processing downsets in canonical order and reporting the first
// disagreement between maximal operations.
RedResult build_red(const Program& program, const Order& order,
                    const State& init);

// Checks `order` restricted to `carrier` as an execution of that prefix.
// Throws PreconditionError if `carrier` is not a program downset or the order
// is not a strict order.
Verdict validate_execution(const Program& program, const Order& order,
                           OpSet carrier, const State& init);
inline Verdict validate_execution(const Program& program, const Order& order,
                                  const State& init) {
  return validate_execution(program, order, order.carrier(), init);
}

}  // namespace ccm

#endif  // CCM_EXECUTION_HPP_
