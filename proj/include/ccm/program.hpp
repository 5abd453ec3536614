#ifndef CCM_PROGRAM_HPP_
#define CCM_PROGRAM_HPP_

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ccm/expr.hpp"
#include "ccm/order.hpp"
#include "ccm/state.hpp"

namespace ccm {

// Surface form a statement was written in. Kept for serialization and for
// the TSO shape check; semantics only look at guard and update.
enum class StmtForm { kWrite, kWait, kRead, kRmw, kSkip };

// Where an operation sits: inside a thread, or as the unique operation
// preceding (init) or following (final) all others.
enum class Placement { kThread, kInit, kFinal };

// `read target := source`: one guard-only observation per value of source.
struct WeakRead {
  int target;
  int source;

  bool operator==(const WeakRead&) const = default;
};

struct Operation {
  std::string id;
  Expr guard = Expr::boolean(true);
  Update update;
  StmtForm form = StmtForm::kSkip;
  Placement placement = Placement::kThread;
  std::optional<int> thread;
  std::set<std::string> conflict_vars;
  // Assigned variables contributed by ghost code.
  std::set<int> ghost_targets;
  std::optional<WeakRead> weak_read;

  bool operator==(const Operation&) const = default;
};

// A finite strict partial order of operations over a variable table.
class Program {
 public:
  Program() = default;
  // Closes `edges` transitively together with thread order and init/final
  // placement, then validates. Throws ValidationError.
  Program(VarTable vars, std::vector<Operation> ops, std::vector<Edge> edges,
          std::vector<std::string> threads = {});

  const VarTable& vars() const { return vars_; }
  const std::vector<Operation>& ops() const { return ops_; }
  const Operation& op(int i) const { return ops_[static_cast<std::size_t>(i)]; }
  std::size_t size() const { return ops_.size(); }
  OpSet all() const {
    return ops_.size() == kMaxOps ? ~OpSet{0} : (bit(static_cast<int>(ops_.size())) - 1);
  }
  const Order& order() const { return order_; }
  const std::vector<std::string>& threads() const { return threads_; }

  std::optional<int> find(std::string_view id) const;
  // Throws LookupError.
  int index_of(std::string_view id) const;
  // Operation indices of a thread in program order.
  std::vector<int> thread_ops(int thread) const;
  bool has_weak_reads() const;
  std::string label_list(OpSet set) const;

  bool operator==(const Program&) const = default;

 private:
  VarTable vars_;
  std::vector<Operation> ops_;
  Order order_;
  std::vector<std::string> threads_;
};

// Throws ValidationError if the operation is ill-formed over `vars`.
void check_operation(const Operation& op, const VarTable& vars);

}  // namespace ccm

#endif  // CCM_PROGRAM_HPP_
