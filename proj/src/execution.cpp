#include "ccm/execution.hpp"

#include <algorithm>

#include "ccm/error.hpp"

namespace ccm {

bool eval_guard(const Expr& guard, const State& s) { return guard.holds(s); }

State eval_update(const Update& update, const State& s, const VarTable& vars) {
  return update.apply(s, vars);
}

bool commute_at(const Update& u1, const Update& u2, const State& s,
                const VarTable& vars) {
  return u1.apply(u2.apply(s, vars), vars) == u2.apply(u1.apply(s, vars), vars);
}

namespace {

const std::string* shared_conflict(const Operation& a, const Operation& b) {
  for (const auto& r : a.conflict_vars) {
    if (auto it = b.conflict_vars.find(r); it != b.conflict_vars.end()) {
      return &*it;
    }
  }
  return nullptr;
}

}  // namespace

bool static_conflict(const Operation& o1, const Operation& o2,
                     const Program& program) {
  if (shared_conflict(o1, o2)) return true;
  if (o1.update.targets().empty() || o2.update.targets().empty()) return false;
  bool conflict = false;
  StateSpace(program.vars()).for_each([&](const State& s) {
    if (!conflict && !commute_at(o1.update, o2.update, s, program.vars())) {
      conflict = true;
    }
  });
  return conflict;
}

const State& RedMap::at(OpSet downset) const {
  auto it = states_.find(downset);
  if (it == states_.end()) throw LookupError("set is not a downset of the order");
  return it->second;
}

void RedMap::insert(OpSet downset, State s) {
  if (states_.emplace(downset, std::move(s)).second) {
    downsets_.push_back(downset);
  }
}

void RedMap::sort_canonical() {
  std::sort(downsets_.begin(), downsets_.end(), canonical_less);
}

RedResult build_red(const Program& program, const Order& order,
                    const State& init) {
  RedMap red;
  for (OpSet d : downsets(order)) {
    if (d == 0) {
      red.insert(0, init);
      continue;
    }
    // A maximal operation of d is one with no successor inside d.
    OpSet maximal = d;
    for (int o : members(d)) maximal &= ~(order.predecessors(o) & d);
    std::optional<State> agreed;
    int first = -1;
    for (int o : members(maximal)) {
      const auto& op = program.op(o);
      if (op.weak_read) {
        throw PreconditionError("operation '" + op.id +
                                "' is an undesugared weak read");
      }
      State candidate = op.update.apply(red.at(d & ~bit(o)), program.vars());
      if (!agreed) {
        agreed = std::move(candidate);
        first = o;
      } else if (candidate != *agreed) {
        return E2Violation{d, first, o, *agreed, std::move(candidate)};
      }
    }
    red.insert(d, std::move(*agreed));
  }
  return red;
}

Verdict validate_execution(const Program& program, const Order& order,
                           OpSet carrier, const State& init) {
  if (!is_downset(program.order(), carrier)) {
    throw PreconditionError("executed set " + program.label_list(carrier) +
                            " is not a prefix of the program");
  }
  if (!subset(carrier, order.carrier())) {
    throw PreconditionError("execution order does not cover the executed set");
  }
  const Order exec = order.restricted(carrier);
  if (!exec.is_strict()) {
    throw PreconditionError("execution order is not a strict order");
  }
  Edge missing;
  if (exec.first_missing(program.order().restricted(carrier), missing)) {
    return OrderViolation{missing};
  }
  for (int a : members(carrier)) {
    for (int b : members(carrier)) {
      if (a >= b || exec.comparable(a, b)) continue;
      if (auto r = shared_conflict(program.op(a), program.op(b))) {
        return ConflictViolation{a, b, *r};
      }
    }
  }
  auto red = build_red(program, exec, init);
  if (auto* e2 = std::get_if<E2Violation>(&red)) return *e2;
  const auto& map = std::get<RedMap>(red);
  for (int o : members(carrier)) {
    const State& seen = map.at(before(exec, o));
    if (!eval_guard(program.op(o).guard, seen)) return E1Violation{o, seen};
  }
  return Valid{};
}

std::string describe(const Verdict& v, const Program& program) {
  const auto& vars = program.vars();
  auto label = [&](int o) { return program.op(o).id; };
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Valid>) {
          return "valid";
        } else if constexpr (std::is_same_v<T, E1Violation>) {
          return "E1: guard of " + label(x.op) + " fails at {" +
                 vars.render(x.state) + "}";
        } else if constexpr (std::is_same_v<T, E2Violation>) {
          return "E2: at " + program.label_list(x.downset) + " " +
                 label(x.op_a) + " gives {" + vars.render(x.state_a) + "} but " +
                 label(x.op_b) + " gives {" + vars.render(x.state_b) + "}";
        } else if constexpr (std::is_same_v<T, OrderViolation>) {
          return "order: missing program edge " + label(x.missing.first) +
                 " < " + label(x.missing.second);
        } else {
          return "conflict: " + label(x.op_a) + " and " + label(x.op_b) +
                 " share '" + x.resource + "' but are unordered";
        }
      },
      v);
}

}  // namespace ccm
