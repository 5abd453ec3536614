#include "ccm/program.hpp"

#include "ccm/error.hpp"

namespace ccm {

void check_operation(const Operation& op, const VarTable& vars) {
  require_bool(op.guard, vars);
  check_update(op.update, vars);
  const auto targets = op.update.targets();
  for (int g : op.ghost_targets) {
    if (!targets.contains(g)) {
      throw ValidationError("ghost target of '" + op.id +
                            "' is not assigned by its update");
    }
  }
  if (op.weak_read) {
    const auto n = vars.size();
    const auto t = static_cast<std::size_t>(op.weak_read->target);
    const auto s = static_cast<std::size_t>(op.weak_read->source);
    if (t >= n || s >= n) {
      throw ValidationError("weak read in '" + op.id +
                            "' names an undeclared variable");
    }
    if (vars[t].domain != vars[s].domain) {
      throw ValidationError("weak read in '" + op.id +
                            "' between variables of different domains");
    }
  }
}

Program::Program(VarTable vars, std::vector<Operation> ops,
                 std::vector<Edge> edges, std::vector<std::string> threads)
    : vars_(std::move(vars)), ops_(std::move(ops)), threads_(std::move(threads)) {
  if (ops_.size() > kMaxOps) {
    throw ValidationError("programs are limited to " +
                          std::to_string(kMaxOps) + " operations");
  }
  const int n = static_cast<int>(ops_.size());
  order_ = Order(ops_.size(), all());

  std::optional<int> init;
  std::optional<int> fin;
  std::vector<int> last_in_thread(threads_.size(), -1);
  for (int i = 0; i < n; ++i) {
    const auto& op = ops_[static_cast<std::size_t>(i)];
    for (int j = 0; j < i; ++j) {
      if (ops_[static_cast<std::size_t>(j)].id == op.id) {
        throw ValidationError("duplicate operation label '" + op.id + "'");
      }
    }
    check_operation(op, vars_);
    switch (op.placement) {
      case Placement::kInit:
        if (init) throw ValidationError("more than one init operation");
        init = i;
        break;
      case Placement::kFinal:
        if (fin) throw ValidationError("more than one final operation");
        fin = i;
        break;
      case Placement::kThread:
        break;
    }
    if (op.thread) {
      if (op.placement != Placement::kThread) {
        throw ValidationError("init/final operation '" + op.id +
                              "' cannot belong to a thread");
      }
      const auto t = static_cast<std::size_t>(*op.thread);
      if (*op.thread < 0 || t >= threads_.size()) {
        throw ValidationError("operation '" + op.id +
                              "' names an unknown thread");
      }
      if (last_in_thread[t] >= 0) order_.add(last_in_thread[t], i);
      last_in_thread[t] = i;
    }
  }
  for (int i = 0; i < n; ++i) {
    if (init && i != *init) order_.add(*init, i);
    if (fin && i != *fin) order_.add(i, *fin);
  }
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n || b >= n) {
      throw ValidationError("order edge names an unknown operation");
    }
    order_.add(a, b);
  }
  order_.close();
  if (!order_.irreflexive()) {
    throw ValidationError("program order contains a cycle");
  }
}

std::optional<int> Program::find(std::string_view id) const {
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    if (ops_[i].id == id) return static_cast<int>(i);
  }
  return std::nullopt;
}

int Program::index_of(std::string_view id) const {
  if (auto i = find(id)) return *i;
  throw LookupError("unknown operation label '" + std::string(id) + "'");
}

std::vector<int> Program::thread_ops(int thread) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    if (ops_[i].thread == thread) out.push_back(static_cast<int>(i));
  }
  return out;
}

bool Program::has_weak_reads() const {
  for (const auto& op : ops_) {
    if (op.weak_read) return true;
  }
  return false;
}

std::string Program::label_list(OpSet set) const {
  std::string out = "{";
  for (int o : members(set)) {
    if (out.size() > 1) out += ",";
    out += op(o).id;
  }
  return out + "}";
}

}  // namespace ccm
