#include "ccm/ghost.hpp"

#include "ccm/error.hpp"
#include "ccm/execution.hpp"

namespace ccm {

namespace {

bool reads_ghost(const std::set<int>& vars, std::size_t concrete) {
  for (int v : vars) {
    if (static_cast<std::size_t>(v) >= concrete) return true;
  }
  return false;
}

void require_concrete_ops(const Program& p) {
  if (p.has_weak_reads()) {
    throw PreconditionError("ghost checks need a program without weak reads");
  }
}

std::string edge_text(const Program& p, const Order& order) {
  std::string out;
  for (auto [a, b] : order.edges()) {
    out += (out.empty() ? "" : " ") + p.op(a).id + "<" + p.op(b).id;
  }
  return out.empty() ? "(none)" : out;
}

}  // namespace

Augmentation::Augmentation(Program base, Program augmented)
    : base_(std::move(base)), augmented_(std::move(augmented)) {
  const auto& bv = base_.vars();
  const auto& av = augmented_.vars();
  if (av.size() < bv.size()) {
    throw ValidationError("augmented program drops base variables");
  }
  for (std::size_t i = 0; i < av.size(); ++i) {
    if (i < bv.size() ? !(av[i] == bv[i]) : !av[i].ghost) {
      throw ValidationError("augmented variables must be the base variables "
                            "followed by ghost variables");
    }
  }
  if (base_.size() != augmented_.size() ||
      base_.threads() != augmented_.threads()) {
    throw ValidationError("augmentation must keep the base operations");
  }
  for (std::size_t i = 0; i < base_.size(); ++i) {
    const auto& b = base_.ops()[i];
    const auto& a = augmented_.ops()[i];
    if (b.id != a.id || b.thread != a.thread || b.placement != a.placement) {
      throw ValidationError("augmented operation '" + a.id +
                            "' does not match base operation '" + b.id + "'");
    }
    if (!(b.guard == a.guard) || b.weak_read != a.weak_read) {
      throw ValidationError("augmented operation '" + a.id +
                            "' changes the base guard");
    }
  }
  if (!(base_.order() == augmented_.order())) {
    throw ValidationError("augmentation must keep the program order");
  }
}

Augmentation Augmentation::from_program(const Program& augmented) {
  const VarTable base_vars = augmented.vars().concrete();
  const std::size_t concrete = base_vars.size();
  std::vector<Operation> ops;
  for (const auto& op : augmented.ops()) {
    Operation b = op;
    if (reads_ghost(op.guard.vars(), concrete)) {
      throw ValidationError("guard of '" + op.id + "' reads ghost state");
    }
    std::vector<Assignment> kept;
    for (const auto& a : op.update.assignments()) {
      if (op.ghost_targets.contains(a.var)) continue;
      if (static_cast<std::size_t>(a.var) >= concrete ||
          reads_ghost(a.value.vars(), concrete)) {
        throw ValidationError("concrete assignment in '" + op.id +
                              "' touches ghost state");
      }
      kept.push_back(a);
    }
    b.update = Update(std::move(kept));
    b.ghost_targets.clear();
    ops.push_back(std::move(b));
  }
  Program base(base_vars, std::move(ops), augmented.order().edges(),
               augmented.threads());
  return Augmentation(std::move(base), augmented);
}

State project(const State& extended, std::size_t concrete_count) {
  State out(concrete_count);
  for (std::size_t i = 0; i < concrete_count; ++i) out.set(i, extended[i]);
  return out;
}

CheckReport check_projection(const Augmentation& aug) {
  require_concrete_ops(aug.augmented());
  CheckReport report;
  const auto& base = aug.base();
  const auto& ext = aug.augmented();
  const StateSpace space(ext.vars());
  for (std::size_t i = 0; i < base.size(); ++i) {
    const auto& bop = base.ops()[i];
    const auto& aop = ext.ops()[i];
    space.for_each([&](const State& sigma) {
      const State lhs = project(aug, aop.update.apply(sigma, ext.vars()));
      const State rhs = bop.update.apply(project(aug, sigma), base.vars());
      if (lhs == rhs) return;
      report.add({"projection",
                  {aop.id},
                  {sigma, lhs, rhs},
                  {ext.vars().render(sigma), base.vars().render(lhs),
                   base.vars().render(rhs)},
                  "ghost code of " + aop.id + " changes concrete state"});
    });
  }
  return report;
}

CheckReport check_commutation_preservation(const Augmentation& aug) {
  if (!check_projection(aug).pass) {
    throw PreconditionError("augmentation writes concrete state");
  }
  CheckReport report;
  const auto& base = aug.base();
  const auto& ext = aug.augmented();
  const std::size_t concrete = aug.concrete_count();

  VarTable ghost_vars;
  for (std::size_t i = concrete; i < ext.vars().size(); ++i) {
    ghost_vars.add(ext.vars()[i]);
  }
  const StateSpace concrete_space(base.vars());
  const StateSpace ghost_space(ghost_vars);

  const int n = static_cast<int>(base.size());
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (base.order().comparable(a, b)) continue;
      const auto& ba = base.op(a);
      const auto& bb = base.op(b);
      bool declared_conflict = false;
      for (const auto& r : ba.conflict_vars) {
        declared_conflict = declared_conflict || bb.conflict_vars.contains(r);
      }
      if (declared_conflict) continue;
      const auto& ua = ext.op(a).update;
      const auto& ub = ext.op(b).update;
      concrete_space.for_each([&](const State& s) {
        if (!commute_at(ba.update, bb.update, s, base.vars())) return;
        ghost_space.for_each([&](const State& g) {
          State sigma(ext.vars().size());
          for (std::size_t i = 0; i < concrete; ++i) sigma.set(i, s[i]);
          for (std::size_t i = 0; i < g.size(); ++i) sigma.set(concrete + i, g[i]);
          if (commute_at(ua, ub, sigma, ext.vars())) return;
          report.add({"commutation",
                      {ba.id, bb.id},
                      {s, sigma},
                      {base.vars().render(s), ext.vars().render(sigma)},
                      "base updates of " + ba.id + " and " + bb.id +
                          " commute but their augmented updates do not"});
        });
      });
    }
  }
  return report;
}

CheckReport check_ghost_soundness_semantics(const Augmentation& aug,
                                            const State& init,
                                            const Limits& limits) {
  CheckReport report;
  const auto& base = aug.base();
  const auto base_runs = enumerate_cc(base, project(aug, init), false, limits);
  const auto aug_keys =
      execution_keys(enumerate_cc(aug.augmented(), init, false, limits));
  for (const auto& exec : base_runs.executions) {
    if (aug_keys.contains(key_of(exec))) continue;
    std::vector<std::string> labels;
    for (int o : members(exec.carrier())) labels.push_back(base.op(o).id);
    report.add({"simulation",
                labels,
                {exec.final_state},
                {base.vars().render(exec.final_state)},
                "base execution " + base.label_list(exec.carrier()) +
                    " with order " + edge_text(base, exec.order) +
                    " has no augmented counterpart"});
  }
  return report;
}

Augmentation with_done_flags(const Program& base) {
  VarTable vars = base.vars();
  std::vector<Operation> ops = base.ops();
  for (auto& op : ops) {
    const int flag = vars.add({op.id + "_done", Domain::boolean_domain(), 0, true});
    op.update.append({{flag, Expr::boolean(true)}});
    op.ghost_targets.insert(flag);
  }
  Program augmented(std::move(vars), std::move(ops), base.order().edges(),
                    base.threads());
  return Augmentation(base, std::move(augmented));
}

}  // namespace ccm
