#include "ccm/tso.hpp"

#include <algorithm>

#include "ccm/error.hpp"
#include "ccm/execution.hpp"

namespace ccm::tso {

namespace {

enum class Shape { kRead, kWrite, kRmw, kOther };

// Variable tested by a single-location guard (`v`, `!v`, `v == c`, `v != c`);
// nullopt for `true`; -1 when the guard is not a single-location test.
std::optional<int> tested_var(const Expr& g) {
  using K = Expr::Kind;
  if (g.is_true()) return std::nullopt;
  if (g.kind() == K::kVar) return g.var_index();
  if (g.kind() == K::kNot && g.args()[0].kind() == K::kVar) {
    return g.args()[0].var_index();
  }
  if (g.kind() == K::kEq || g.kind() == K::kNe) {
    const auto& a = g.args()[0];
    const auto& b = g.args()[1];
    if (a.kind() == K::kVar && b.is_constant()) return a.var_index();
    if (b.kind() == K::kVar && a.is_constant()) return b.var_index();
  }
  return -1;
}

Shape shape_of(const Operation& op) {
  if (op.weak_read) return Shape::kOther;
  const auto tested = tested_var(op.guard);
  if (tested && *tested < 0) return Shape::kOther;
  if (op.update.is_skip()) return Shape::kRead;
  if (!tested) {
    for (const auto& a : op.update.assignments()) {
      if (!a.value.is_constant()) return Shape::kOther;
    }
    return Shape::kWrite;
  }
  const auto targets = op.update.targets();
  const auto reads = op.update.reads();
  if (targets == std::set<int>{*tested} &&
      std::all_of(reads.begin(), reads.end(),
                  [&](int v) { return v == *tested; })) {
    return Shape::kRmw;
  }
  return Shape::kOther;
}

bool buffered_in(const Operation& op, const TsoContext& ctx) {
  if (shape_of(op) == Shape::kRmw) return false;
  if (ctx.mode == Mode::kPlain) return true;
  for (int v : op.update.targets()) {
    const auto& c = ctx.classes[static_cast<std::size_t>(v)];
    if (c.shared || c.owner != *op.thread) return false;
  }
  return true;
}

// Memory overlaid with the thread's buffer: the newest buffered value of
// each variable, else memory.
State forwarded_view(const TsoConfiguration& c, int thread) {
  State view = c.memory;
  for (const auto& w : c.buffers[static_cast<std::size_t>(thread)]) {
    for (auto [v, val] : w.writes) view.set(static_cast<std::size_t>(v), val);
  }
  return view;
}

std::vector<std::pair<int, int>> observe(const Operation& op, const State& s) {
  std::vector<std::pair<int, int>> out;
  for (int v : op.guard.vars()) out.emplace_back(v, s[static_cast<std::size_t>(v)]);
  return out;
}

bool preds_executed(const TsoConfiguration& c, const Program& p, int op) {
  for (int q : members(p.order().predecessors(op))) {
    if (c.executed_at[static_cast<std::size_t>(q)] < 0) return false;
  }
  return true;
}

bool buffers_empty(const TsoConfiguration& c) {
  return std::all_of(c.buffers.begin(), c.buffers.end(),
                     [](const auto& b) { return b.empty(); });
}

}  // namespace

const char* to_string(Mode m) {
  return m == Mode::kPlain ? "plain" : "disciplined";
}

VarClasses classify_variables(const Program& program,
                              const std::map<int, VarClass>& declared) {
  const std::size_t n = program.vars().size();
  std::vector<std::set<int>> writers(n);
  std::vector<std::set<int>> readers(n);
  for (const auto& op : program.ops()) {
    if (!op.thread) continue;
    for (int v : op.update.targets()) writers[static_cast<std::size_t>(v)].insert(*op.thread);
    std::set<int> reads = op.guard.vars();
    for (int v : op.update.reads()) reads.insert(v);
    if (op.weak_read) reads.insert(op.weak_read->source);
    for (int v : reads) readers[static_cast<std::size_t>(v)].insert(*op.thread);
  }
  VarClasses out(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (auto it = declared.find(static_cast<int>(v)); it != declared.end()) {
      const VarClass& d = it->second;
      if (!d.shared) {
        for (int w : writers[v]) {
          if (w != d.owner) {
            throw ValidationError("variable '" + program.vars()[v].name +
                                  "' declared unshared but written by thread '" +
                                  program.threads()[static_cast<std::size_t>(w)] +
                                  "'");
          }
        }
      }
      out[v] = d;
    } else if (writers[v].size() == 1) {
      out[v] = VarClass::owned_by(*writers[v].begin());
    } else if (writers[v].empty() && readers[v].size() == 1) {
      out[v] = VarClass::owned_by(*readers[v].begin());
    } else {
      out[v] = VarClass::shared_var();
    }
  }
  return out;
}

CheckReport check_shapes(const Program& program, const VarClasses& classes) {
  CheckReport report;
  auto fail = [&](const Operation& op, std::string why) {
    report.add({"shape", {op.id}, {}, {}, std::move(why)});
  };
  for (const auto& op : program.ops()) {
    if (op.placement != Placement::kThread) continue;
    if (!op.thread) {
      fail(op, op.id + " belongs to no thread");
      continue;
    }
    const Shape shape = shape_of(op);
    if (shape == Shape::kOther) {
      fail(op, op.id +
                   " is not a single-location read, a constant write, or a "
                   "read-modify-write");
      continue;
    }
    for (int v : op.update.targets()) {
      const auto& c = classes[static_cast<std::size_t>(v)];
      if (!c.shared && c.owner != *op.thread) {
        fail(op, op.id + " writes '" + program.vars()[static_cast<std::size_t>(v)].name +
                     "', owned by another thread");
      }
    }
  }
  const int n = static_cast<int>(program.size());
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const auto& oa = program.op(a);
      const auto& ob = program.op(b);
      if (oa.thread && ob.thread && *oa.thread != *ob.thread &&
          program.order().precedes(a, b)) {
        report.add({"shape",
                    {oa.id, ob.id},
                    {},
                    {},
                    "order edge " + oa.id + " < " + ob.id + " crosses threads"});
      }
    }
  }
  return report;
}

bool TsoConfiguration::done(const Program& program) const {
  for (std::size_t i = 0; i < program.size(); ++i) {
    if (executed_at[i] < 0) return false;
  }
  return buffers_empty(*this);
}

TsoConfiguration initial_configuration(const Program& program,
                                       const State& init) {
  TsoConfiguration c;
  c.memory = init;
  c.buffers.resize(program.threads().size());
  c.pc.assign(program.threads().size(), 0);
  c.executed_at.assign(program.size(), -1);
  c.committed_at.assign(program.size(), -1);
  return c;
}

std::vector<std::pair<Action, TsoConfiguration>> step(
    const TsoConfiguration& config, const TsoContext& ctx) {
  const Program& p = ctx.program;
  const auto& vars = p.vars();
  std::vector<std::pair<Action, TsoConfiguration>> out;

  for (std::size_t t = 0; t < p.threads().size(); ++t) {
    const int thread = static_cast<int>(t);
    const auto ops = p.thread_ops(thread);
    if (config.pc[t] < ops.size()) {
      const int o = ops[config.pc[t]];
      const auto& op = p.op(o);
      if (preds_executed(config, p, o)) {
        TsoConfiguration next = config;
        const std::int64_t ts = ++next.clock;
        const Shape shape = shape_of(op);
        if (op.update.is_skip()) {
          const State view = forwarded_view(config, thread);
          if (eval_guard(op.guard, view)) {
            next.pc[t]++;
            next.executed_at[static_cast<std::size_t>(o)] = ts;
            out.push_back({{Action::Kind::kRead, thread, o, ts, observe(op, view)},
                           std::move(next)});
          }
        } else if (shape == Shape::kWrite && buffered_in(op, ctx)) {
          const State view = forwarded_view(config, thread);
          BufferedWrite w;
          w.op = o;
          const State after = op.update.apply(view, vars);
          for (int v : op.update.targets()) {
            w.writes.emplace_back(v, after[static_cast<std::size_t>(v)]);
          }
          next.buffers[t].push_back(std::move(w));
          next.pc[t]++;
          next.executed_at[static_cast<std::size_t>(o)] = ts;
          out.push_back({{Action::Kind::kBufferedWrite, thread, o, ts, {}},
                         std::move(next)});
        } else if (config.buffers[t].empty() &&
                   eval_guard(op.guard, config.memory)) {
          next.memory = op.update.apply(config.memory, vars);
          next.pc[t]++;
          next.executed_at[static_cast<std::size_t>(o)] = ts;
          next.committed_at[static_cast<std::size_t>(o)] = ts;
          out.push_back({{Action::Kind::kInterlocked, thread, o, ts,
                          observe(op, config.memory)},
                         std::move(next)});
        }
      }
    }
    if (!config.buffers[t].empty()) {
      TsoConfiguration next = config;
      const std::int64_t ts = ++next.clock;
      const BufferedWrite w = next.buffers[t].front();
      next.buffers[t].pop_front();
      for (auto [v, val] : w.writes) next.memory.set(static_cast<std::size_t>(v), val);
      next.committed_at[static_cast<std::size_t>(w.op)] = ts;
      out.push_back({{Action::Kind::kDrain, thread, w.op, ts, {}}, std::move(next)});
    }
  }

  if (buffers_empty(config)) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      const int o = static_cast<int>(i);
      const auto& op = p.op(o);
      if (op.thread || config.executed_at[i] >= 0) continue;
      if (!preds_executed(config, p, o)) continue;
      if (!eval_guard(op.guard, config.memory)) continue;
      TsoConfiguration next = config;
      const std::int64_t ts = ++next.clock;
      next.memory = op.update.apply(config.memory, vars);
      next.executed_at[i] = ts;
      if (!op.update.is_skip()) next.committed_at[i] = ts;
      out.push_back({{Action::Kind::kGlobal, -1, o, ts, observe(op, config.memory)},
                     std::move(next)});
    }
  }
  return out;
}

std::string describe(const Action& a, const Program& program) {
  const auto& op = program.op(a.op);
  const auto& vars = program.vars();
  switch (a.kind) {
    case Action::Kind::kBufferedWrite:
      return to_string(op.update, vars);
    case Action::Kind::kInterlocked:
      return "locked " + (op.guard.is_true() ? "" : "[" + to_string(op.guard, vars) + "] ") +
             to_string(op.update, vars);
    case Action::Kind::kRead:
      return op.guard.is_true() ? "skip" : "wait " + to_string(op.guard, vars);
    case Action::Kind::kDrain:
      return "drain(" + to_string(op.update, vars) + ")";
    case Action::Kind::kGlobal:
      return op.id + ": " +
             (op.guard.is_true() ? "" : "[" + to_string(op.guard, vars) + "] ") +
             to_string(op.update, vars);
  }
  return "?";
}

std::vector<TsoTrace> explore(const Program& program, const State& init,
                              const VarClasses& classes, Mode mode,
                              const TsoLimits& limits) {
  if (classes.size() != program.vars().size()) {
    throw PreconditionError("variable classification does not match program");
  }
  const TsoContext ctx{program, classes, mode};
  std::vector<TsoTrace> traces;
  std::vector<Action> path;
  auto dfs = [&](auto&& self, const TsoConfiguration& c) -> void {
    auto succ = step(c, ctx);
    if (succ.empty()) {
      if (traces.size() >= limits.max_traces) {
        throw CapExceeded("more than " + std::to_string(limits.max_traces) +
                          " TSO traces");
      }
      traces.push_back({path, c, c.done(program)});
      return;
    }
    for (auto& [action, next] : succ) {
      path.push_back(std::move(action));
      self(self, next);
      path.pop_back();
    }
  };
  dfs(dfs, initial_configuration(program, init));
  return traces;
}

Order derived_order(const TsoTrace& trace, const Program& program) {
  const auto& c = trace.final_config;
  OpSet executed = 0;
  for (std::size_t i = 0; i < program.size(); ++i) {
    if (c.executed_at[i] >= 0) executed |= bit(static_cast<int>(i));
  }
  Order e = program.order().restricted(executed);
  for (std::size_t i = 0; i < program.size(); ++i) {
    const int o = static_cast<int>(i);
    if (c.executed_at[i] < 0) continue;
    for (std::size_t j = 0; j < program.size(); ++j) {
      const int w = static_cast<int>(j);
      if (c.committed_at[j] < 0 || c.committed_at[j] >= c.executed_at[i]) continue;
      e.add(w, o);
      for (int q : members(program.order().predecessors(w))) e.add(q, o);
    }
  }
  for (int a : members(e.carrier())) {
    if (e.precedes(a, a)) {
      throw InternalError("derived order is reflexive at " + program.op(a).id);
    }
    for (int b : members(e.predecessors(a))) {
      for (int x : members(e.predecessors(b))) {
        if (!e.precedes(x, a)) {
          throw InternalError("derived order not transitive: " +
                              program.op(x).id + " < " + program.op(b).id +
                              " < " + program.op(a).id);
        }
      }
    }
  }
  return e;
}

BridgeResult bridge_check(const Program& program, const State& init,
                          const VarClasses& classes, Mode mode,
                          const TsoLimits& limits) {
  BridgeResult result;
  const auto traces = explore(program, init, classes, mode, limits);
  result.traces = traces.size();
  const auto& vars = program.vars();
  for (const auto& trace : traces) {
    if (!trace.complete) continue;
    ++result.complete;
    result.behaviors.insert(trace.final_config.memory);
    std::string listing;
    for (const auto& a : trace.actions) {
      listing += (listing.empty() ? "" : "; ") + describe(a, program);
    }
    const Order order = derived_order(trace, program);
    const Verdict verdict = validate_execution(program, order, init);
    if (is_valid(verdict)) {
      ++result.valid;
    } else {
      result.report.add({"bridge",
                         {},
                         {trace.final_config.memory},
                         {vars.render(trace.final_config.memory)},
                         std::string("derived order is not a CC execution (") +
                             describe(verdict, program) + ") for trace: " +
                             listing});
      continue;
    }
    const RedMap red = std::get<RedMap>(build_red(program, order, init));
    for (const auto& a : trace.actions) {
      if (a.observed.empty()) continue;
      const State& seen = red.at(before(order, a.op));
      for (auto [v, val] : a.observed) {
        if (seen[static_cast<std::size_t>(v)] == val) continue;
        result.report.add({"read-value",
                           {program.op(a.op).id},
                           {seen},
                           {vars.render(seen)},
                           program.op(a.op).id + " observed " +
                               vars[static_cast<std::size_t>(v)].name + "=" +
                               vars.render_value(static_cast<std::size_t>(v), val) +
                               " operationally; trace: " + listing});
      }
    }
  }
  return result;
}

std::set<State> complete_behaviors(const std::vector<TsoTrace>& traces) {
  std::set<State> out;
  for (const auto& t : traces) {
    if (t.complete) out.insert(t.final_config.memory);
  }
  return out;
}

}  // namespace ccm::tso
