#include "ccm/annotate.hpp"

#include <random>
#include <sstream>

#include "ccm/error.hpp"

namespace ccm {

bool Predicate::holds(const State& s) const {
  if (const Expr* e = expr()) return e->holds(s);
  return states()->contains(s);
}

StateSet Predicate::extension(const StateSpace& space) const {
  if (const StateSet* set = states()) return *set;
  StateSet out;
  space.for_each([&](const State& s) {
    if (expr()->holds(s)) out.insert(s);
  });
  return out;
}

namespace {

std::vector<Expr> literals(const VarTable& vars) {
  std::vector<Expr> out;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const int v = static_cast<int>(i);
    if (vars[i].domain.boolean) {
      out.push_back(Expr::var(v));
      out.push_back(Expr::negate(Expr::var(v)));
    } else {
      for (int c = 0; c <= vars[i].domain.max; ++c) {
        out.push_back(Expr::eq(Expr::var(v), Expr::integer(c)));
      }
    }
  }
  return out;
}

Expr minterm(const State& s, const VarTable& vars) {
  std::optional<Expr> acc;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const int v = static_cast<int>(i);
    Expr lit = vars[i].domain.boolean
                   ? (s[i] ? Expr::var(v) : Expr::negate(Expr::var(v)))
                   : Expr::eq(Expr::var(v), Expr::integer(s[i]));
    acc = acc ? Expr::conj(std::move(*acc), std::move(lit)) : std::move(lit);
  }
  return acc ? *acc : Expr::boolean(true);
}

}  // namespace

Expr minimal_expr(const StateSet& states, const VarTable& vars) {
  const StateSpace space(vars);
  if (states.empty()) return Expr::boolean(false);
  if (states.size() == space.size()) return Expr::boolean(true);
  auto matches = [&](const Expr& e) {
    bool ok = true;
    space.for_each([&](const State& s) {
      if (ok && e.holds(s) != states.contains(s)) ok = false;
    });
    return ok;
  };
  const auto lits = literals(vars);
  for (const auto& l : lits) {
    if (matches(l)) return l;
  }
  for (std::size_t i = 0; i < lits.size(); ++i) {
    for (std::size_t j = i + 1; j < lits.size(); ++j) {
      Expr c = Expr::conj(lits[i], lits[j]);
      if (matches(c)) return c;
      Expr d = Expr::disj(lits[i], lits[j]);
      if (matches(d)) return d;
    }
  }
  std::optional<Expr> acc;
  for (const auto& s : states) {
    Expr m = minterm(s, vars);
    acc = acc ? Expr::disj(std::move(*acc), std::move(m)) : std::move(m);
  }
  return *acc;
}

std::string to_string(const Predicate& p, const VarTable& vars) {
  if (const Expr* e = p.expr()) return to_string(*e, vars);
  return to_string(minimal_expr(*p.states(), vars), vars);
}

StateSet project_states(const StateSet& states, std::span<const int> vars) {
  StateSet out;
  for (const auto& s : states) {
    State p(vars.size());
    for (std::size_t i = 0; i < vars.size(); ++i) {
      p.set(i, s[static_cast<std::size_t>(vars[i])]);
    }
    out.insert(std::move(p));
  }
  return out;
}

void Annotation::set(int from, int to, Predicate p) {
  if (from == to) {
    throw ValidationError("annotation on a pair (o, o) is not allowed");
  }
  map_[{from, to}] = std::move(p);
}

const Predicate& Annotation::at(int from, int to) const {
  static const Predicate kTrue;
  auto it = map_.find({from, to});
  return it == map_.end() ? kTrue : it->second;
}

namespace {

void require_keys(const Annotation& a, const Program& program) {
  const int n = static_cast<int>(program.size());
  for (const auto& [key, pred] : a.entries()) {
    if (key.first < 0 || key.second < 0 || key.first >= n || key.second >= n) {
      throw ValidationError("annotation names an unknown operation");
    }
  }
}

// Incoming annotated program edges of each operation.
std::vector<std::vector<const Predicate*>> incoming(const Annotation& a,
                                                    const Program& program) {
  std::vector<std::vector<const Predicate*>> in(program.size());
  for (const auto& [key, pred] : a.entries()) {
    if (program.order().precedes(key.first, key.second)) {
      in[static_cast<std::size_t>(key.second)].push_back(&pred);
    }
  }
  return in;
}

bool all_hold(const std::vector<const Predicate*>& preds, const State& s) {
  for (const Predicate* p : preds) {
    if (!p->holds(s)) return false;
  }
  return true;
}

// Post-states of an operation; weak reads yield one state per read value
// unless the guard may be used, in which case only the value actually seen.
std::vector<State> post_states(const Operation& op, const State& s,
                               const VarTable& vars, bool use_guard) {
  if (use_guard && !eval_guard(op.guard, s)) return {};
  if (op.weak_read) {
    const auto target = static_cast<std::size_t>(op.weak_read->target);
    const auto source = static_cast<std::size_t>(op.weak_read->source);
    if (use_guard) {
      State next = s;
      next.set(target, s[source]);
      return {next};
    }
    std::vector<State> out;
    for (int c = 0; c < vars[source].domain.size(); ++c) {
      State next = s;
      next.set(target, c);
      out.push_back(std::move(next));
    }
    return out;
  }
  return {op.update.apply(s, vars)};
}

std::vector<std::string> render_all(const std::vector<State>& states,
                                    const VarTable& vars) {
  std::vector<std::string> out;
  for (const auto& s : states) out.push_back(vars.render(s));
  return out;
}

}  // namespace

Predicate derived_pre(const Annotation& a, const Program& program, int op) {
  std::vector<const Predicate*> in;
  for (int p : members(program.order().predecessors(op))) {
    if (a.contains(p, op)) in.push_back(&a.at(p, op));
  }
  std::optional<Expr> conj;
  for (const Predicate* p : in) {
    if (!p->expr()) {
      StateSet out;
      StateSpace(program.vars()).for_each([&](const State& s) {
        if (all_hold(in, s)) out.insert(s);
      });
      return Predicate(std::move(out));
    }
    conj = conj ? Expr::conj(std::move(*conj), *p->expr()) : *p->expr();
  }
  return conj ? Predicate(std::move(*conj)) : Predicate::truth();
}

CheckReport check_local(const Annotation& a, const Program& program) {
  require_keys(a, program);
  CheckReport report;
  const auto& vars = program.vars();
  const auto in = incoming(a, program);
  const StateSpace space(vars);
  for (int o = 0; o < static_cast<int>(program.size()); ++o) {
    const auto& op = program.op(o);
    std::vector<std::pair<int, const Predicate*>> out_edges;
    for (const auto& [key, pred] : a.entries()) {
      if (key.first == o) out_edges.emplace_back(key.second, &pred);
    }
    if (out_edges.empty()) continue;
    space.for_each([&](const State& s) {
      if (!all_hold(in[static_cast<std::size_t>(o)], s)) return;
      for (const State& next : post_states(op, s, vars, true)) {
        for (auto [to, pred] : out_edges) {
          if (pred->holds(next)) continue;
          report.add({"A3",
                      {op.id, program.op(to).id},
                      {s, next},
                      render_all({s, next}, vars),
                      "local correctness: executing " + op.id +
                          " breaks the assertion on (" + op.id + ", " +
                          program.op(to).id + ")"});
        }
      }
    });
  }
  return report;
}

CheckReport check_noninterference(const Annotation& a, const Program& program) {
  require_keys(a, program);
  CheckReport report;
  const auto& vars = program.vars();
  const auto in = incoming(a, program);
  const StateSpace space(vars);
  const auto& order = program.order();
  for (const auto& [key, pred] : a.entries()) {
    const auto [o, o1] = key;
    for (int o2 = 0; o2 < static_cast<int>(program.size()); ++o2) {
      if (o2 == o || o2 == o1) continue;
      if (order.precedes(o2, o) || order.precedes(o1, o2)) continue;
      const auto& interferer = program.op(o2);
      // The interferer's guard is deliberately not assumed.
      space.for_each([&](const State& s) {
        if (!pred.holds(s) || !all_hold(in[static_cast<std::size_t>(o2)], s)) {
          return;
        }
        for (const State& next : post_states(interferer, s, vars, false)) {
          if (pred.holds(next)) continue;
          report.add({"A4",
                      {program.op(o).id, program.op(o1).id, interferer.id},
                      {s, next},
                      render_all({s, next}, vars),
                      "noninterference: " + interferer.id +
                          " breaks the assertion on (" + program.op(o).id +
                          ", " + program.op(o1).id + ")"});
        }
      });
    }
  }
  return report;
}

CheckReport check_annotation(const Annotation& a, const Program& program) {
  CheckReport report = check_local(a, program);
  report.merge(check_noninterference(a, program));
  return report;
}

CheckReport check_soundness_conclusion(const Annotation& a,
                                       const Program& program,
                                       const State& init,
                                       const Limits& limits) {
  if (!check_annotation(a, program).pass) {
    throw PreconditionError(
        "annotation fails local correctness or noninterference");
  }
  CheckReport report;
  const auto& vars = program.vars();
  const auto result = enumerate_cc(program, init, false, limits);
  for (const auto& exec : result.executions) {
    const OpSet carrier = exec.carrier();
    for (const auto& [key, pred] : a.entries()) {
      if (!has(carrier, key.first) || has(carrier, key.second)) continue;
      if (pred.holds(exec.final_state)) continue;
      std::string edges;
      for (auto [x, y] : exec.order.edges()) {
        edges += " " + program.op(x).id + "<" + program.op(y).id;
      }
      report.add({"soundness",
                  {program.op(key.first).id, program.op(key.second).id},
                  {exec.final_state},
                  {vars.render(exec.final_state)},
                  "execution " + program.label_list(carrier) + " with order" +
                      edges + " violates the assertion (implementation bug)"});
    }
  }
  return report;
}

Annotation synth_strongest(const Program& program,
                           const std::vector<State>& inits,
                           const Limits& limits) {
  const int n = static_cast<int>(program.size());
  std::map<Annotation::Key, StateSet> sets;
  for (const auto& init : inits) {
    const auto result = enumerate_cc(program, init, false, limits);
    for (const auto& exec : result.executions) {
      const OpSet carrier = exec.carrier();
      for (int o : members(carrier)) {
        for (int o1 = 0; o1 < n; ++o1) {
          if (!has(carrier, o1)) sets[{o, o1}].insert(exec.final_state);
        }
      }
    }
  }
  Annotation out;
  for (int o = 0; o < n; ++o) {
    for (int o1 = 0; o1 < n; ++o1) {
      if (o == o1) continue;
      auto it = sets.find({o, o1});
      out.set(o, o1, Predicate(it == sets.end() ? StateSet{} : it->second));
    }
  }
  return out;
}

namespace {

struct RandomCase {
  Program program;
  Annotation annotation;
  State init;
};

class CaseGenerator {
 public:
  explicit CaseGenerator(std::seed_seq& seq) : rng_(seq) {}

  RandomCase make() {
    const int nvars = pick(1, 3);
    VarTable vars;
    for (int i = 0; i < nvars; ++i) {
      vars.add({"v" + std::to_string(i), Domain::boolean_domain(), 0, false});
    }
    nvars_ = nvars;
    const int nops = pick(1, 5);
    std::vector<Operation> ops;
    for (int i = 0; i < nops; ++i) {
      Operation op;
      op.id = "o" + std::to_string(i);
      op.guard = guard();
      op.update = update();
      op.form = op.update.is_skip() ? StmtForm::kWait : StmtForm::kWrite;
      ops.push_back(std::move(op));
    }
    std::vector<Edge> edges;
    for (int i = 0; i < nops; ++i) {
      for (int j = i + 1; j < nops; ++j) {
        if (chance(0.3)) edges.emplace_back(i, j);
      }
    }
    Program program(vars, std::move(ops), std::move(edges));
    Annotation annotation;
    for (int i = 0; i < nops; ++i) {
      for (int j = 0; j < nops; ++j) {
        if (i == j) continue;
        const double p = program.order().precedes(i, j) ? 0.6 : 0.15;
        if (chance(p)) annotation.set(i, j, Predicate(assertion()));
      }
    }
    State init(static_cast<std::size_t>(nvars));
    for (int i = 0; i < nvars; ++i) init.set(static_cast<std::size_t>(i), pick(0, 1));
    return {std::move(program), std::move(annotation), std::move(init)};
  }

 private:
  int pick(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

  Expr literal() {
    Expr v = Expr::var(pick(0, nvars_ - 1));
    return chance(0.5) ? v : Expr::negate(std::move(v));
  }

  Expr guard() {
    const int r = pick(0, 19);
    if (r < 10) return Expr::boolean(true);
    if (r < 15) return literal();
    if (r < 18) return Expr::conj(literal(), literal());
    return Expr::eq(Expr::var(pick(0, nvars_ - 1)), Expr::var(pick(0, nvars_ - 1)));
  }

  Update update() {
    if (chance(0.25)) return Update();
    std::vector<Assignment> as;
    const int first = pick(0, nvars_ - 1);
    as.push_back({first, rhs()});
    if (nvars_ > 1 && chance(0.3)) {
      int second = pick(0, nvars_ - 2);
      if (second >= first) ++second;
      as.push_back({second, rhs()});
    }
    return Update(std::move(as));
  }

  Expr rhs() {
    if (chance(0.5)) return Expr::boolean(chance(0.5));
    return literal();
  }

  Expr assertion() {
    const int r = pick(0, 9);
    if (r < 4) return Expr::boolean(true);
    if (r < 7) return Expr::disj(literal(), literal());
    if (r < 9) return literal();
    return Expr::conj(literal(), literal());
  }

  std::mt19937_64 rng_;
  int nvars_ = 1;
};

std::string describe_case(const RandomCase& c) {
  const auto& vars = c.program.vars();
  std::ostringstream out;
  for (const auto& op : c.program.ops()) {
    out << op.id << ":[" << to_string(op.guard, vars) << "] "
        << to_string(op.update, vars) << "; ";
  }
  out << "order:";
  for (auto [a, b] : c.program.order().edges()) out << " " << a << "<" << b;
  out << "; annotation:";
  for (const auto& [key, pred] : c.annotation.entries()) {
    out << " (" << key.first << "," << key.second
        << ")=" << to_string(pred, vars);
  }
  out << "; init={" << vars.render(c.init) << "}";
  return out.str();
}

}  // namespace

HarnessResult random_soundness_harness(std::uint64_t seed, std::size_t trials) {
  HarnessResult result;
  result.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(t)};
    CaseGenerator gen(seq);
    RandomCase c = gen.make();
    std::string line = "trial " + std::to_string(t) + ": " + describe_case(c);
    if (!check_annotation(c.annotation, c.program).pass) {
      result.cases.push_back(line + " => annotation rejected");
      continue;
    }
    ++result.annotated;
    CheckReport r = check_soundness_conclusion(c.annotation, c.program, c.init);
    result.cases.push_back(line + (r.pass ? " => sound" : " => VIOLATION"));
    if (r.pass) continue;
    // Triage: does the fast enumerator agree with the brute-force oracle?
    const bool agree =
        execution_keys(enumerate_cc(c.program, c.init, false)) ==
        execution_keys(enumerate_cc_oracle(c.program, c.init, false));
    for (auto w : r.witnesses) {
      w.detail += "; reproduce with seed " + std::to_string(seed) + " trial " +
                  std::to_string(t) + "; enumerator " +
                  (agree ? "agrees with" : "DISAGREES with") + " the oracle";
      result.report.add(std::move(w));
    }
  }
  return result;
}

}  // namespace ccm
