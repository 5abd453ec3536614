// Acceptance matrix: one PASS/FAIL line per criterion. Library results are
// compared against the brute-force oracles in support.hpp wherever one
// applies.

#include <cstdio>
#include <iostream>
#include <sstream>

#include "ccm/annotate.hpp"
#include "ccm/cli.hpp"
#include "ccm/error.hpp"
#include "ccm/ghost.hpp"
#include "ccm/tso.hpp"
#include "support.hpp"

using namespace ccm;
using namespace ccm::test;
using tso::Action;
using tso::Mode;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (ok || !pass) {
      pass = pass && ok;
      return;
    }
    pass = false;
    detail = what;
  }
};

std::set<State> oracle_sc_behaviors(const Program& p, const State& init) {
  std::set<State> out;
  for (const auto& r : oracle::sc_runs(p, init, true)) out.insert(r.final_state);
  return out;
}

std::vector<tso::TsoTrace> traces_of(const dsl::Document& doc, Mode mode) {
  const auto classes = tso::classify_variables(doc.program, doc.declared_classes);
  return tso::explore(doc.program, doc.program.vars().initial_state(), classes, mode);
}

std::size_t complete_count(const std::vector<tso::TsoTrace>& traces) {
  std::size_t n = 0;
  for (const auto& t : traces) n += t.complete ? 1 : 0;
  return n;
}

Outcome sb_litmus() {
  Outcome r;
  const dsl::Document doc = corpus("sb.ccm");
  const Program& p = doc.program;
  const State init = p.vars().initial_state();
  r.require(oracle::sc_runs(p, init, true).empty(), "oracle finds a complete SC run");
  r.require(enumerate_sc(p, init, true).executions.empty(), "sc yields an execution");
  const auto cc = enumerate_cc(p, init, true);
  r.require(!cc.executions.empty(), "cc yields nothing");
  r.require(behaviors(cc) == std::set<State>{make_state(p.vars(), {{"x", 1}, {"y", 1}})},
            "cc behaviors differ from {x=T,y=T}");
  r.require(complete_count(traces_of(doc, Mode::kPlain)) >= 1, "no complete tso-plain trace");
  return r;
}

Outcome sb_annotation() {
  Outcome r;
  const dsl::Document good = corpus("sb-annotated.ccm");
  r.require(check_local(good.annotation, good.program).pass, "outline fails A3");
  r.require(check_noninterference(good.annotation, good.program).pass, "outline fails A4");
  const dsl::Document bad = corpus("sb-strengthened.ccm");
  const Program& p = bad.program;
  const CheckReport rep = check_noninterference(bad.annotation, p);
  r.require(!rep.pass, "strengthened outline passes A4");
  r.require(rep.witnesses.size() == 1, "expected exactly one A4 witness");
  if (!rep.witnesses.empty()) {
    const Witness& w = rep.witnesses.front();
    r.require(w.ops == std::vector<std::string>{"r1", "f", "w2"}, "interferer is not w2 on (r1, f)");
    r.require(w.states == std::vector<State>{make_state(p.vars(), {{"x", 1}, {"y", 0}}),
                                             make_state(p.vars(), {{"x", 1}, {"y", 1}})},
              "witness states differ from {x:T,y:F} -> {x:T,y:T}");
  }
  return r;
}

Outcome lowenstein() {
  Outcome r;
  const dsl::Document outline = corpus("lowenstein-annotated.ccm");
  r.require(check_annotation(outline.annotation, outline.program).pass, "outline fails");
  const StateSpace space(outline.program.vars());
  r.require(derived_pre(outline.annotation, outline.program, outline.program.index_of("f"))
                .extension(space)
                .empty(),
            "final precondition is satisfiable");

  const dsl::Document doc = corpus("lowenstein.ccm");
  const Program& p = doc.program;
  r.require(enumerate_cc(p, p.vars().initial_state(), true).executions.empty(),
            "cc yields a complete execution");

  const int w1 = p.index_of("w1");
  const int w2 = p.index_of("w2");
  const int w3 = p.index_of("w3");
  const int r3 = p.index_of("r3");
  bool matched = false;
  for (const auto& t : traces_of(doc, Mode::kPlain)) {
    if (!t.complete) continue;
    int d1 = -1, d2 = -1, d3 = -1, read3 = -1;
    for (std::size_t i = 0; i < t.actions.size(); ++i) {
      const Action& a = t.actions[i];
      const int at = static_cast<int>(i);
      if (a.kind == Action::Kind::kDrain && a.op == w1) d1 = at;
      if (a.kind == Action::Kind::kDrain && a.op == w2) d2 = at;
      if (a.kind == Action::Kind::kDrain && a.op == w3) d3 = at;
      if (a.kind == Action::Kind::kRead && a.op == r3) read3 = at;
    }
    if (d1 >= 0 && d2 >= 0 && d3 >= 0 && d2 < d1 && d3 < d1 && read3 > d1) matched = true;
  }
  r.require(matched, "no tso-plain trace drains thread 1 before thread 0 and then passes r3");
  r.require(complete_count(traces_of(doc, Mode::kDisciplined)) == 0,
            "tso-disciplined completes");
  const auto classes = tso::classify_variables(p);
  r.require(classes[static_cast<std::size_t>(p.vars().index_of("x"))].shared,
            "x not inferred shared");
  return r;
}

Outcome diagram() {
  Outcome r;
  const Program p = corpus("fig2.ccm").program;
  for (const State& init : every_state(p.vars())) {
    r.require(!enumerate_cc(p, init, true).executions.empty(),
              "cc empty from " + p.vars().render(init));
    r.require(enumerate_sc(p, init, true).executions.empty(),
              "sc nonempty from " + p.vars().render(init));
    r.require(oracle::sc_runs(p, init, true).empty(),
              "oracle SC nonempty from " + p.vars().render(init));
  }
  return r;
}

Outcome ghosts() {
  Outcome r;
  const dsl::Document weak = corpus("ghost-weakread.ccm");
  const CheckReport wr = check_noninterference(weak.annotation, weak.program);
  bool c_interferes = false;
  for (const auto& w : wr.witnesses) c_interferes = c_interferes || w.ops.back() == "c";
  r.require(!wr.pass && c_interferes, "weak-read outline lacks an xw := T interference");

  const dsl::Document race = corpus("ghost-race.ccm");
  r.require(check_annotation(race.annotation, race.program).pass, "race outline fails");
  const Augmentation ra = Augmentation::from_program(race.program);
  r.require(check_projection(ra).pass, "race fails projection");
  r.require(!check_commutation_preservation(ra).pass, "race preserves commutation");
  const State rinit = ra.augmented().vars().initial_state();
  r.require(!check_ghost_soundness_semantics(ra, rinit).pass, "race simulates");
  const auto base = execution_keys(enumerate_cc(ra.base(), project(ra, rinit), false));
  const auto ext = execution_keys(enumerate_cc(ra.augmented(), rinit, false));
  r.require(!std::includes(ext.begin(), ext.end(), base.begin(), base.end()),
            "every base execution reappears under the race augmentation");

  const dsl::Document done = corpus("ghost-doneflags.ccm");
  const Augmentation da = Augmentation::from_program(done.program);
  r.require(check_projection(da).pass, "done flags fail projection");
  r.require(check_commutation_preservation(da).pass, "done flags fail commutation");
  for (const State& init : every_state(da.augmented().vars())) {
    if (!check_ghost_soundness_semantics(da, init).pass) {
      r.require(false, "done flags fail simulation");
      break;
    }
  }
  r.require(check_annotation(done.annotation, done.program).pass, "done-flag outline fails");
  return r;
}

Outcome soundness() {
  Outcome r;
  const HarnessResult h = random_soundness_harness(1, 200);
  r.require(h.trials == 200, "harness ran the wrong number of trials");
  r.require(h.report.pass, std::to_string(h.report.witnesses.size()) + " violations");
  r.require(h.annotated > 0, "no trial produced a checking annotation");
  r.detail = r.pass ? std::to_string(h.annotated) + " annotated trials" : r.detail;
  return r;
}

Outcome oracle_equivalence() {
  Outcome r;
  std::size_t programs = 0;
  for (const auto& f : corpus_files()) {
    const Program p = corpus(f).program;
    if (p.size() > kOracleMaxOps) continue;
    ++programs;
    for (const State& init : every_state(p.vars())) {
      for (bool complete : {false, true}) {
        const auto fast = enumerate_cc(p, init, complete);
        const auto slow = enumerate_cc_oracle(p, init, complete);
        r.require(execution_keys(fast) == execution_keys(slow), f + ": execution sets differ");
        r.require(behaviors(fast) == behaviors(slow), f + ": behavior sets differ");
      }
    }
  }
  if (r.pass) r.detail = std::to_string(programs) + " programs";
  return r;
}

// Read-value coherence by folding updates along the derived order.
bool reads_coherent(const Program& p, const Order& derived, const tso::TsoTrace& t,
                    const State& init) {
  for (const Action& a : t.actions) {
    if (a.kind != Action::Kind::kRead) continue;
    const auto folds = oracle::linearization_folds(p, derived, before(derived, a.op), init);
    if (folds.size() != 1) return false;
    const State& s = *folds.begin();
    for (auto [v, value] : a.observed) {
      if (s[static_cast<std::size_t>(v)] != value) return false;
    }
  }
  return true;
}

Outcome bridge() {
  Outcome r;
  for (const char* f : {"sb.ccm", "lowenstein.ccm"}) {
    const dsl::Document doc = corpus(f);
    const Program& p = doc.program;
    const State init = p.vars().initial_state();
    for (const auto& t : traces_of(doc, Mode::kDisciplined)) {
      if (!t.complete) continue;
      Order d;
      try {
        d = tso::derived_order(t, p);
      } catch (const InternalError&) {
        r.require(false, std::string(f) + ": derived order not strict");
        continue;
      }
      r.require(d.is_strict(), std::string(f) + ": derived order not strict");
      r.require(d.includes(p.order()), std::string(f) + ": derived order misses P");
      r.require(is_valid(validate_execution(p, d, init)),
                std::string(f) + ": derived order not CC-valid");
      r.require(reads_coherent(p, d, t, init), std::string(f) + ": incoherent read");
    }
  }
  const dsl::Document low = corpus("lowenstein.ccm");
  const Program& p = low.program;
  bool invalid = false;
  for (const auto& t : traces_of(low, Mode::kPlain)) {
    if (t.complete && !is_valid(validate_execution(p, tso::derived_order(t, p),
                                                   p.vars().initial_state()))) {
      invalid = true;
    }
  }
  r.require(invalid, "every plain lowenstein trace is CC-valid");
  return r;
}

Outcome single_writer() {
  Outcome r;
  for (const char* f : {"sb.ccm", "fig2.ccm"}) {
    const dsl::Document doc = corpus(f);
    const Program& p = doc.program;
    const State init = p.vars().initial_state();
    const auto plain = tso::complete_behaviors(traces_of(doc, Mode::kPlain));
    const auto disc = tso::complete_behaviors(traces_of(doc, Mode::kDisciplined));
    const auto cc = behaviors(enumerate_cc(p, init, true));
    r.require(plain == disc, std::string(f) + ": plain and disciplined behaviors differ");
    r.require(std::includes(cc.begin(), cc.end(), plain.begin(), plain.end()),
              std::string(f) + ": TSO behavior outside CC");
    const auto sc = oracle_sc_behaviors(p, init);
    r.require(std::includes(cc.begin(), cc.end(), sc.begin(), sc.end()),
              std::string(f) + ": SC behavior outside CC");
  }
  return r;
}

Outcome synthesis() {
  Outcome r;
  const Program p = corpus("sb-annotated.ccm").program;
  const auto inits = every_state(p.vars());
  const Annotation s = synth_strongest(p, inits);
  const StateSpace space(p.vars());
  auto where = [&](const char* var, int value) {
    StateSet out;
    for (const State& st : inits) {
      if (st[static_cast<std::size_t>(p.vars().index_of(var))] == value) out.insert(st);
    }
    return out;
  };
  const struct {
    const char* from;
    const char* to;
    const char* var;
    int value;
  } edges[] = {{"i", "w1", "x", 0},  {"w1", "r1", "x", 1}, {"r1", "f", "x", 1},
               {"i", "w2", "y", 0},  {"w2", "r2", "y", 1}, {"r2", "f", "y", 1}};
  for (const auto& e : edges) {
    const int a = p.index_of(e.from);
    const int b = p.index_of(e.to);
    const StateSet want = where(e.var, e.value);
    r.require(s.at(a, b).extension(space) == want,
              std::string("(") + e.from + ", " + e.to + ") differs");

    // The same sets, gathered from the oracle enumeration.
    StateSet seen;
    for (const State& init : inits) {
      for (const auto& ex : enumerate_cc_oracle(p, init).executions) {
        if (has(ex.carrier(), a) && !has(ex.carrier(), b)) seen.insert(ex.final_state);
      }
    }
    r.require(seen == want, std::string("oracle disagrees on (") + e.from + ", " + e.to + ")");
  }
  return r;
}

Outcome round_trip() {
  Outcome r;
  for (const auto& f : corpus_files()) {
    const dsl::Document doc = corpus(f);
    const std::string once = dsl::serialize(doc);
    r.require(dsl::parse(once) == doc, f + ": parse of serialize differs");
    r.require(dsl::serialize(dsl::parse(once)) == once, f + ": serialize not idempotent");
    cli::EnumerateOptions o;
    o.file = corpus_path(f);
    o.json = true;
    std::ostringstream a, b, err;
    cli::cmd_enumerate(o, a, err);
    cli::cmd_enumerate(o, b, err);
    r.require(cli::strip_wall_time(a.str()) == cli::strip_wall_time(b.str()),
              f + ": JSON differs between runs");
  }
  return r;
}

}  // namespace

int main() {
  const struct {
    const char* name;
    Outcome (*run)();
  } criteria[] = {
      {"sb litmus", sb_litmus},
      {"sb annotation", sb_annotation},
      {"lowenstein", lowenstein},
      {"diagram program", diagram},
      {"ghost examples", ghosts},
      {"soundness harness", soundness},
      {"oracle equivalence", oracle_equivalence},
      {"tso bridge", bridge},
      {"single writer", single_writer},
      {"strongest annotation", synthesis},
      {"round trip and determinism", round_trip},
  };
  int failed = 0;
  int n = 0;
  for (const auto& c : criteria) {
    ++n;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s  %2d  %s%s%s\n", o.pass ? "PASS" : "FAIL", n, c.name,
                o.detail.empty() ? "" : "  ", o.detail.c_str());
  }
  std::printf("%d/%d criteria passed\n", n - failed, n);
  return failed == 0 ? 0 : 1;
}
