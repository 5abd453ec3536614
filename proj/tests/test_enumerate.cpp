#include <doctest.h>

#include <random>

#include "ccm/error.hpp"
#include "support.hpp"

using namespace ccm;
using namespace ccm::test;

namespace {

Program parse_program(const std::string& text) { return dsl::parse(text).program; }

std::set<State> sc_behaviors(const std::vector<oracle::ScRun>& runs) {
  std::set<State> out;
  for (const auto& r : runs) out.insert(r.final_state);
  return out;
}

// Random two- or three-thread programs over booleans with waits, writes and
// an occasional weak read.
Program random_program(std::mt19937_64& rng, bool weak_reads) {
  std::string text = "vars { a: bool; b: bool; c: bool; }\n";
  const char* names[] = {"a", "b", "c"};
  const int threads = 2 + static_cast<int>(rng() % 2);
  int label = 0;
  int total = 0;
  for (int t = 0; t < threads; ++t) {
    text += "thread t" + std::to_string(t) + " {";
    const int len = 1 + static_cast<int>(rng() % 2);
    for (int k = 0; k < len && total < 5; ++k, ++total) {
      const std::string l = " o" + std::to_string(label++) + ": ";
      const char* v = names[rng() % 3];
      const char* w = names[rng() % 3];
      switch (rng() % 5) {
        case 0:
          text += l + "wait " + (rng() % 2 ? "!" : "") + v + ";";
          break;
        case 1:
          text += l + v + " := " + (rng() % 2 ? "true" : "false") + ";";
          break;
        case 2:
          text += l + v + " := !" + w + ";";
          break;
        case 3:
          if (weak_reads && v != w) {
            text += l + "read " + v + " := " + w + ";";
          } else {
            text += l + "skip;";
          }
          break;
        default:
          text += l + "rmw " + v + ": !" + v + " -> " + v + " := true;";
          break;
      }
    }
    text += " }\n";
  }
  return parse_program(text);
}

}  // namespace

TEST_CASE("desugaring weak reads") {
  const Program none = corpus("sb.ccm").program;
  CHECK(desugar_reads(none).size() == 1);
  CHECK(desugar_reads(none).front() == none);

  const Program one = parse_program(
      "vars { v: bool; r: bool; } thread t { o: read r := v; }");
  const auto variants = desugar_reads(one);
  REQUIRE(variants.size() == 2);
  const VarTable& vars = one.vars();
  CHECK(to_string(variants[0].op(0).guard, vars) == "v == false");
  CHECK(to_string(variants[1].op(0).guard, vars) == "v == true");
  CHECK(to_string(variants[1].op(0).update, vars) == "r := true");

  const Program ints = parse_program(
      "vars { v: int[0..3]; r: int[0..3]; } thread t { o: read r := v; }");
  CHECK(desugar_reads(ints).size() == 4);
}

TEST_CASE("SB under CC and SC") {
  const Program p = corpus("sb.ccm").program;
  const State init = p.vars().initial_state();
  const auto cc = enumerate_cc(p, init, true);
  REQUIRE_FALSE(cc.executions.empty());
  for (const auto& e : cc.executions) {
    CHECK(e.final_state == make_state(p.vars(), {{"x", 1}, {"y", 1}}));
  }
  CHECK(behaviors(cc) == std::set<State>{make_state(p.vars(), {{"x", 1}, {"y", 1}})});
  CHECK(enumerate_sc(p, init, true).executions.empty());
  CHECK(oracle::sc_runs(p, init, true).empty());
}

TEST_CASE("Lowenstein has no complete CC execution") {
  const Program p = corpus("lowenstein.ccm").program;
  CHECK(enumerate_cc(p, p.vars().initial_state(), true).executions.empty());
  CHECK_FALSE(enumerate_cc(p, p.vars().initial_state(), false).executions.empty());
}

TEST_CASE("the diagram program runs under CC from every initial state but never under SC") {
  const Program p = corpus("fig2.ccm").program;
  for (const State& init : every_state(p.vars())) {
    CHECK_FALSE(enumerate_cc(p, init, true).executions.empty());
    CHECK(enumerate_sc(p, init, true).executions.empty());
    CHECK(oracle::sc_runs(p, init, true).empty());
  }
}

TEST_CASE("oracle on trivial programs") {
  const Program one = parse_program("vars { x: bool; } thread t { o: x := true; }");
  const auto r = enumerate_cc_oracle(one, one.vars().initial_state());
  REQUIRE(r.executions.size() == 2);
  CHECK(r.executions[0].carrier() == 0);
  CHECK(r.executions[1].carrier() == 1);

  const Program blocked = parse_program("vars { x: bool; } thread t { o: wait false; }");
  const auto b = enumerate_cc_oracle(blocked, blocked.vars().initial_state());
  REQUIRE(b.executions.size() == 1);
  CHECK(b.executions[0].carrier() == 0);

  const Program big = corpus("lowenstein-annotated.ccm").program;
  CHECK_THROWS_AS(enumerate_cc_oracle(big, big.vars().initial_state()), PreconditionError);
}

TEST_CASE("SC on a straight line and on empty results") {
  const Program line = parse_program(
      "vars { x: bool; y: bool; } thread t { a: x := true; b: wait x; c: y := !x; }");
  const auto r = enumerate_sc(line, line.vars().initial_state(), true);
  REQUIRE(r.executions.size() == 1);
  CHECK(r.executions[0].final_state == make_state(line.vars(), {{"x", 1}, {"y", 0}}));
  CHECK(behaviors(EnumerationResult{}).empty());
}

TEST_CASE("enumerate_cc agrees with the oracle on every small corpus program") {
  for (const auto& f : corpus_files()) {
    const Program p = corpus(f).program;
    if (p.size() > kOracleMaxOps) continue;
    CAPTURE(f);
    for (const State& init : every_state(p.vars())) {
      for (bool complete : {false, true}) {
        const auto fast = enumerate_cc(p, init, complete);
        const auto slow = enumerate_cc_oracle(p, init, complete);
        CHECK(execution_keys(fast) == execution_keys(slow));
        CHECK(behaviors(fast) == behaviors(slow));
      }
    }
  }
}

TEST_CASE("enumerate_cc agrees with the oracle on random programs") {
  std::mt19937_64 rng(3);
  std::size_t nonempty = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const Program p = random_program(rng, true);
    const State init = every_state(p.vars())[rng() % 8];
    const auto fast = enumerate_cc(p, init, false);
    const auto slow = enumerate_cc_oracle(p, init, false);
    CHECK(execution_keys(fast) == execution_keys(slow));
    CHECK(behaviors(fast) == behaviors(slow));
    nonempty += enumerate_cc(p, init, true).executions.empty() ? 0 : 1;
  }
  CHECK(nonempty > 30);
}

TEST_CASE("SC executions are CC executions and match the sequence oracle") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 150; ++trial) {
    const Program p = random_program(rng, false);
    const State init = every_state(p.vars())[rng() % 8];
    for (bool complete : {false, true}) {
      const auto sc = enumerate_sc(p, init, complete);
      const auto runs = oracle::sc_runs(p, init, complete);
      CHECK(sc.executions.size() == runs.size());
      CHECK(behaviors(sc) == sc_behaviors(runs));
      const auto cc_keys = execution_keys(enumerate_cc(p, init, complete));
      for (const auto& e : sc.executions) {
        CHECK(is_valid(validate_execution(p, e.order, init)));
        CHECK(cc_keys.contains(key_of(e)));
      }
    }
  }
}

TEST_CASE("prefix closure and revalidation") {
  for (const auto& f : corpus_files()) {
    const Program p = corpus(f).program;
    CAPTURE(f);
    const State init = p.vars().initial_state();
    const auto r = enumerate_cc(p, init, false);
    const auto keys = execution_keys(r);
    for (const auto& e : r.executions) {
      const auto variants = desugar_reads(p);
      CHECK(is_valid(validate_execution(variants[e.variant], e.order, init)));
      for (OpSet d : downsets(e.order)) {
        const Order sub = e.order.restricted(d);
        CHECK(keys.contains(ExecutionKey{d, sub.edges()}));
      }
    }
  }
}

TEST_CASE("caps are reported, never truncated") {
  const Program p = corpus("lowenstein.ccm").program;
  Limits tight;
  tight.max_ops = 3;
  CHECK_THROWS_AS(enumerate_cc(p, p.vars().initial_state(), false, tight), CapExceeded);
  Limits few;
  few.max_states = 4;
  CHECK_THROWS_AS(enumerate_cc(p, p.vars().initial_state(), false, few), CapExceeded);
}

TEST_CASE("enumeration output is deterministic") {
  const Program p = corpus("fig2.ccm").program;
  const auto a = enumerate_cc(p, p.vars().initial_state(), false);
  const auto b = enumerate_cc(p, p.vars().initial_state(), false);
  REQUIRE(a.executions.size() == b.executions.size());
  for (std::size_t i = 0; i < a.executions.size(); ++i) {
    CHECK(key_of(a.executions[i]) == key_of(b.executions[i]));
  }
}
