#include <doctest.h>

#include "ccm/annotate.hpp"
#include "ccm/error.hpp"
#include "ccm/ghost.hpp"
#include "support.hpp"

using namespace ccm;
using namespace ccm::test;

namespace {

const char* const kRaceWithLock = R"(
vars { x: bool; y: bool; }
ghost { xw: bool; yw: bool; }
init i: x, y := false, false;
thread t0 { a: x := true; c: wait !y; }
thread t1 { b: y := true; d: wait !x; }
final f: skip;
conflict { a: m; b: m; }
augment { i: xw, yw := false, false; a: xw := !yw; b: yw := !xw; }
)";

// Executions of the base program from project(init) that have no augmented
// counterpart with the same executed set and order.
std::size_t missing_executions(const Augmentation& aug, const State& init) {
  const auto base = execution_keys(enumerate_cc(aug.base(), project(aug, init), false));
  const auto ext = execution_keys(enumerate_cc(aug.augmented(), init, false));
  std::size_t missing = 0;
  for (const auto& k : base) missing += ext.contains(k) ? 0 : 1;
  return missing;
}

}  // namespace

TEST_CASE("projection drops the ghost suffix") {
  CHECK(project(State{1, 0, 1, 1}, 2) == State{1, 0});
  CHECK(project(State{1, 0}, 2) == State{1, 0});
  const Augmentation aug = Augmentation::from_program(corpus("ghost-race.ccm").program);
  CHECK(aug.concrete_count() == 2);
  CHECK(aug.base().vars().size() == 2);
  CHECK(aug.augmented().vars().size() == 4);
  CHECK(aug.base().op(aug.base().index_of("a")).update.assignments().size() == 1);
  CHECK(aug.augmented().op(aug.augmented().index_of("a")).update.assignments().size() == 2);
}

TEST_CASE("ghost code writing concrete state fails projection") {
  const Program p = dsl::parse(R"(
vars { x: bool; y: bool; }
ghost { g: bool; }
thread t0 { a: wait !y; }
thread t1 { b: y := true; }
augment { a: x, g := true, true; }
)").program;
  const Augmentation aug = Augmentation::from_program(p);
  const CheckReport r = check_projection(aug);
  REQUIRE_FALSE(r.pass);
  CHECK(r.witnesses.front().condition == "projection");
  CHECK(r.witnesses.front().ops.front() == "a");
  CHECK_THROWS_AS(check_commutation_preservation(aug), PreconditionError);
}

TEST_CASE("racing ghost writes break commutation and simulation") {
  const Augmentation aug = Augmentation::from_program(corpus("ghost-race.ccm").program);
  CHECK(check_projection(aug).pass);
  const CheckReport comm = check_commutation_preservation(aug);
  REQUIRE_FALSE(comm.pass);
  bool all_false = false;
  for (const auto& w : comm.witnesses) {
    CHECK(w.condition == "commutation");
    CHECK(std::set<std::string>(w.ops.begin(), w.ops.end()) ==
          std::set<std::string>{"a", "b"});
    for (const State& s : w.states) {
      if (s == State{0, 0, 0, 0}) all_false = true;
    }
  }
  CHECK(all_false);

  const State init = aug.augmented().vars().initial_state();
  const CheckReport sim = check_ghost_soundness_semantics(aug, init);
  CHECK_FALSE(sim.pass);
  CHECK(sim.witnesses.front().condition == "simulation");
  CHECK(missing_executions(aug, init) > 0);
}

TEST_CASE("a declared conflict removes the race") {
  const Augmentation aug = Augmentation::from_program(dsl::parse(kRaceWithLock).program);
  CHECK(check_projection(aug).pass);
  CHECK(check_commutation_preservation(aug).pass);
  for (const State& init : every_state(aug.augmented().vars())) {
    CHECK(check_ghost_soundness_semantics(aug, init).pass);
    CHECK(missing_executions(aug, init) == 0);
    const auto base =
        execution_keys(enumerate_cc(aug.base(), project(aug, init), false));
    const auto ext = execution_keys(enumerate_cc(aug.augmented(), init, false));
    CHECK(base == ext);
  }
}

TEST_CASE("done flags and ghost-free augmentations are sound") {
  const Program sb = corpus("sb-annotated.ccm").program;
  const Augmentation flags = with_done_flags(sb);
  CHECK(flags.augmented().vars().size() == sb.vars().size() + sb.size());
  CHECK(check_projection(flags).pass);
  CHECK(check_commutation_preservation(flags).pass);
  CHECK(check_ghost_soundness_semantics(flags, flags.augmented().vars().initial_state()).pass);

  const Augmentation plain = Augmentation::from_program(corpus("sb.ccm").program);
  CHECK(plain.base() == plain.augmented());
  CHECK(check_projection(plain).pass);
  CHECK(check_commutation_preservation(plain).pass);
  CHECK(check_ghost_soundness_semantics(plain, plain.augmented().vars().initial_state()).pass);

  const dsl::Document done = corpus("ghost-doneflags.ccm");
  const Augmentation aug = Augmentation::from_program(done.program);
  CHECK(check_projection(aug).pass);
  CHECK(check_commutation_preservation(aug).pass);
  CHECK(check_annotation(done.annotation, done.program).pass);
}

TEST_CASE("commutation preservation implies simulation on the corpus") {
  for (const auto& f : corpus_files()) {
    const dsl::Document doc = corpus(f);
    if (!doc.has_ghost()) continue;
    CAPTURE(f);
    const Augmentation aug = Augmentation::from_program(doc.program);
    if (!check_projection(aug).pass || !check_commutation_preservation(aug).pass) continue;
    for (const State& init : every_state(aug.augmented().vars())) {
      CHECK(check_ghost_soundness_semantics(aug, init).pass);
      CHECK(missing_executions(aug, init) == 0);
    }
  }
}

TEST_CASE("mismatched programs are rejected") {
  const Program sb = corpus("sb.ccm").program;
  const Program low = corpus("lowenstein.ccm").program;
  CHECK_THROWS_AS(Augmentation(sb, low), ValidationError);
}
