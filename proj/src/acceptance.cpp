#include <algorithm>
#include <filesystem>
#include <functional>
#include <sstream>

#include "ccm/annotate.hpp"
#include "ccm/cli.hpp"
#include "ccm/ghost.hpp"
#include "ccm/tso.hpp"

namespace ccm::cli {

namespace {

namespace fs = std::filesystem;

struct Check {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    detail += (detail.empty() ? "" : "; ") + what;
  }
};

class Corpus {
 public:
  explicit Corpus(std::string dir) : dir_(std::move(dir)) {}

  const dsl::Document& doc(const std::string& name) {
    auto it = cache_.find(name);
    if (it == cache_.end()) {
      it = cache_.emplace(name, dsl::load((fs::path(dir_) / name).string())).first;
    }
    return it->second;
  }
  const Program& program(const std::string& name) { return doc(name).program; }
  std::string path(const std::string& name) const { return (fs::path(dir_) / name).string(); }

 private:
  std::string dir_;
  std::map<std::string, dsl::Document> cache_;
};

std::vector<State> all_states(const VarTable& vars) {
  std::vector<State> out;
  StateSpace(vars).for_each([&](const State& s) { out.push_back(s); });
  return out;
}

State state_of(const Program& p, std::initializer_list<std::pair<const char*, int>> values) {
  State s = p.vars().initial_state();
  for (auto [name, v] : values) s.set(static_cast<std::size_t>(p.vars().index_of(name)), v);
  return s;
}

std::size_t complete_traces(const Program& p, tso::Mode mode) {
  const auto classes = tso::classify_variables(p);
  std::size_t n = 0;
  for (const auto& t : tso::explore(p, p.vars().initial_state(), classes, mode)) {
    n += t.complete ? 1 : 0;
  }
  return n;
}

Check sb_litmus(Corpus& c) {
  Check k;
  const Program& p = c.program("sb.ccm");
  const State init = p.vars().initial_state();
  const auto sc = enumerate_sc(p, init, true);
  k.require(sc.executions.empty(), "sc found " + std::to_string(sc.executions.size()));
  const auto cc = enumerate_cc(p, init, true);
  k.require(!cc.executions.empty(), "cc found none");
  k.require(behaviors(cc) == std::set<State>{state_of(p, {{"x", 1}, {"y", 1}})},
            "cc behaviors differ from {x=T, y=T}");
  k.require(complete_traces(p, tso::Mode::kPlain) >= 1, "no complete plain TSO trace");
  k.detail = k.pass ? "sc 0, cc " + std::to_string(cc.executions.size()) + ", tso-plain >= 1"
                    : k.detail;
  return k;
}

Check sb_annotation(Corpus& c) {
  Check k;
  const auto& good = c.doc("sb-annotated.ccm");
  k.require(check_local(good.annotation, good.program).pass, "outline fails A3");
  k.require(check_noninterference(good.annotation, good.program).pass, "outline fails A4");
  const auto& strong = c.doc("sb-strengthened.ccm");
  const Program& p = strong.program;
  const auto r = check_noninterference(strong.annotation, p);
  const bool one = r.witnesses.size() == 1;
  k.require(one, std::to_string(r.witnesses.size()) + " A4 witnesses on the strengthened outline");
  if (one) {
    const auto& w = r.witnesses.front();
    k.require(w.ops == std::vector<std::string>{"r1", "f", "w2"}, "unexpected A4 operations");
    k.require(w.states == std::vector<State>{state_of(p, {{"x", 1}, {"y", 0}}),
                                             state_of(p, {{"x", 1}, {"y", 1}})},
              "unexpected A4 states");
  }
  return k;
}

Check lowenstein(Corpus& c) {
  Check k;
  const auto& annotated = c.doc("lowenstein-annotated.ccm");
  const Program& ap = annotated.program;
  k.require(check_annotation(annotated.annotation, ap).pass, "outline does not check");
  const Predicate pre = derived_pre(annotated.annotation, ap, ap.index_of("f"));
  k.require(pre.extension(StateSpace(ap.vars())).empty(), "final precondition satisfiable");

  const Program& p = c.program("lowenstein.ccm");
  const State init = p.vars().initial_state();
  k.require(enumerate_cc(p, init, true).executions.empty(), "cc has complete executions");

  using K = tso::Action::Kind;
  const std::vector<std::pair<K, std::string>> expected = {
      {K::kBufferedWrite, "w1"}, {K::kRead, "r1"},  {K::kBufferedWrite, "w2"},
      {K::kDrain, "w2"},         {K::kBufferedWrite, "w3"}, {K::kDrain, "w3"},
      {K::kDrain, "w1"},         {K::kRead, "r3"},  {K::kGlobal, "f"}};
  const auto classes = tso::classify_variables(p);
  bool found = false;
  for (const auto& t : tso::explore(p, init, classes, tso::Mode::kPlain)) {
    if (!t.complete || t.actions.size() != expected.size()) continue;
    bool same = true;
    for (std::size_t i = 0; i < expected.size(); ++i) {
      same = same && t.actions[i].kind == expected[i].first &&
             p.op(t.actions[i].op).id == expected[i].second;
    }
    found = found || same;
  }
  k.require(found, "the listed plain TSO trace is missing");
  k.require(classes[static_cast<std::size_t>(p.vars().index_of("x"))].shared,
            "x not inferred shared");
  k.require(complete_traces(p, tso::Mode::kDisciplined) == 0,
            "disciplined TSO completes");
  return k;
}

Check diagram(Corpus& c) {
  Check k;
  const Program& p = c.program("fig2.ccm");
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      const State init = state_of(p, {{"x", x}, {"y", y}});
      const std::string at = " from {" + p.vars().render(init) + "}";
      k.require(!enumerate_cc(p, init, true).executions.empty(), "cc empty" + at);
      k.require(enumerate_sc(p, init, true).executions.empty(), "sc nonempty" + at);
    }
  }
  return k;
}

Check ghosts(Corpus& c) {
  Check k;
  const auto& weak = c.doc("ghost-weakread.ccm");
  const auto nonint = check_noninterference(weak.annotation, weak.program);
  const bool by_c = std::any_of(nonint.witnesses.begin(), nonint.witnesses.end(),
                                [](const Witness& w) { return w.ops.size() == 3 && w.ops[2] == "c"; });
  k.require(!nonint.pass && by_c, "weak-read ghost annotation not refuted by xw := true");

  const auto& race = c.doc("ghost-race.ccm");
  k.require(check_annotation(race.annotation, race.program).pass,
            "race ghost annotation does not check");
  const auto race_aug = Augmentation::from_program(race.program);
  k.require(!check_commutation_preservation(race_aug).pass, "race ghost preserves commutation");
  k.require(!check_ghost_soundness_semantics(race_aug, race.program.vars().initial_state()).pass,
            "race ghost simulates the base program");

  const auto& done = c.doc("ghost-doneflags.ccm");
  const auto done_aug = Augmentation::from_program(done.program);
  k.require(check_projection(done_aug).pass, "done flags write concrete state");
  k.require(check_commutation_preservation(done_aug).pass, "done flags break commutation");
  k.require(check_ghost_soundness_semantics(done_aug, done.program.vars().initial_state()).pass,
            "done flags lose executions");
  return k;
}

Check soundness(Corpus&) {
  Check k;
  const auto r = random_soundness_harness(1, 200);
  k.require(r.report.pass, std::to_string(r.report.witnesses.size()) + " violations");
  if (k.pass) {
    k.detail = std::to_string(r.trials) + " trials, " + std::to_string(r.annotated) +
               " with checking annotations";
  }
  return k;
}

std::vector<std::string> corpus_files(const std::string& dir) {
  std::vector<std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".ccm") out.push_back(e.path().filename().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

Check oracle(Corpus& c, const std::vector<std::string>& files) {
  Check k;
  std::size_t compared = 0;
  for (const auto& f : files) {
    const Program& p = c.program(f);
    if (p.size() > kOracleMaxOps) continue;
    ++compared;
    const State init = p.vars().initial_state();
    for (bool complete : {false, true}) {
      const auto fast = enumerate_cc(p, init, complete);
      const auto slow = enumerate_cc_oracle(p, init, complete);
      k.require(execution_keys(fast) == execution_keys(slow), f + ": execution sets differ");
      k.require(behaviors(fast) == behaviors(slow), f + ": behaviors differ");
    }
  }
  if (k.pass) k.detail = std::to_string(compared) + " programs";
  return k;
}

Check bridge(Corpus& c) {
  Check k;
  for (const char* f : {"sb.ccm", "lowenstein.ccm"}) {
    const Program& p = c.program(f);
    const State init = p.vars().initial_state();
    const auto classes = tso::classify_variables(p, c.doc(f).declared_classes);
    for (const auto& t : tso::explore(p, init, classes, tso::Mode::kDisciplined)) {
      if (!t.complete) continue;
      const Order e = tso::derived_order(t, p);
      k.require(e.is_strict() && e.includes(p.order()),
                std::string(f) + ": derived order not a strict extension of P");
    }
    const auto r = tso::bridge_check(p, init, classes, tso::Mode::kDisciplined);
    k.require(r.report.pass, std::string(f) + ": disciplined bridge fails");
  }
  const Program& p = c.program("lowenstein.ccm");
  const auto plain = tso::bridge_check(p, p.vars().initial_state(), tso::classify_variables(p),
                                       tso::Mode::kPlain);
  k.require(plain.valid < plain.complete, "every plain trace of lowenstein.ccm is CC-valid");
  return k;
}

Check single_writer(Corpus& c) {
  Check k;
  for (const char* f : {"sb.ccm", "fig2.ccm"}) {
    const Program& p = c.program(f);
    const State init = p.vars().initial_state();
    const auto classes = tso::classify_variables(p);
    const auto plain =
        tso::complete_behaviors(tso::explore(p, init, classes, tso::Mode::kPlain));
    const auto disc =
        tso::complete_behaviors(tso::explore(p, init, classes, tso::Mode::kDisciplined));
    const auto cc = behaviors(enumerate_cc(p, init, true));
    k.require(plain == disc, std::string(f) + ": plain and disciplined behaviors differ");
    k.require(std::includes(cc.begin(), cc.end(), plain.begin(), plain.end()),
              std::string(f) + ": TSO behavior outside CC");
  }
  return k;
}

Check synthesis(Corpus& c) {
  Check k;
  const Program& p = c.program("sb-annotated.ccm");
  const VarTable& vars = p.vars();
  const Annotation a = synth_strongest(p, all_states(vars));
  const StateSpace space(vars);
  struct Edge {
    const char* from;
    const char* to;
    const char* var;
    int value;  // the edge predicate is var == value
  };
  const Edge expected[] = {{"i", "w1", "x", 0}, {"w1", "r1", "x", 1}, {"r1", "f", "x", 1},
                           {"i", "w2", "y", 0}, {"w2", "r2", "y", 1}, {"r2", "f", "y", 1}};
  const std::vector<int> xy = {vars.index_of("x"), vars.index_of("y")};
  for (const auto& e : expected) {
    const int v = vars.index_of(e.var);
    StateSet want;
    space.for_each([&](const State& s) {
      if (s[static_cast<std::size_t>(v)] == e.value) want.insert(s);
    });
    const auto got = a.at(p.index_of(e.from), p.index_of(e.to)).extension(space);
    k.require(project_states(got, xy) == project_states(want, xy),
              std::string("(") + e.from + ", " + e.to + ") is not " + (e.value ? "" : "!") +
                  e.var);
  }
  return k;
}

Check round_trip(Corpus& c, const std::vector<std::string>& files) {
  Check k;
  for (const auto& f : files) {
    const auto& d = c.doc(f);
    k.require(dsl::parse(dsl::serialize(d)) == d, f + ": round trip differs");
  }
  auto twice = [&](const std::function<int(std::ostream&)>& run, const std::string& what) {
    std::ostringstream a;
    std::ostringstream b;
    run(a);
    run(b);
    k.require(strip_wall_time(a.str()) == strip_wall_time(b.str()), what + " is not deterministic");
  };
  for (const auto& f : files) {
    EnumerateOptions e;
    e.file = c.path(f);
    e.json = true;
    std::ostringstream sink;
    twice([&](std::ostream& out) { return cmd_enumerate(e, out, sink); }, "enumerate " + f);
  }
  CheckOptions chk;
  chk.file = c.path("lowenstein.ccm");
  chk.json = true;
  chk.bridge = true;
  chk.model = "tso-plain";
  std::ostringstream sink;
  twice([&](std::ostream& out) { return cmd_check(chk, out, sink); }, "check --bridge");
  return k;
}

}  // namespace

std::vector<AcceptanceRow> run_acceptance(const std::string& corpus_dir) {
  std::vector<AcceptanceRow> rows;
  Corpus corpus(corpus_dir);
  std::vector<std::string> files;
  try {
    files = corpus_files(corpus_dir);
  } catch (const std::exception& e) {
    rows.push_back({"corpus", false, e.what()});
    return rows;
  }
  std::vector<std::string> parsed;
  for (const auto& f : files) {
    try {
      corpus.doc(f);
      parsed.push_back(f);
      rows.push_back({"parse " + f, true, ""});
    } catch (const std::exception& e) {
      rows.push_back({"parse " + f, false, e.what()});
    }
  }

  const std::vector<std::pair<std::string, std::function<Check()>>> criteria = {
      {"criterion 01 sb litmus", [&] { return sb_litmus(corpus); }},
      {"criterion 02 sb annotation", [&] { return sb_annotation(corpus); }},
      {"criterion 03 lowenstein", [&] { return lowenstein(corpus); }},
      {"criterion 04 cc without sc", [&] { return diagram(corpus); }},
      {"criterion 05 ghost updates", [&] { return ghosts(corpus); }},
      {"criterion 06 soundness harness", [&] { return soundness(corpus); }},
      {"criterion 07 oracle equivalence", [&] { return oracle(corpus, parsed); }},
      {"criterion 08 tso bridge", [&] { return bridge(corpus); }},
      {"criterion 09 single writer", [&] { return single_writer(corpus); }},
      {"criterion 10 strongest annotation", [&] { return synthesis(corpus); }},
      {"criterion 11 round trip and determinism", [&] { return round_trip(corpus, parsed); }},
  };
  for (const auto& [name, run] : criteria) {
    try {
      const Check k = run();
      rows.push_back({name, k.pass, k.detail});
    } catch (const std::exception& e) {
      rows.push_back({name, false, e.what()});
    }
  }
  std::sort(rows.begin(), rows.end(),
            [](const AcceptanceRow& a, const AcceptanceRow& b) { return a.name < b.name; });
  return rows;
}

}  // namespace ccm::cli
