#ifndef CCM_TESTS_SUPPORT_HPP_
#define CCM_TESTS_SUPPORT_HPP_

// Corpus access and brute-force oracles that share no code with the library
// algorithms they check.

#include <algorithm>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "ccm/dsl.hpp"
#include "ccm/enumerate.hpp"

namespace ccm::test {

inline std::string corpus_path(const std::string& name) {
  return std::string(CCM_CORPUS_DIR) + "/" + name;
}

inline dsl::Document corpus(const std::string& name) {
  return dsl::load(corpus_path(name));
}

inline const std::vector<std::string>& corpus_files() {
  static const std::vector<std::string> files = {
      "fig2.ccm",           "ghost-doneflags.ccm",      "ghost-race.ccm",
      "ghost-weakread.ccm", "lowenstein-annotated.ccm", "lowenstein.ccm",
      "sb-annotated.ccm",   "sb-strengthened.ccm",      "sb.ccm"};
  return files;
}

// State from name/value pairs over `vars`; unnamed variables take 0.
inline State make_state(const VarTable& vars,
                        std::initializer_list<std::pair<const char*, int>> values) {
  State s(vars.size());
  for (auto [name, v] : values) s.set(static_cast<std::size_t>(vars.index_of(name)), v);
  return s;
}

inline OpSet set_of(const Program& p, std::initializer_list<const char*> labels) {
  OpSet s = 0;
  for (const char* l : labels) s |= OpSet{1} << p.index_of(l);
  return s;
}

inline std::vector<State> every_state(const VarTable& vars) {
  std::vector<State> out;
  State s(vars.size());
  std::function<void(std::size_t)> rec = [&](std::size_t v) {
    if (v == vars.size()) {
      out.push_back(s);
      return;
    }
    for (int x = 0; x < vars[v].domain.size(); ++x) {
      s.set(v, x);
      rec(v + 1);
    }
  };
  rec(0);
  return out;
}

namespace oracle {

// Every subset of the carrier closed under predecessors, by direct filter.
inline std::set<OpSet> downsets(const Order& order) {
  std::vector<int> ids;
  for (std::size_t i = 0; i < order.universe(); ++i) {
    if (order.carrier() >> i & 1) ids.push_back(static_cast<int>(i));
  }
  std::set<OpSet> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << ids.size()); ++mask) {
    OpSet s = 0;
    for (std::size_t k = 0; k < ids.size(); ++k) {
      if (mask >> k & 1) s |= OpSet{1} << ids[k];
    }
    bool closed = true;
    for (int a : ids) {
      if (!(s >> a & 1)) continue;
      for (int b : ids) {
        if (order.precedes(b, a) && !(s >> b & 1)) closed = false;
      }
    }
    if (closed) out.insert(s);
  }
  return out;
}

// Final states of folding the updates along every linearization of `set`
// consistent with `order`.
inline std::set<State> linearization_folds(const Program& p, const Order& order, OpSet set,
                                           const State& init) {
  std::set<State> out;
  std::function<void(OpSet, const State&)> rec = [&](OpSet done, const State& s) {
    if (done == set) {
      out.insert(s);
      return;
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
      const int o = static_cast<int>(i);
      if (!(set >> i & 1) || (done >> i & 1)) continue;
      bool ready = true;
      for (std::size_t j = 0; j < p.size(); ++j) {
        if ((set >> j & 1) && order.precedes(static_cast<int>(j), o) && !(done >> j & 1)) {
          ready = false;
        }
      }
      if (ready) rec(done | OpSet{1} << i, p.op(o).update.apply(s, p.vars()));
    }
  };
  rec(0, init);
  return out;
}

struct ScRun {
  std::vector<int> sequence;
  State final_state;
};

// Every sequence of distinct operations respecting the program order in
// which each guard holds on the state produced so far. Programs must not
// contain weak reads.
inline std::vector<ScRun> sc_runs(const Program& p, const State& init, bool complete_only) {
  std::vector<ScRun> out;
  std::vector<int> seq;
  std::function<void(OpSet, const State&)> rec = [&](OpSet done, const State& s) {
    if (!complete_only || seq.size() == p.size()) out.push_back({seq, s});
    for (std::size_t i = 0; i < p.size(); ++i) {
      const int o = static_cast<int>(i);
      if (done >> i & 1) continue;
      bool ready = true;
      for (std::size_t j = 0; j < p.size(); ++j) {
        if (p.order().precedes(static_cast<int>(j), o) && !(done >> j & 1)) ready = false;
      }
      if (!ready || !p.op(o).guard.holds(s)) continue;
      seq.push_back(o);
      rec(done | OpSet{1} << i, p.op(o).update.apply(s, p.vars()));
      seq.pop_back();
    }
  };
  rec(0, init);
  return out;
}

}  // namespace oracle

}  // namespace ccm::test

#endif  // CCM_TESTS_SUPPORT_HPP_
