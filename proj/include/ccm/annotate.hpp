#ifndef CCM_ANNOTATE_HPP_
#define CCM_ANNOTATE_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ccm/check_report.hpp"
#include "ccm/enumerate.hpp"
#include "ccm/program.hpp"

namespace ccm {

using StateSet = std::set<State>;

// A state predicate: either a boolean expression or an explicit state set.
class Predicate {
 public:
  Predicate() : rep_(Expr::boolean(true)) {}
  explicit Predicate(Expr e) : rep_(std::move(e)) {}
  explicit Predicate(StateSet states) : rep_(std::move(states)) {}

  static Predicate truth() { return Predicate(); }
  static Predicate falsity() { return Predicate(StateSet{}); }

  bool holds(const State& s) const;
  const Expr* expr() const { return std::get_if<Expr>(&rep_); }
  const StateSet* states() const { return std::get_if<StateSet>(&rep_); }
  bool is_trivially_true() const { return expr() && expr()->is_true(); }

  StateSet extension(const StateSpace& space) const;

  bool operator==(const Predicate&) const = default;

 private:
  std::variant<Expr, StateSet> rep_;
};

// Best-effort short expression equal to `states` over the whole space of
// `vars`; falls back to a disjunction of minterms.
Expr minimal_expr(const StateSet& states, const VarTable& vars);
std::string to_string(const Predicate& p, const VarTable& vars);
// Restricts every state to the listed variables.
StateSet project_states(const StateSet& states, std::span<const int> vars);

// Predicates on ordered pairs of distinct operations; absent pairs are true.
class Annotation {
 public:
  using Key = std::pair<int, int>;

  // Throws ValidationError for a (o, o) key.
  void set(int from, int to, Predicate p);
  const Predicate& at(int from, int to) const;
  bool contains(int from, int to) const { return map_.contains({from, to}); }
  const std::map<Key, Predicate>& entries() const { return map_; }
  bool empty() const { return map_.empty(); }

  bool operator==(const Annotation&) const = default;

 private:
  std::map<Key, Predicate> map_;
};

// Conjunction of the predicates on the program edges into `op`.
Predicate derived_pre(const Annotation& a, const Program& program, int op);

CheckReport check_local(const Annotation& a, const Program& program);
CheckReport check_noninterference(const Annotation& a, const Program& program);
CheckReport check_annotation(const Annotation& a, const Program& program);

// Checks every pair predicate against every prefix execution from `init`.
// Throws PreconditionError when the annotation itself does not check.
CheckReport check_soundness_conclusion(const Annotation& a,
                                       const Program& program,
                                       const State& init,
                                       const Limits& limits = {});

// For each ordered pair (o, o'), the set of states of prefix executions that
// ran o but not o', over all `inits`.
Annotation synth_strongest(const Program& program,
                           const std::vector<State>& inits,
                           const Limits& limits = {});

struct HarnessResult {
  CheckReport report;
  std::size_t trials = 0;
  // Trials whose random annotation passed check_annotation.
  std::size_t annotated = 0;
  // One line per trial describing the generated case.
  std::vector<std::string> cases;
};

HarnessResult random_soundness_harness(std::uint64_t seed, std::size_t trials);

}  // namespace ccm

#endif  // CCM_ANNOTATE_HPP_
