#ifndef CCM_GHOST_HPP_
#define CCM_GHOST_HPP_

#include "ccm/check_report.hpp"
#include "ccm/enumerate.hpp"
#include "ccm/program.hpp"

namespace ccm {

// A base program together with the same program extended by ghost state
// and ghost assignments. The augmented table lists the base variables first,
// followed by the ghost variables; guards are shared.
class Augmentation {
 public:
  // Throws ValidationError when the two programs do not line up.
  Augmentation(Program base, Program augmented);

  // Splits a program carrying ghost variables and ghost-flagged assignments
  // into base and augmented halves.
  static Augmentation from_program(const Program& augmented);

  const Program& base() const { return base_; }
  const Program& augmented() const { return augmented_; }
  std::size_t concrete_count() const { return base_.vars().size(); }

 private:
  Program base_;
  Program augmented_;
};

// Restriction of an extended state to the first `concrete_count` variables.
State project(const State& extended, std::size_t concrete_count);
inline State project(const Augmentation& aug, const State& extended) {
  return project(extended, aug.concrete_count());
}

// Ghost code never writes concrete state: project after the augmented update
// equals the base update after project, for every extended state.
CheckReport check_projection(const Augmentation& aug);

// Base updates that commute at s must have augmented counterparts commuting
// at every extended state projecting to s. Pairs ordered by the program or
// sharing a conflict variable carry no obligation. Throws PreconditionError
// when check_projection fails.
CheckReport check_commutation_preservation(const Augmentation& aug);

// Every execution of the base program from project(init) reappears, with the
// same executed set and order, as an execution of the augmented program from
// `init`.
CheckReport check_ghost_soundness_semantics(const Augmentation& aug,
                                            const State& init,
                                            const Limits& limits = {});

// Gives every operation `<id>_done := true` on a fresh ghost boolean.
Augmentation with_done_flags(const Program& base);

}  // namespace ccm

#endif  // CCM_GHOST_HPP_
