#ifndef CCM_CHECK_REPORT_HPP_
#define CCM_CHECK_REPORT_HPP_

#include <string>
#include <vector>

#include "ccm/state.hpp"

namespace ccm {

// One counterexample. `states` holds the raw states (for comparison) and
// `rendered` their sorted `var=value` text.
struct Witness {
  std::string condition;
  std::vector<std::string> ops;
  std::vector<State> states;
  std::vector<std::string> rendered;
  std::string detail;
};

struct CheckReport {
  bool pass = true;
  std::vector<Witness> witnesses;

  void add(Witness w) {
    pass = false;
    witnesses.push_back(std::move(w));
  }
  void merge(const CheckReport& other) {
    for (const auto& w : other.witnesses) add(w);
  }
};

}  // namespace ccm

#endif  // CCM_CHECK_REPORT_HPP_
