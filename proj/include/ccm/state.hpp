#ifndef CCM_STATE_HPP_
#define CCM_STATE_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ccm {

constexpr int kMaxIntBound = 7;

// Booleans are stored as 0/1; integers range over [0, max].
struct Domain {
  bool boolean = true;
  int max = 1;

  static Domain boolean_domain() { return {true, 1}; }
  static Domain int_range(int max);

  int size() const { return max + 1; }
  bool contains(int v) const { return v >= 0 && v <= max; }

  bool operator==(const Domain&) const = default;
};

struct VarDecl {
  std::string name;
  Domain domain;
  int init = 0;
  bool ghost = false;

  bool operator==(const VarDecl&) const = default;
};

class State {
 public:
  State() = default;
  explicit State(std::size_t size) : values_(size, 0) {}
  explicit State(std::vector<std::int8_t> values) : values_(std::move(values)) {}
  State(std::initializer_list<int> values);

  int operator[](std::size_t var) const { return values_[var]; }
  void set(std::size_t var, int value) {
    values_[var] = static_cast<std::int8_t>(value);
  }
  std::size_t size() const { return values_.size(); }
  const std::vector<std::int8_t>& values() const { return values_; }

  auto operator<=>(const State&) const = default;
  bool operator==(const State&) const = default;

 private:
  std::vector<std::int8_t> values_;
};

struct StateHash {
  std::size_t operator()(const State& s) const;
};

class VarTable {
 public:
  VarTable() = default;

  // Throws ValidationError on a duplicate name or an init outside the domain.
  int add(VarDecl decl);

  std::optional<int> find(std::string_view name) const;
  // Throws LookupError.
  int index_of(std::string_view name) const;

  const VarDecl& operator[](std::size_t i) const { return vars_[i]; }
  std::size_t size() const { return vars_.size(); }
  bool empty() const { return vars_.empty(); }
  auto begin() const { return vars_.begin(); }
  auto end() const { return vars_.end(); }

  // Number of leading non-ghost declarations. Ghost variables always follow
  // the concrete ones.
  std::size_t concrete_count() const;
  VarTable concrete() const;

  State initial_state() const;
  bool admits(const State& s) const;

  // Sorted `var=value` list, booleans as T/F.
  std::string render(const State& s) const;
  std::string render_value(std::size_t var, int value) const;

  bool operator==(const VarTable&) const = default;

 private:
  std::vector<VarDecl> vars_;
};

// Every state over a table, indexed in the lexicographic order of State.
class StateSpace {
 public:
  static constexpr std::size_t kMaxStates = std::size_t{1} << 22;

  explicit StateSpace(const VarTable& vars);

  std::size_t size() const { return size_; }
  State at(std::size_t index) const;
  std::size_t index_of(const State& s) const;

  template <class F>
  void for_each(F&& f) const {
    State s(radix_.size());
    for (std::size_t i = 0; i < size_; ++i) {
      f(static_cast<const State&>(s));
      for (std::size_t v = radix_.size(); v-- > 0;) {
        if (s[v] + 1 < radix_[v]) {
          s.set(v, s[v] + 1);
          break;
        }
        s.set(v, 0);
      }
    }
  }

 private:
  std::vector<int> radix_;
  std::size_t size_ = 1;
};

}  // namespace ccm

#endif  // CCM_STATE_HPP_
