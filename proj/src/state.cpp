#include "ccm/state.hpp"

#include <algorithm>

#include "ccm/error.hpp"

namespace ccm {

Domain Domain::int_range(int max) {
  if (max < 0 || max > kMaxIntBound) {
    throw ValidationError("integer range bound " + std::to_string(max) +
                          " not in [0, " + std::to_string(kMaxIntBound) + "]");
  }
  return {false, max};
}

State::State(std::initializer_list<int> values) {
  values_.reserve(values.size());
  for (int v : values) values_.push_back(static_cast<std::int8_t>(v));
}

std::size_t StateHash::operator()(const State& s) const {
  std::size_t h = 1469598103934665603ull;
  for (auto v : s.values()) {
    h ^= static_cast<std::uint8_t>(v);
    h *= 1099511628211ull;
  }
  return h;
}

int VarTable::add(VarDecl decl) {
  if (find(decl.name)) {
    throw ValidationError("duplicate variable '" + decl.name + "'");
  }
  if (!decl.domain.contains(decl.init)) {
    throw DomainError(decl.name, decl.init);
  }
  if (!decl.ghost && concrete_count() != vars_.size()) {
    throw ValidationError("concrete variable '" + decl.name +
                          "' declared after a ghost variable");
  }
  vars_.push_back(std::move(decl));
  return static_cast<int>(vars_.size() - 1);
}

std::optional<int> VarTable::find(std::string_view name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i].name == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

int VarTable::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw LookupError("unknown variable '" + std::string(name) + "'");
}

std::size_t VarTable::concrete_count() const {
  std::size_t n = 0;
  while (n < vars_.size() && !vars_[n].ghost) ++n;
  return n;
}

VarTable VarTable::concrete() const {
  VarTable out;
  for (std::size_t i = 0; i < concrete_count(); ++i) out.add(vars_[i]);
  return out;
}

State VarTable::initial_state() const {
  State s(vars_.size());
  for (std::size_t i = 0; i < vars_.size(); ++i) s.set(i, vars_[i].init);
  return s;
}

bool VarTable::admits(const State& s) const {
  if (s.size() != vars_.size()) return false;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (!vars_[i].domain.contains(s[i])) return false;
  }
  return true;
}

std::string VarTable::render_value(std::size_t var, int value) const {
  if (vars_[var].domain.boolean) return value ? "T" : "F";
  return std::to_string(value);
}

std::string VarTable::render(const State& s) const {
  std::vector<std::size_t> order(vars_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return vars_[a].name < vars_[b].name;
  });
  std::string out;
  for (std::size_t i : order) {
    if (!out.empty()) out += ", ";
    out += vars_[i].name + "=" + render_value(i, s[i]);
  }
  return out;
}

StateSpace::StateSpace(const VarTable& vars) {
  radix_.reserve(vars.size());
  for (const auto& d : vars) {
    radix_.push_back(d.domain.size());
    size_ *= static_cast<std::size_t>(d.domain.size());
    if (size_ > kMaxStates) {
      throw CapExceeded("declared state space exceeds " +
                        std::to_string(kMaxStates) + " states");
    }
  }
}

State StateSpace::at(std::size_t index) const {
  State s(radix_.size());
  for (std::size_t v = radix_.size(); v-- > 0;) {
    s.set(v, static_cast<int>(index % radix_[v]));
    index /= radix_[v];
  }
  return s;
}

std::size_t StateSpace::index_of(const State& s) const {
  std::size_t index = 0;
  for (std::size_t v = 0; v < radix_.size(); ++v) {
    index = index * radix_[v] + static_cast<std::size_t>(s[v]);
  }
  return index;
}

}  // namespace ccm
