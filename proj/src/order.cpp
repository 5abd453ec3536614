#include "ccm/order.hpp"

#include <algorithm>
#include <string>

#include "ccm/error.hpp"

namespace ccm {

std::vector<int> members(OpSet set) {
  std::vector<int> out;
  while (set) {
    out.push_back(std::countr_zero(set));
    set &= set - 1;
  }
  return out;
}

Order::Order(std::size_t universe, OpSet carrier)
    : carrier_(carrier), preds_(universe, 0) {
  if (universe > kMaxOps) {
    throw CapExceeded("more than " + std::to_string(kMaxOps) + " operations");
  }
}

Order Order::from_edges(std::size_t universe, OpSet carrier,
                        const std::vector<Edge>& edges) {
  Order o(universe, carrier);
  for (auto [a, b] : edges) o.add(a, b);
  o.close();
  return o;
}

OpSet Order::successors(int op) const {
  OpSet out = 0;
  for (int b : members(carrier_)) {
    if (precedes(op, b)) out |= bit(b);
  }
  return out;
}

void Order::add(int a, int b) {
  if (!has(carrier_, a) || !has(carrier_, b)) {
    throw LookupError("edge endpoint outside the carrier");
  }
  preds_[b] |= bit(a);
}

void Order::close() {
  // Warshall over predecessor masks.
  for (int k : members(carrier_)) {
    for (int b : members(carrier_)) {
      if (has(preds_[b], k)) preds_[b] |= preds_[k];
    }
  }
}

bool Order::irreflexive() const {
  for (int a : members(carrier_)) {
    if (has(preds_[a], a)) return false;
  }
  return true;
}

bool Order::transitive() const {
  for (int b : members(carrier_)) {
    for (int a : members(preds_[b])) {
      if (!subset(preds_[a], preds_[b])) return false;
    }
  }
  return true;
}

bool Order::includes(const Order& other) const {
  Edge unused;
  return !first_missing(other, unused);
}

bool Order::first_missing(const Order& other, Edge& missing) const {
  for (auto [a, b] : other.edges()) {
    if (static_cast<std::size_t>(b) >= preds_.size() || !precedes(a, b)) {
      missing = {a, b};
      return true;
    }
  }
  return false;
}

Order Order::restricted(OpSet carrier) const {
  Order o(preds_.size(), carrier & carrier_);
  for (int b : members(o.carrier_)) o.preds_[b] = preds_[b] & o.carrier_;
  return o;
}

std::vector<Edge> Order::edges() const {
  std::vector<Edge> out;
  for (int a : members(carrier_)) {
    for (int b : members(carrier_)) {
      if (precedes(a, b)) out.emplace_back(a, b);
    }
  }
  return out;
}

OpSet Order::maximal() const {
  OpSet out = carrier_;
  for (int b : members(carrier_)) out &= ~preds_[b];
  return out;
}

std::vector<int> Order::topological() const {
  std::vector<int> out;
  OpSet placed = 0;
  while (placed != carrier_) {
    bool progressed = false;
    for (int o : members(carrier_ & ~placed)) {
      if (subset(preds_[o] & carrier_, placed)) {
        out.push_back(o);
        placed |= bit(o);
        progressed = true;
        break;
      }
    }
    if (!progressed) throw ValidationError("order contains a cycle");
  }
  return out;
}

bool canonical_less(OpSet a, OpSet b) {
  if (count(a) != count(b)) return count(a) < count(b);
  // Same size: the set whose sorted id list is lexicographically smaller has
  // the smallest element of the symmetric difference.
  const OpSet diff = a ^ b;
  if (!diff) return false;
  return has(a, std::countr_zero(diff));
}

bool is_downset(const Order& order, OpSet set) {
  if (!subset(set, order.carrier())) return false;
  for (int o : members(set)) {
    if (!subset(order.predecessors(o) & order.carrier(), set)) return false;
  }
  return true;
}

std::vector<OpSet> downsets(const Order& order) {
  const std::vector<int> topo = order.topological();
  std::vector<OpSet> out;
  // Extend each partial choice along the topological listing; an operation
  // may join only when all its predecessors already have.
  auto rec = [&](auto&& self, std::size_t i, OpSet acc) -> void {
    if (i == topo.size()) {
      out.push_back(acc);
      return;
    }
    const int o = topo[i];
    self(self, i + 1, acc);
    if (subset(order.predecessors(o) & order.carrier(), acc)) {
      self(self, i + 1, acc | bit(o));
    }
  };
  rec(rec, 0, 0);
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

namespace {

void require_member(const Order& order, int op) {
  if (op < 0 || static_cast<std::size_t>(op) >= order.universe() ||
      !has(order.carrier(), op)) {
    throw LookupError("operation #" + std::to_string(op) +
                      " is not in the order's carrier");
  }
}

}  // namespace

OpSet before(const Order& order, int op) {
  require_member(order, op);
  return order.predecessors(op) & order.carrier();
}

OpSet not_after(const Order& order, int op) {
  require_member(order, op);
  return order.carrier() & ~order.successors(op);
}

OpSet without(const Order& order, int op) {
  return not_after(order, op) & ~bit(op);
}

}  // namespace ccm
