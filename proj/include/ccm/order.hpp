#ifndef CCM_ORDER_HPP_
#define CCM_ORDER_HPP_

#include <bit>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace ccm {

// Sets of operations are bitmasks over operation indices.
using OpSet = std::uint32_t;
constexpr std::size_t kMaxOps = 32;

constexpr OpSet bit(int op) { return OpSet{1} << op; }
constexpr bool has(OpSet set, int op) { return (set >> op) & 1u; }
constexpr int count(OpSet set) { return std::popcount(set); }
constexpr bool subset(OpSet a, OpSet b) { return (a & ~b) == 0; }
std::vector<int> members(OpSet set);

using Edge = std::pair<int, int>;

// A binary relation over the operations in `carrier`, stored as a
// predecessor mask per operation. Used for program orders and execution
// orders alike.
class Order {
 public:
  Order() = default;
  Order(std::size_t universe, OpSet carrier);
  static Order from_edges(std::size_t universe, OpSet carrier,
                          const std::vector<Edge>& edges);

  std::size_t universe() const { return preds_.size(); }
  OpSet carrier() const { return carrier_; }

  bool precedes(int a, int b) const { return has(preds_[b], a); }
  OpSet predecessors(int op) const { return preds_[op]; }
  OpSet successors(int op) const;
  bool comparable(int a, int b) const {
    return precedes(a, b) || precedes(b, a);
  }

  void add(int a, int b);
  void set_predecessors(int op, OpSet preds) { preds_[op] = preds; }
  void close();
  Order closed() const {
    Order o = *this;
    o.close();
    return o;
  }

  bool irreflexive() const;
  bool transitive() const;
  bool is_strict() const { return irreflexive() && transitive(); }
  // Every edge of `other` is an edge of this relation.
  bool includes(const Order& other) const;
  // The first edge of `other` missing from this relation, if any.
  bool first_missing(const Order& other, Edge& missing) const;

  Order restricted(OpSet carrier) const;
  std::vector<Edge> edges() const;
  // Operations with no successor in the carrier.
  OpSet maximal() const;
  // A topological listing of the carrier (smallest index first among ties).
  std::vector<int> topological() const;

  bool operator==(const Order&) const = default;

 private:
  OpSet carrier_ = 0;
  std::vector<OpSet> preds_;
};

// Canonical downset ordering: by size, then lexicographically by sorted ids.
bool canonical_less(OpSet a, OpSet b);

bool is_downset(const Order& order, OpSet set);
// Every predecessor-closed subset of the carrier, in canonical order.
std::vector<OpSet> downsets(const Order& order);

// Throw LookupError if `op` is not in the carrier.
OpSet before(const Order& order, int op);
OpSet not_after(const Order& order, int op);
OpSet without(const Order& order, int op);

}  // namespace ccm

#endif  // CCM_ORDER_HPP_
