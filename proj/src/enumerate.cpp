#include "ccm/enumerate.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

#include "ccm/error.hpp"

namespace ccm {

ExecutionKey key_of(const ExecutionRecord& r) {
  return {r.carrier(), r.order.edges()};
}

bool key_less(const ExecutionKey& a, const ExecutionKey& b) {
  if (a.first != b.first) return canonical_less(a.first, b.first);
  return a.second < b.second;
}

std::vector<Program> desugar_reads(const Program& program) {
  std::vector<int> reads;
  for (std::size_t i = 0; i < program.size(); ++i) {
    if (program.op(static_cast<int>(i)).weak_read) {
      reads.push_back(static_cast<int>(i));
    }
  }
  if (reads.empty()) return {program};

  const auto& vars = program.vars();
  std::vector<int> choice(reads.size(), 0);
  std::vector<Program> out;
  std::vector<Edge> edges = program.order().edges();
  std::vector<std::string> threads = program.threads();
  while (true) {
    std::vector<Operation> ops = program.ops();
    for (std::size_t k = 0; k < reads.size(); ++k) {
      auto& op = ops[static_cast<std::size_t>(reads[k])];
      const WeakRead wr = *op.weak_read;
      const auto& src = vars[static_cast<std::size_t>(wr.source)];
      const Expr value = src.domain.boolean ? Expr::boolean(choice[k] != 0)
                                            : Expr::integer(choice[k]);
      op.guard = Expr::eq(Expr::var(wr.source), value);
      op.update = Update({{wr.target, value}});
      op.weak_read.reset();
    }
    out.emplace_back(vars, std::move(ops), edges, threads);

    std::size_t k = reads.size();
    while (k-- > 0) {
      const auto& src =
          vars[static_cast<std::size_t>(program.op(reads[k]).weak_read->source)];
      if (++choice[k] < src.domain.size()) break;
      choice[k] = 0;
    }
    if (k == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

namespace {

struct OrderHash {
  std::size_t operator()(const Order& o) const {
    std::size_t h = o.carrier();
    for (int i : members(o.carrier())) {
      h = h * 1000003u ^ o.predecessors(i);
    }
    return h;
  }
};

// Merges per-variant results, keeping the first variant for each key.
class Collector {
 public:
  explicit Collector(bool complete_only) : complete_only_(complete_only) {}

  void add(ExecutionRecord r, EnumerationStats& stats) {
    auto key = key_of(r);
    if (seen_.emplace(std::move(key), records_.size()).second) {
      records_.push_back(std::move(r));
    } else {
      ++stats.duplicates;
    }
  }

  EnumerationResult finish(EnumerationStats stats) && {
    EnumerationResult out;
    out.complete_only = complete_only_;
    out.stats = stats;
    out.executions = std::move(records_);
    std::sort(out.executions.begin(), out.executions.end(),
              [](const ExecutionRecord& a, const ExecutionRecord& b) {
                return key_less(key_of(a), key_of(b));
              });
    return out;
  }

 private:
  bool complete_only_;
  std::map<ExecutionKey, std::size_t> seen_;
  std::vector<ExecutionRecord> records_;
};

void require_size(const Program& program, const Limits& limits) {
  if (program.size() > limits.max_ops) {
    throw CapExceeded("program has " + std::to_string(program.size()) +
                      " operations, cap is " + std::to_string(limits.max_ops));
  }
}

OpSet conflict_partners(const Program& program, int op, OpSet among) {
  OpSet out = 0;
  const auto& mine = program.op(op).conflict_vars;
  if (mine.empty()) return 0;
  for (int p : members(among)) {
    for (const auto& r : program.op(p).conflict_vars) {
      if (mine.contains(r)) {
        out |= bit(p);
        break;
      }
    }
  }
  return out;
}

// Depth-first placement search for one concrete program. A node is a
// partial execution (placed operations with their order); extending it
// places one more operation after a chosen downset of the current order.
class CcSearch {
 public:
  CcSearch(const Program& program, std::size_t variant, const State& init,
           bool complete_only, const Limits& limits, EnumerationStats& stats,
           Collector& out)
      : program_(program),
        variant_(variant),
        complete_only_(complete_only),
        limits_(limits),
        stats_(stats),
        out_(out),
        topo_(program.order().topological()) {
    Order empty(program.size(), 0);
    RedMap red;
    red.insert(0, init);
    visited_.insert(empty);
    visit(empty, red);
  }

 private:
  void visit(const Order& order, const RedMap& red) {
    ++stats_.explored;
    const OpSet placed = order.carrier();
    if (!complete_only_ || placed == program_.all()) {
      out_.add({order, red.at(placed), variant_}, stats_);
    }
    for (int o : topo_) {
      if (has(placed, o)) continue;
      const OpSet ppreds = program_.order().predecessors(o);
      if (!subset(ppreds, placed)) continue;
      const OpSet required = ppreds | conflict_partners(program_, o, placed);
      const auto& op = program_.op(o);
      for (OpSet b : red.downsets()) {
        if (!subset(required, b)) continue;
        if (!eval_guard(op.guard, red.at(b))) {
          ++stats_.pruned_guard;
          continue;
        }
        Order grown(program_.size(), placed | bit(o));
        for (int p : members(placed)) {
          grown.set_predecessors(p, order.predecessors(p));
        }
        grown.set_predecessors(o, b);
        if (visited_.contains(grown)) {
          ++stats_.duplicates;
          continue;
        }
        auto extended = extend(grown, red, o, b);
        if (!extended) {
          ++stats_.pruned_coherence;
          continue;
        }
        visited_.insert(grown);
        if (visited_.size() > limits_.max_states) {
          throw CapExceeded("more than " + std::to_string(limits_.max_states) +
                            " partial executions explored");
        }
        visit(grown, *extended);
      }
    }
  }

  // Adds the downsets containing the newly placed `o` (preceded exactly by
  // `b`). Returns nullopt on a coherence failure.
  std::optional<RedMap> extend(const Order& grown, const RedMap& red, int o,
                               OpSet b) const {
    RedMap next = red;
    for (OpSet base : red.downsets()) {
      if (!subset(b, base)) continue;
      const OpSet d = base | bit(o);
      OpSet maximal = d;
      for (int m : members(d)) maximal &= ~(grown.predecessors(m) & d);
      std::optional<State> agreed;
      for (int m : members(maximal)) {
        State candidate =
            program_.op(m).update.apply(next.at(d & ~bit(m)), program_.vars());
        if (!agreed) {
          agreed = std::move(candidate);
        } else if (candidate != *agreed) {
          return std::nullopt;
        }
      }
      next.insert(d, std::move(*agreed));
    }
    if (next.size() > limits_.max_downsets) {
      throw CapExceeded("execution has more than " +
                        std::to_string(limits_.max_downsets) + " downsets");
    }
    next.sort_canonical();
    return next;
  }

  const Program& program_;
  std::size_t variant_;
  bool complete_only_;
  const Limits& limits_;
  EnumerationStats& stats_;
  Collector& out_;
  std::vector<int> topo_;
  std::unordered_set<Order, OrderHash> visited_;
};

}  // namespace

EnumerationResult enumerate_cc(const Program& program, const State& init,
                               bool complete_only, const Limits& limits) {
  require_size(program, limits);
  EnumerationStats stats;
  Collector out(complete_only);
  const auto variants = desugar_reads(program);
  stats.variants = variants.size();
  for (std::size_t v = 0; v < variants.size(); ++v) {
    CcSearch(variants[v], v, init, complete_only, limits, stats, out);
  }
  return std::move(out).finish(stats);
}

EnumerationResult enumerate_cc_oracle(const Program& program, const State& init,
                                      bool complete_only) {
  if (program.size() > kOracleMaxOps) {
    throw PreconditionError("oracle enumeration is limited to " +
                            std::to_string(kOracleMaxOps) + " operations");
  }
  EnumerationStats stats;
  Collector out(complete_only);
  const auto variants = desugar_reads(program);
  stats.variants = variants.size();
  for (std::size_t v = 0; v < variants.size(); ++v) {
    const Program& p = variants[v];
    for (OpSet carrier : downsets(p.order())) {
      if (complete_only && carrier != p.all()) continue;
      const Order base = p.order().restricted(carrier);
      std::vector<Edge> free;
      for (int a : members(carrier)) {
        for (int b : members(carrier)) {
          if (a < b && !base.comparable(a, b)) free.emplace_back(a, b);
        }
      }
      // Each free pair is unordered, a<b, or b<a.
      std::vector<int> choice(free.size(), 0);
      while (true) {
        ++stats.explored;
        Order cand = base;
        for (std::size_t i = 0; i < free.size(); ++i) {
          if (choice[i] == 1) cand.add(free[i].first, free[i].second);
          if (choice[i] == 2) cand.add(free[i].second, free[i].first);
        }
        cand.close();
        bool exact = cand.irreflexive();
        for (std::size_t i = 0; exact && i < free.size(); ++i) {
          const auto [a, b] = free[i];
          const int got = cand.precedes(a, b) ? 1 : cand.precedes(b, a) ? 2 : 0;
          exact = got == choice[i];
        }
        if (exact) {
          Verdict verdict = validate_execution(p, cand, carrier, init);
          if (is_valid(verdict)) {
            State final_state = std::get<RedMap>(build_red(p, cand, init)).at(carrier);
            out.add({cand, std::move(final_state), v}, stats);
          } else if (std::holds_alternative<E1Violation>(verdict)) {
            ++stats.pruned_guard;
          } else {
            ++stats.pruned_coherence;
          }
        }
        std::size_t i = 0;
        while (i < choice.size() && ++choice[i] == 3) choice[i++] = 0;
        if (i == choice.size()) break;
      }
    }
  }
  return std::move(out).finish(stats);
}

namespace {

class ScSearch {
 public:
  ScSearch(const Program& program, std::size_t variant, bool complete_only,
           const Limits& limits, EnumerationStats& stats, Collector& out)
      : program_(program),
        variant_(variant),
        complete_only_(complete_only),
        limits_(limits),
        stats_(stats),
        out_(out) {}

  void run(const State& init) {
    std::vector<int> sequence;
    visit(sequence, 0, init);
  }

 private:
  void visit(std::vector<int>& sequence, OpSet placed, const State& s) {
    if (++stats_.explored > limits_.max_states) {
      throw CapExceeded("more than " + std::to_string(limits_.max_states) +
                        " sequential prefixes explored");
    }
    if (!complete_only_ || placed == program_.all()) {
      Order chain(program_.size(), placed);
      OpSet earlier = 0;
      for (int o : sequence) {
        chain.set_predecessors(o, earlier);
        earlier |= bit(o);
      }
      out_.add({chain, s, variant_}, stats_);
    }
    for (std::size_t i = 0; i < program_.size(); ++i) {
      const int o = static_cast<int>(i);
      if (has(placed, o)) continue;
      if (!subset(program_.order().predecessors(o), placed)) continue;
      const auto& op = program_.op(o);
      if (!eval_guard(op.guard, s)) {
        ++stats_.pruned_guard;
        continue;
      }
      sequence.push_back(o);
      visit(sequence, placed | bit(o), op.update.apply(s, program_.vars()));
      sequence.pop_back();
    }
  }

  const Program& program_;
  std::size_t variant_;
  bool complete_only_;
  const Limits& limits_;
  EnumerationStats& stats_;
  Collector& out_;
};

}  // namespace

EnumerationResult enumerate_sc(const Program& program, const State& init,
                               bool complete_only, const Limits& limits) {
  require_size(program, limits);
  EnumerationStats stats;
  Collector out(complete_only);
  const auto variants = desugar_reads(program);
  stats.variants = variants.size();
  for (std::size_t v = 0; v < variants.size(); ++v) {
    ScSearch(variants[v], v, complete_only, limits, stats, out).run(init);
  }
  return std::move(out).finish(stats);
}

std::set<State> behaviors(const EnumerationResult& result) {
  std::set<State> out;
  for (const auto& r : result.executions) out.insert(r.final_state);
  return out;
}

std::set<ExecutionKey> execution_keys(const EnumerationResult& result) {
  std::set<ExecutionKey> out;
  for (const auto& r : result.executions) out.insert(key_of(r));
  return out;
}

}  // namespace ccm
