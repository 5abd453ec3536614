#ifndef CCM_EXPR_HPP_
#define CCM_EXPR_HPP_

#include <set>
#include <string>
#include <vector>

#include "ccm/state.hpp"

namespace ccm {

enum class Type { kBool, kInt };

// Guard and right-hand-side expressions. Variables are table indices.
class Expr {
 public:
  enum class Kind { kBool, kInt, kVar, kNot, kAnd, kOr, kEq, kNe };

  Expr() : Expr(Kind::kBool, 1, -1, {}) {}

  static Expr boolean(bool b) { return Expr(Kind::kBool, b ? 1 : 0, -1, {}); }
  static Expr integer(int v) { return Expr(Kind::kInt, v, -1, {}); }
  static Expr var(int index) { return Expr(Kind::kVar, 0, index, {}); }
  static Expr negate(Expr e) { return Expr(Kind::kNot, 0, -1, {std::move(e)}); }
  static Expr conj(Expr a, Expr b);
  static Expr disj(Expr a, Expr b);
  static Expr eq(Expr a, Expr b);
  static Expr ne(Expr a, Expr b);

  Kind kind() const { return kind_; }
  int value() const { return value_; }
  int var_index() const { return var_; }
  const std::vector<Expr>& args() const { return args_; }

  bool is_true() const { return kind_ == Kind::kBool && value_ == 1; }
  bool is_false() const { return kind_ == Kind::kBool && value_ == 0; }
  bool is_constant() const;

  int eval(const State& s) const;
  bool holds(const State& s) const { return eval(s) != 0; }

  void collect_vars(std::set<int>& out) const;
  std::set<int> vars() const {
    std::set<int> out;
    collect_vars(out);
    return out;
  }

  // Rewrites variable indices through `map` (map[old] = new).
  Expr remapped(const std::vector<int>& map) const;

  bool operator==(const Expr&) const = default;

 private:
  Expr(Kind kind, int value, int var, std::vector<Expr> args)
      : kind_(kind), value_(value), var_(var), args_(std::move(args)) {}

  Kind kind_;
  int value_;
  int var_;
  std::vector<Expr> args_;
};

// Throws ValidationError when the expression is ill-typed over `vars`.
Type type_of(const Expr& e, const VarTable& vars);
void require_bool(const Expr& e, const VarTable& vars);

// Minimal-parenthesis rendering; parsing the result yields the same tree.
std::string to_string(const Expr& e, const VarTable& vars);

struct Assignment {
  int var;
  Expr value;

  bool operator==(const Assignment&) const = default;
};

// A parallel assignment; the empty list is skip.
class Update {
 public:
  Update() = default;
  explicit Update(std::vector<Assignment> assignments);

  const std::vector<Assignment>& assignments() const { return assignments_; }
  bool is_skip() const { return assignments_.empty(); }
  std::set<int> targets() const;
  std::set<int> reads() const;

  // Evaluates every right-hand side in `s`, then assigns simultaneously.
  // Throws DomainError when a value leaves its target's domain.
  State apply(const State& s, const VarTable& vars) const;

  // Appends assignments; throws ValidationError on a repeated target.
  void append(const std::vector<Assignment>& more);

  bool operator==(const Update&) const = default;

 private:
  std::vector<Assignment> assignments_;
};

void check_update(const Update& u, const VarTable& vars);
std::string to_string(const Update& u, const VarTable& vars);

}  // namespace ccm

#endif  // CCM_EXPR_HPP_
