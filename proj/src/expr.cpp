#include "ccm/expr.hpp"

#include "ccm/error.hpp"

namespace ccm {

Expr Expr::conj(Expr a, Expr b) {
  return Expr(Kind::kAnd, 0, -1, {std::move(a), std::move(b)});
}
Expr Expr::disj(Expr a, Expr b) {
  return Expr(Kind::kOr, 0, -1, {std::move(a), std::move(b)});
}
Expr Expr::eq(Expr a, Expr b) {
  return Expr(Kind::kEq, 0, -1, {std::move(a), std::move(b)});
}
Expr Expr::ne(Expr a, Expr b) {
  return Expr(Kind::kNe, 0, -1, {std::move(a), std::move(b)});
}

bool Expr::is_constant() const {
  if (kind_ == Kind::kVar) return false;
  for (const auto& a : args_) {
    if (!a.is_constant()) return false;
  }
  return true;
}

int Expr::eval(const State& s) const {
  switch (kind_) {
    case Kind::kBool:
    case Kind::kInt:
      return value_;
    case Kind::kVar:
      return s[static_cast<std::size_t>(var_)];
    case Kind::kNot:
      return args_[0].eval(s) ? 0 : 1;
    case Kind::kAnd:
      return args_[0].eval(s) && args_[1].eval(s) ? 1 : 0;
    case Kind::kOr:
      return args_[0].eval(s) || args_[1].eval(s) ? 1 : 0;
    case Kind::kEq:
      return args_[0].eval(s) == args_[1].eval(s) ? 1 : 0;
    case Kind::kNe:
      return args_[0].eval(s) != args_[1].eval(s) ? 1 : 0;
  }
  throw InternalError("unhandled expression kind");
}

void Expr::collect_vars(std::set<int>& out) const {
  if (kind_ == Kind::kVar) out.insert(var_);
  for (const auto& a : args_) a.collect_vars(out);
}

Expr Expr::remapped(const std::vector<int>& map) const {
  Expr e = *this;
  if (kind_ == Kind::kVar) e.var_ = map.at(static_cast<std::size_t>(var_));
  for (auto& a : e.args_) a = a.remapped(map);
  return e;
}

Type type_of(const Expr& e, const VarTable& vars) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::kBool:
      return Type::kBool;
    case K::kInt:
      if (e.value() < 0 || e.value() > kMaxIntBound) {
        throw ValidationError("integer literal " + std::to_string(e.value()) +
                              " out of range");
      }
      return Type::kInt;
    case K::kVar:
      if (e.var_index() < 0 ||
          static_cast<std::size_t>(e.var_index()) >= vars.size()) {
        throw ValidationError("reference to undeclared variable #" +
                              std::to_string(e.var_index()));
      }
      return vars[static_cast<std::size_t>(e.var_index())].domain.boolean
                 ? Type::kBool
                 : Type::kInt;
    case K::kNot:
      require_bool(e.args()[0], vars);
      return Type::kBool;
    case K::kAnd:
    case K::kOr:
      require_bool(e.args()[0], vars);
      require_bool(e.args()[1], vars);
      return Type::kBool;
    case K::kEq:
    case K::kNe:
      if (type_of(e.args()[0], vars) != type_of(e.args()[1], vars)) {
        throw ValidationError("comparison between boolean and integer in '" +
                              to_string(e, vars) + "'");
      }
      return Type::kBool;
  }
  throw InternalError("unhandled expression kind");
}

void require_bool(const Expr& e, const VarTable& vars) {
  if (type_of(e, vars) != Type::kBool) {
    throw ValidationError("expected a boolean expression, got '" +
                          to_string(e, vars) + "'");
  }
}

namespace {

int precedence(const Expr& e) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::kOr:
      return 1;
    case K::kAnd:
      return 2;
    case K::kEq:
    case K::kNe:
      return 3;
    case K::kNot:
      return 4;
    default:
      return 5;
  }
}

void render(const Expr& e, const VarTable& vars, std::string& out) {
  using K = Expr::Kind;
  auto child = [&](const Expr& c, bool parens) {
    if (parens) out += '(';
    render(c, vars, out);
    if (parens) out += ')';
  };
  const int p = precedence(e);
  switch (e.kind()) {
    case K::kBool:
      out += e.value() ? "true" : "false";
      return;
    case K::kInt:
      out += std::to_string(e.value());
      return;
    case K::kVar: {
      auto i = static_cast<std::size_t>(e.var_index());
      out += i < vars.size() ? vars[i].name : "#" + std::to_string(i);
      return;
    }
    case K::kNot:
      out += '!';
      child(e.args()[0], precedence(e.args()[0]) < p);
      return;
    case K::kAnd:
    case K::kOr:
    case K::kEq:
    case K::kNe: {
      const bool assoc = e.kind() == K::kAnd || e.kind() == K::kOr;
      const Expr& lhs = e.args()[0];
      const Expr& rhs = e.args()[1];
      child(lhs, assoc ? precedence(lhs) < p : precedence(lhs) <= p);
      out += e.kind() == K::kAnd  ? " && "
             : e.kind() == K::kOr ? " || "
             : e.kind() == K::kEq ? " == "
                                  : " != ";
      child(rhs, precedence(rhs) <= p);
      return;
    }
  }
}

}  // namespace

std::string to_string(const Expr& e, const VarTable& vars) {
  std::string out;
  render(e, vars, out);
  return out;
}

Update::Update(std::vector<Assignment> assignments) {
  append(assignments);
}

void Update::append(const std::vector<Assignment>& more) {
  for (const auto& a : more) {
    for (const auto& existing : assignments_) {
      if (existing.var == a.var) {
        throw ValidationError("variable #" + std::to_string(a.var) +
                              " assigned twice in one update");
      }
    }
    assignments_.push_back(a);
  }
}

std::set<int> Update::targets() const {
  std::set<int> out;
  for (const auto& a : assignments_) out.insert(a.var);
  return out;
}

std::set<int> Update::reads() const {
  std::set<int> out;
  for (const auto& a : assignments_) a.value.collect_vars(out);
  return out;
}

State Update::apply(const State& s, const VarTable& vars) const {
  State next = s;
  for (const auto& a : assignments_) {
    const int v = a.value.eval(s);
    const auto& decl = vars[static_cast<std::size_t>(a.var)];
    if (!decl.domain.contains(v)) throw DomainError(decl.name, v);
    next.set(static_cast<std::size_t>(a.var), v);
  }
  return next;
}

void check_update(const Update& u, const VarTable& vars) {
  for (const auto& a : u.assignments()) {
    if (a.var < 0 || static_cast<std::size_t>(a.var) >= vars.size()) {
      throw ValidationError("assignment to undeclared variable #" +
                            std::to_string(a.var));
    }
    const auto& decl = vars[static_cast<std::size_t>(a.var)];
    const Type t = type_of(a.value, vars);
    if ((t == Type::kBool) != decl.domain.boolean) {
      throw ValidationError("type mismatch assigning '" +
                            to_string(a.value, vars) + "' to '" + decl.name +
                            "'");
    }
    if (a.value.kind() == Expr::Kind::kInt &&
        !decl.domain.contains(a.value.value())) {
      throw DomainError(decl.name, a.value.value());
    }
  }
}

std::string to_string(const Update& u, const VarTable& vars) {
  if (u.is_skip()) return "skip";
  std::string lhs;
  std::string rhs;
  for (const auto& a : u.assignments()) {
    if (!lhs.empty()) {
      lhs += ", ";
      rhs += ", ";
    }
    lhs += vars[static_cast<std::size_t>(a.var)].name;
    rhs += to_string(a.value, vars);
  }
  return lhs + " := " + rhs;
}

}  // namespace ccm
