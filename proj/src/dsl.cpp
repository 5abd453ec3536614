#include "ccm/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <tuple>

namespace ccm::dsl {

namespace {

struct Token {
  enum class Kind { kIdent, kInt, kPunct, kEnd };
  Kind kind = Kind::kEnd;
  std::string text;
  int line = 1;
  int column = 1;
};

const char* const kPuncts[] = {":=", "->", "..", "==", "!=", "&&", "||", "{", "}",
                               "(",  ")",  ";",  ":",  ",",  "<",  "[",  "]",
                               "=",  "!"};

const char* const kKeywords[] = {"true", "false", "skip", "wait", "read", "rmw"};

bool is_keyword(std::string_view s) {
  for (const char* k : kKeywords) {
    if (s == k) return true;
  }
  return false;
}

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) {
        ++j;
      }
      t.kind = Token::Kind::kIdent;
      t.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j - i > 3) throw ParseError(line, col, "integer literal too large");
      t.kind = Token::Kind::kInt;
      t.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else {
      for (const char* p : kPuncts) {
        if (text.substr(i).starts_with(p)) {
          t.kind = Token::Kind::kPunct;
          t.text = p;
          break;
        }
      }
      if (t.kind != Token::Kind::kPunct) {
        throw ParseError(line, col, std::string("unexpected character '") + c + "'");
      }
      advance(t.text.size());
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(lex(text)) {}

  Document run() {
    while (peek().kind != Token::Kind::kEnd) section();
    return finish();
  }

 private:
  struct PendingOp {
    Operation op;
    Token at;
  };

  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  Token next() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool at_punct(std::string_view p) const {
    return peek().kind == Token::Kind::kPunct && peek().text == p;
  }
  bool accept(std::string_view p) {
    if (!at_punct(p)) return false;
    next();
    return true;
  }
  [[noreturn]] static void fail(const Token& t, const std::string& why) {
    throw ParseError(t.line, t.column, why);
  }
  static std::string shown(const Token& t) {
    return t.kind == Token::Kind::kEnd ? "end of input" : "'" + t.text + "'";
  }
  Token expect(std::string_view p) {
    if (!at_punct(p)) fail(peek(), "expected '" + std::string(p) + "', found " + shown(peek()));
    return next();
  }
  Token ident(const char* what) {
    if (peek().kind != Token::Kind::kIdent) {
      fail(peek(), std::string("expected ") + what + ", found " + shown(peek()));
    }
    return next();
  }
  bool at_word(std::string_view w) const {
    return peek().kind == Token::Kind::kIdent && peek().text == w;
  }
  int integer() {
    if (peek().kind != Token::Kind::kInt) fail(peek(), "expected an integer, found " + shown(peek()));
    return std::stoi(next().text);
  }

  int variable(const Token& t) const {
    if (auto v = vars_.find(t.text)) return *v;
    fail(t, "unknown variable '" + t.text + "'");
  }

  void section() {
    const Token kw = ident("a section keyword");
    if (kw.text == "vars" || kw.text == "ghost") {
      declarations(kw.text == "ghost");
    } else if (kw.text == "init" || kw.text == "final") {
      auto& slot = kw.text == "init" ? init_ : final_;
      if (slot) fail(kw, "more than one " + kw.text + " operation");
      PendingOp p = statement();
      p.op.placement = kw.text == "init" ? Placement::kInit : Placement::kFinal;
      slot = std::move(p);
    } else if (kw.text == "thread") {
      const Token name = ident("a thread name");
      for (const auto& t : threads_) {
        if (t == name.text) fail(name, "duplicate thread '" + name.text + "'");
      }
      const int index = static_cast<int>(threads_.size());
      threads_.push_back(name.text);
      bodies_.emplace_back();
      expect("{");
      while (!accept("}")) {
        PendingOp p = statement();
        p.op.thread = index;
        bodies_.back().push_back(std::move(p));
      }
    } else if (kw.text == "order") {
      expect("{");
      while (!accept("}")) {
        const Token a = ident("an operation label");
        expect("<");
        const Token b = ident("an operation label");
        expect(";");
        order_.emplace_back(a, b);
      }
    } else if (kw.text == "shared" || kw.text == "unshared") {
      const bool shared = kw.text == "shared";
      expect("{");
      while (!accept("}")) {
        const Token v = ident("a variable");
        const int var = variable(v);
        std::optional<Token> owner;
        if (!shared) {
          expect(":");
          owner = ident("a thread name");
        }
        expect(";");
        for (const auto& c : classes_) {
          if (std::get<1>(c) == var) fail(v, "variable '" + v.text + "' classified twice");
        }
        classes_.emplace_back(v, var, owner);
      }
    } else if (kw.text == "conflict") {
      expect("{");
      while (!accept("}")) {
        const Token label = ident("an operation label");
        expect(":");
        std::vector<std::string> names;
        do {
          names.push_back(ident("a conflict variable").text);
        } while (accept(","));
        expect(";");
        conflicts_.emplace_back(label, std::move(names));
      }
    } else if (kw.text == "augment") {
      expect("{");
      while (!accept("}")) {
        const Token label = ident("an operation label");
        expect(":");
        auto assigns = assignments(peek());
        expect(";");
        augments_.emplace_back(label, std::move(assigns));
      }
    } else if (kw.text == "annotation") {
      has_annotation_ = true;
      expect("{");
      while (!accept("}")) {
        expect("(");
        const Token a = ident("an operation label");
        expect(",");
        const Token b = ident("an operation label");
        expect(")");
        expect(":");
        Expr e = bool_expr();
        expect(";");
        annotation_.emplace_back(a, b, std::move(e));
      }
    } else {
      fail(kw, "unknown section '" + kw.text + "'");
    }
  }

  void declarations(bool ghost) {
    expect("{");
    while (!accept("}")) {
      const Token name = ident("a variable name");
      if (is_keyword(name.text)) fail(name, "'" + name.text + "' is reserved");
      expect(":");
      const Token type = ident("a type");
      VarDecl decl{name.text, Domain::boolean_domain(), 0, ghost};
      if (type.text == "int") {
        expect("[");
        const Token lo_tok = peek();
        if (integer() != 0) fail(lo_tok, "integer ranges start at 0");
        expect("..");
        const Token hi_tok = peek();
        const int hi = integer();
        if (hi < 1 || hi > kMaxIntBound) {
          fail(hi_tok, "integer range bound must lie in 1.." + std::to_string(kMaxIntBound));
        }
        expect("]");
        decl.domain = Domain::int_range(hi);
      } else if (type.text != "bool") {
        fail(type, "unknown type '" + type.text + "'");
      }
      if (accept("=")) {
        const Token lit = peek();
        if (at_word("true") || at_word("false")) {
          if (!decl.domain.boolean) fail(lit, "boolean initial value for integer '" + name.text + "'");
          decl.init = next().text == "true" ? 1 : 0;
        } else {
          if (decl.domain.boolean) fail(lit, "integer initial value for boolean '" + name.text + "'");
          decl.init = integer();
          if (!decl.domain.contains(decl.init)) {
            fail(lit, "initial value outside the domain of '" + name.text + "'");
          }
        }
      }
      expect(";");
      try {
        vars_.add(decl);
      } catch (const ValidationError& e) {
        fail(name, e.what());
      }
    }
  }

  PendingOp statement() {
    PendingOp p;
    p.at = ident("an operation label");
    if (is_keyword(p.at.text)) fail(p.at, "'" + p.at.text + "' is reserved");
    Operation& op = p.op;
    op.id = p.at.text;
    expect(":");
    const Token head = peek();
    if (at_word("skip")) {
      next();
      op.form = StmtForm::kSkip;
    } else if (at_word("wait")) {
      next();
      op.form = StmtForm::kWait;
      op.guard = bool_expr();
    } else if (at_word("read")) {
      next();
      op.form = StmtForm::kRead;
      const Token target = ident("a variable");
      expect(":=");
      const Token source = ident("a variable");
      op.weak_read = WeakRead{variable(target), variable(source)};
      const auto& vt = vars_[static_cast<std::size_t>(op.weak_read->target)];
      const auto& vs = vars_[static_cast<std::size_t>(op.weak_read->source)];
      if (vt.domain != vs.domain) fail(target, "read between variables of different domains");
    } else if (at_word("rmw")) {
      next();
      op.form = StmtForm::kRmw;
      const Token v = ident("a variable");
      const int var = variable(v);
      expect(":");
      const Token guard_at = peek();
      op.guard = bool_expr();
      for (int r : op.guard.vars()) {
        if (r != var) fail(guard_at, "rmw guard may only test '" + v.text + "'");
      }
      expect("->");
      const Token upd_at = peek();
      op.update = Update(assignments(upd_at));
      if (op.update.targets() != std::set<int>{var}) {
        fail(upd_at, "rmw may only assign '" + v.text + "'");
      }
    } else {
      op.form = StmtForm::kWrite;
      op.update = Update(assignments(head));
    }
    expect(";");
    return p;
  }

  std::vector<Assignment> assignments(const Token& at) {
    std::vector<Token> lhs;
    do {
      lhs.push_back(ident("a variable"));
    } while (accept(","));
    expect(":=");
    std::vector<std::pair<Token, Expr>> rhs;
    do {
      const Token t = peek();
      rhs.emplace_back(t, expr());
    } while (accept(","));
    if (lhs.size() != rhs.size()) {
      fail(at, std::to_string(lhs.size()) + " targets but " +
                   std::to_string(rhs.size()) + " values");
    }
    std::vector<Assignment> out;
    for (std::size_t i = 0; i < lhs.size(); ++i) {
      const int var = variable(lhs[i]);
      for (const auto& a : out) {
        if (a.var == var) fail(lhs[i], "variable '" + lhs[i].text + "' assigned twice");
      }
      Assignment a{var, rhs[i].second};
      try {
        check_update(Update({a}), vars_);
      } catch (const Error& e) {
        fail(rhs[i].first, e.what());
      }
      out.push_back(std::move(a));
    }
    return out;
  }

  Expr bool_expr() {
    const Token at = peek();
    Expr e = expr();
    try {
      require_bool(e, vars_);
    } catch (const ValidationError& err) {
      fail(at, err.what());
    }
    return e;
  }

  Expr expr() {
    Expr e = conjunction();
    while (accept("||")) e = Expr::disj(std::move(e), conjunction());
    return e;
  }
  Expr conjunction() {
    Expr e = comparison();
    while (accept("&&")) e = Expr::conj(std::move(e), comparison());
    return e;
  }
  Expr comparison() {
    const Token at = peek();
    Expr e = unary();
    if (at_punct("==") || at_punct("!=")) {
      const bool eq = next().text == "==";
      Expr rhs = unary();
      e = eq ? Expr::eq(std::move(e), std::move(rhs)) : Expr::ne(std::move(e), std::move(rhs));
      try {
        type_of(e, vars_);
      } catch (const ValidationError& err) {
        fail(at, err.what());
      }
      if (at_punct("==") || at_punct("!=")) fail(peek(), "comparisons do not chain; add parentheses");
    }
    return e;
  }
  Expr unary() {
    if (accept("!")) {
      const Token at = peek();
      Expr e = unary();
      try {
        require_bool(e, vars_);
      } catch (const ValidationError& err) {
        fail(at, err.what());
      }
      return Expr::negate(std::move(e));
    }
    return atom();
  }
  Expr atom() {
    const Token t = peek();
    if (accept("(")) {
      Expr e = expr();
      expect(")");
      return e;
    }
    if (t.kind == Token::Kind::kInt) {
      const int v = integer();
      if (v > kMaxIntBound) fail(t, "integer literal out of range");
      return Expr::integer(v);
    }
    if (t.kind == Token::Kind::kIdent) {
      next();
      if (t.text == "true") return Expr::boolean(true);
      if (t.text == "false") return Expr::boolean(false);
      return Expr::var(variable(t));
    }
    fail(t, "expected an expression, found " + shown(t));
  }

  Document finish() {
    std::vector<PendingOp> pending;
    if (init_) pending.push_back(*init_);
    for (auto& body : bodies_) {
      for (auto& p : body) pending.push_back(p);
    }
    if (final_) pending.push_back(*final_);

    std::map<std::string, int> labels;
    for (std::size_t i = 0; i < pending.size(); ++i) {
      const auto& p = pending[i];
      if (!labels.emplace(p.op.id, static_cast<int>(i)).second) {
        fail(p.at, "duplicate label '" + p.op.id + "'");
      }
    }
    if (pending.size() > kMaxOps) {
      fail(pending[kMaxOps].at, "programs are limited to " + std::to_string(kMaxOps) + " operations");
    }
    auto label = [&](const Token& t) {
      auto it = labels.find(t.text);
      if (it == labels.end()) fail(t, "unknown label '" + t.text + "'");
      return it->second;
    };

    std::vector<Operation> ops;
    for (auto& p : pending) ops.push_back(p.op);
    for (const auto& [at, names] : conflicts_) {
      auto& op = ops[static_cast<std::size_t>(label(at))];
      for (const auto& n : names) op.conflict_vars.insert(n);
    }
    for (const auto& [at, assigns] : augments_) {
      auto& op = ops[static_cast<std::size_t>(label(at))];
      if (op.weak_read) fail(at, "cannot augment the weak read '" + at.text + "'");
      try {
        op.update.append(assigns);
      } catch (const ValidationError&) {
        fail(at, "augmentation of '" + at.text + "' reassigns a variable");
      }
      for (const auto& a : assigns) op.ghost_targets.insert(a.var);
    }
    std::vector<Edge> edges;
    for (const auto& [a, b] : order_) edges.emplace_back(label(a), label(b));

    Document doc;
    try {
      doc.program = Program(vars_, std::move(ops), std::move(edges), threads_);
    } catch (const ValidationError& e) {
      const Token& at = order_.empty() ? toks_.front() : order_.front().first;
      fail(at, e.what());
    }

    doc.has_annotation = has_annotation_;
    for (const auto& [a, b, e] : annotation_) {
      const int from = label(a);
      const int to = label(b);
      if (from == to) fail(a, "annotation on the pair (" + a.text + ", " + a.text + ")");
      if (doc.annotation.contains(from, to)) {
        fail(a, "duplicate annotation for (" + a.text + ", " + b.text + ")");
      }
      doc.annotation.set(from, to, Predicate(e));
    }

    for (const auto& [at, var, owner] : classes_) {
      tso::VarClass c = tso::VarClass::shared_var();
      if (owner) {
        auto it = std::find(threads_.begin(), threads_.end(), owner->text);
        if (it == threads_.end()) fail(*owner, "unknown thread '" + owner->text + "'");
        c = tso::VarClass::owned_by(static_cast<int>(it - threads_.begin()));
      }
      doc.declared_classes[var] = c;
    }
    try {
      tso::classify_variables(doc.program, doc.declared_classes);
    } catch (const ValidationError& e) {
      fail(std::get<0>(classes_.front()), e.what());
    }
    return doc;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  VarTable vars_;
  std::optional<PendingOp> init_;
  std::optional<PendingOp> final_;
  std::vector<std::string> threads_;
  std::vector<std::vector<PendingOp>> bodies_;
  std::vector<std::pair<Token, Token>> order_;
  std::vector<std::tuple<Token, int, std::optional<Token>>> classes_;
  std::vector<std::pair<Token, std::vector<std::string>>> conflicts_;
  std::vector<std::pair<Token, std::vector<Assignment>>> augments_;
  bool has_annotation_ = false;
  std::vector<std::tuple<Token, Token, Expr>> annotation_;
};

Update base_update(const Operation& op) {
  std::vector<Assignment> kept;
  for (const auto& a : op.update.assignments()) {
    if (!op.ghost_targets.contains(a.var)) kept.push_back(a);
  }
  return Update(std::move(kept));
}

Update ghost_update(const Operation& op) {
  std::vector<Assignment> kept;
  for (const auto& a : op.update.assignments()) {
    if (op.ghost_targets.contains(a.var)) kept.push_back(a);
  }
  return Update(std::move(kept));
}

std::string statement(const Operation& op, const VarTable& vars) {
  const Update base = base_update(op);
  std::string body;
  switch (op.form) {
    case StmtForm::kSkip:
      body = "skip";
      break;
    case StmtForm::kWait:
      body = "wait " + to_string(op.guard, vars);
      break;
    case StmtForm::kRead:
      body = "read " + vars[static_cast<std::size_t>(op.weak_read->target)].name +
             " := " + vars[static_cast<std::size_t>(op.weak_read->source)].name;
      break;
    case StmtForm::kRmw:
      body = "rmw " + vars[static_cast<std::size_t>(base.assignments().front().var)].name +
             ": " + to_string(op.guard, vars) + " -> " + to_string(base, vars);
      break;
    case StmtForm::kWrite:
      body = to_string(base, vars);
      break;
  }
  return op.id + ": " + body + ";";
}

std::string declaration(const VarDecl& d) {
  if (d.domain.boolean) {
    return d.name + ": bool = " + (d.init ? "true" : "false") + ";";
  }
  return d.name + ": int[0.." + std::to_string(d.domain.max) +
         "] = " + std::to_string(d.init) + ";";
}

}  // namespace

bool Document::has_ghost() const {
  for (const auto& v : program.vars()) {
    if (v.ghost) return true;
  }
  return false;
}

Document parse(std::string_view text) { return Parser(text).run(); }

std::string serialize(const Document& doc) {
  const Program& p = doc.program;
  const VarTable& vars = p.vars();
  std::ostringstream out;
  auto block = [&](const std::string& head, const std::vector<std::string>& lines) {
    out << "\n" << head << " {\n";
    for (const auto& l : lines) out << "  " << l << "\n";
    out << "}\n";
  };

  std::vector<std::string> concrete;
  std::vector<std::string> ghost;
  for (const auto& v : vars) (v.ghost ? ghost : concrete).push_back(declaration(v));
  out << "vars {\n";
  for (const auto& l : concrete) out << "  " << l << "\n";
  out << "}\n";
  if (!ghost.empty()) block("ghost", ghost);

  for (const auto& op : p.ops()) {
    if (op.placement == Placement::kInit) out << "\ninit " << statement(op, vars) << "\n";
  }
  for (std::size_t t = 0; t < p.threads().size(); ++t) {
    std::vector<std::string> lines;
    for (int o : p.thread_ops(static_cast<int>(t))) lines.push_back(statement(p.op(o), vars));
    block("thread " + p.threads()[t], lines);
  }
  for (const auto& op : p.ops()) {
    if (op.placement == Placement::kFinal) out << "\nfinal " << statement(op, vars) << "\n";
  }

  // Only the covering edges that thread and init/final placement do not
  // already imply.
  const Order implied = Program(vars, p.ops(), {}, p.threads()).order();
  const Order& full = p.order();
  std::vector<std::string> order_lines;
  for (auto [a, b] : full.edges()) {
    if (implied.precedes(a, b)) continue;
    bool covering = true;
    for (int c : members(full.successors(a))) {
      covering = covering && !full.precedes(c, b);
    }
    if (covering) order_lines.push_back(p.op(a).id + " < " + p.op(b).id + ";");
  }
  if (!order_lines.empty()) block("order", order_lines);

  std::vector<std::string> shared;
  std::vector<std::string> unshared;
  for (const auto& [v, c] : doc.declared_classes) {
    const std::string& name = vars[static_cast<std::size_t>(v)].name;
    if (c.shared) {
      shared.push_back(name + ";");
    } else {
      unshared.push_back(name + ": " + p.threads()[static_cast<std::size_t>(c.owner)] + ";");
    }
  }
  if (!shared.empty()) block("shared", shared);
  if (!unshared.empty()) block("unshared", unshared);

  std::vector<std::string> conflict;
  std::vector<std::string> augment;
  for (const auto& op : p.ops()) {
    if (!op.conflict_vars.empty()) {
      std::string l = op.id + ": ";
      bool first = true;
      for (const auto& c : op.conflict_vars) {
        l += (first ? "" : ", ") + c;
        first = false;
      }
      conflict.push_back(l + ";");
    }
    const Update g = ghost_update(op);
    if (!g.is_skip()) augment.push_back(op.id + ": " + to_string(g, vars) + ";");
  }
  if (!conflict.empty()) block("conflict", conflict);
  if (!augment.empty()) block("augment", augment);

  if (doc.has_annotation) {
    std::vector<std::string> lines;
    for (const auto& [key, pred] : doc.annotation.entries()) {
      lines.push_back("(" + p.op(key.first).id + ", " + p.op(key.second).id +
                      "): " + to_string(pred, vars) + ";");
    }
    block("annotation", lines);
  }
  return out.str();
}

Document load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LookupError("cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

}  // namespace ccm::dsl
