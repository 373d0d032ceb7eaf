#include "pcm/script.hpp"

#include <cctype>
#include <sstream>

namespace pcm {

namespace {

struct Token {
  enum Kind { Ident, Number, Punct, End } kind = End;
  std::string text;
  Rat num;
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : s_(text) { advance(); }
  const Token& peek() const { return tok_; }
  Token next() {
    Token t = tok_;
    advance();
    return t;
  }
  bool accept(const std::string& punct_or_ident) {
    if ((tok_.kind == Token::Punct || tok_.kind == Token::Ident) && tok_.text == punct_or_ident) {
      advance();
      return true;
    }
    return false;
  }
  Token expect(const std::string& what) {
    if ((tok_.kind == Token::Punct || tok_.kind == Token::Ident) && tok_.text == what)
      return next();
    fail("expected '" + what + "'");
    return {};
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw parse_error(msg, tok_.line, tok_.col);
  }

 private:
  std::string s_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;

  int cur() const { return pos_ < s_.size() ? static_cast<unsigned char>(s_[pos_]) : -1; }
  void bump() {
    if (cur() == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  void advance() {
    while (true) {
      while (std::isspace(cur())) bump();
      if (cur() == '#') {
        while (cur() != -1 && cur() != '\n') bump();
        continue;
      }
      break;
    }
    tok_ = Token{};
    tok_.line = line_;
    tok_.col = col_;
    int c = cur();
    if (c == -1) {
      tok_.kind = Token::End;
      return;
    }
    if (std::isalpha(c) || c == '_') {
      std::string id;
      while (std::isalnum(cur()) || cur() == '_') {
        id += static_cast<char>(cur());
        bump();
      }
      tok_.kind = Token::Ident;
      tok_.text = id;
      return;
    }
    if (std::isdigit(c)) {
      std::string digits;
      while (std::isdigit(cur())) {
        digits += static_cast<char>(cur());
        bump();
      }
      Rat value = Rat(Int(digits));
      if (cur() == '.') {
        bump();
        std::string frac;
        while (std::isdigit(cur())) {
          frac += static_cast<char>(cur());
          bump();
        }
        if (frac.empty()) throw parse_error("digits expected after decimal point", line_, col_);
        Int den = 1;
        for (size_t k = 0; k < frac.size(); ++k) den *= 10;
        value += Rat(Int(frac), den);
      }
      if (cur() == 'e' || cur() == 'E') {
        bump();
        bool neg = false;
        if (cur() == '+' || cur() == '-') {
          neg = cur() == '-';
          bump();
        }
        std::string ex;
        while (std::isdigit(cur())) {
          ex += static_cast<char>(cur());
          bump();
        }
        if (ex.empty()) throw parse_error("exponent digits expected", line_, col_);
        Int p10 = 1;
        long e = std::stol(ex);
        for (long k = 0; k < e; ++k) p10 *= 10;
        if (neg)
          value /= Rat(p10);
        else
          value *= Rat(p10);
      }
      tok_.kind = Token::Number;
      tok_.num = value;
      return;
    }
    static const std::string puncts = "+-*/^(),;:=[]<>";
    if (puncts.find(static_cast<char>(c)) != std::string::npos) {
      tok_.kind = Token::Punct;
      tok_.text = std::string(1, static_cast<char>(c));
      bump();
      return;
    }
    throw parse_error(std::string("unexpected character '") + static_cast<char>(c) + "'",
                      line_, col_);
  }
};

SNodePtr mk(SNode n) { return std::make_shared<SNode>(std::move(n)); }

class Parser {
 public:
  explicit Parser(const std::string& text) : lex_(text) {}

  Script parse() {
    Script s;
    while (lex_.peek().kind != Token::End) {
      const Token& t = lex_.peek();
      if (t.kind != Token::Ident) lex_.fail("declaration or command expected");
      if (t.text == "const") {
        parse_const(s);
      } else if (t.text == "base") {
        parse_base(s);
      } else if (t.text == "cell") {
        parse_cell(s);
      } else if (is_command(t.text)) {
        parse_command(s);
        if (lex_.peek().kind != Token::End) lex_.fail("input continues after the command");
        return s;
      } else {
        parse_func(s);
      }
    }
    lex_.fail("missing command");
  }

 private:
  Lexer lex_;

  static bool is_command(const std::string& k) {
    return k == "prepare" || k == "integrate" || k == "mellin" || k == "poles" ||
           k == "locus" || k == "grid" || k == "asymp" || k == "verify" || k == "noncomp";
  }

  void parse_const(Script& s) {
    lex_.expect("const");
    Token name = lex_.next();
    if (name.kind != Token::Ident) lex_.fail("constant name expected");
    lex_.expect("=");
    Token fn = lex_.next();
    if (fn.kind != Token::Ident || (fn.text != "sqrt" && fn.text != "log"))
      lex_.fail("constant definitions are sqrt(q) or log(q)");
    lex_.expect("(");
    SNodePtr arg = parse_expr();
    lex_.expect(")");
    lex_.expect(";");
    Rat q = const_rational(arg);
    s.consts.push_back(
        {name.text, IrrDef{fn.text == "sqrt" ? IrrDef::Sqrt : IrrDef::Log, q}});
  }

  Rat const_rational(const SNodePtr& e) {
    switch (e->kind) {
      case SNode::Num:
        return e->num;
      case SNode::Neg:
        return -const_rational(e->args[0]);
      case SNode::Bin: {
        Rat a = const_rational(e->args[0]);
        Rat b = const_rational(e->args[1]);
        switch (e->op) {
          case '+':
            return a + b;
          case '-':
            return a - b;
          case '*':
            return a * b;
          case '/':
            if (b == 0) throw parse_error("division by zero", e->line, e->col);
            return a / b;
        }
        break;
      }
      default:
        break;
    }
    throw parse_error("rational constant expected", e->line, e->col);
  }

  void parse_base(Script& s) {
    lex_.expect("base");
    Token name = lex_.next();
    if (name.kind != Token::Ident) lex_.fail("base variable name expected");
    lex_.expect("in");
    lex_.expect("(");
    Rat lo = const_rational(parse_expr());
    lex_.expect(",");
    Rat hi = const_rational(parse_expr());
    lex_.expect(")");
    lex_.expect(";");
    s.base_boxes[name.text] = {to_double(lo), to_double(hi)};
    s.base_order.push_back(name.text);
  }

  void parse_func(Script& s) {
    Token name = lex_.next();
    lex_.expect("(");
    Token param = lex_.next();
    if (param.kind != Token::Ident) lex_.fail("parameter name expected");
    lex_.expect(")");
    lex_.expect("=");
    SNodePtr body = parse_expr();
    lex_.expect(";");
    s.funcs[name.text] = {param.text, body};
  }

  void parse_cell(Script& s) {
    lex_.expect("cell");
    Token name = lex_.next();
    if (name.kind != Token::Ident) lex_.fail("cell name expected");
    lex_.expect(":");
    Token var = lex_.next();
    if (var.kind != Token::Ident) lex_.fail("fibre variable expected");
    lex_.expect("in");
    lex_.expect("(");
    CellDecl c;
    c.name = name.text;
    c.var = var.text;
    c.lower = parse_expr();
    lex_.expect(",");
    if (lex_.peek().kind == Token::Ident && lex_.peek().text == "inf") {
      lex_.next();
      c.upper = nullptr;
    } else {
      c.upper = parse_expr();
    }
    lex_.expect(")");
    if (lex_.accept("[")) {
      while (true) {
        Token key = lex_.next();
        if (key.kind != Token::Ident) lex_.fail("cell option name expected");
        lex_.expect("=");
        if (key.text == "theta") {
          c.theta = parse_expr();
        } else if (key.text == "sigma" || key.text == "tau") {
          SNodePtr v = parse_expr();
          Rat r = const_rational(v);
          int sv = r == 1 ? 1 : (r == -1 ? -1 : 0);
          if (sv == 0) throw parse_error("sign option must be 1 or -1", key.line, key.col);
          (key.text == "sigma" ? c.sigma : c.tau) = sv;
        } else {
          lex_.fail("unknown cell option " + key.text);
        }
        if (!lex_.accept(",")) break;
      }
      lex_.expect("]");
    }
    lex_.expect(";");
    s.cells[c.name] = c;
    s.cell_order.push_back(c.name);
  }

  void parse_command(Script& s) {
    Token kind = lex_.next();
    s.command.kind = kind.text;
    if (kind.text == "noncomp") {
      Token sub = lex_.next();
      if (sub.kind != Token::Ident) lex_.fail("noncomp sub-command expected");
      s.command.var = sub.text;
      lex_.expect(":");
      while (true) {
        Token key = lex_.next();
        if (key.kind != Token::Ident) lex_.fail("argument name expected");
        lex_.expect("=");
        if (lex_.accept("[")) {
          if (lex_.peek().kind == Token::Punct && lex_.peek().text == "(") {
            std::vector<std::pair<SNodePtr, SNodePtr>> tuples;
            while (true) {
              lex_.expect("(");
              SNodePtr a = parse_expr();
              lex_.expect(",");
              SNodePtr b = parse_expr();
              lex_.expect(")");
              tuples.emplace_back(a, b);
              if (!lex_.accept(",")) break;
            }
            lex_.expect("]");
            s.command.kv_pairs[key.text] = std::move(tuples);
          } else {
            std::vector<std::pair<SNodePtr, SNodePtr>> singles;
            while (true) {
              SNodePtr a = parse_expr();
              singles.emplace_back(a, nullptr);
              if (!lex_.accept(",")) break;
            }
            lex_.expect("]");
            s.command.kv_pairs[key.text] = std::move(singles);
          }
        } else {
          s.command.kv[key.text] = parse_expr();
        }
        if (!lex_.accept(",")) break;
      }
      lex_.expect(";");
      return;
    }
    Token var = lex_.next();
    if (var.kind != Token::Ident) lex_.fail("integration variable expected");
    s.command.var = var.text;
    lex_.expect(":");
    while (true) {
      Piece p;
      p.expr = parse_expr();
      lex_.expect("on");
      Token cell = lex_.next();
      if (cell.kind != Token::Ident) lex_.fail("cell name expected");
      p.cell = cell.text;
      s.command.pieces.push_back(std::move(p));
      if (!lex_.accept("+")) break;
    }
    lex_.expect(";");
  }

  SNodePtr parse_expr() {
    SNodePtr lhs = parse_term();
    while (lex_.peek().kind == Token::Punct &&
           (lex_.peek().text == "+" || lex_.peek().text == "-")) {
      Token op = lex_.next();
      SNode n;
      n.kind = SNode::Bin;
      n.op = op.text[0];
      n.line = op.line;
      n.col = op.col;
      n.args = {lhs, parse_term()};
      lhs = mk(std::move(n));
    }
    return lhs;
  }

  SNodePtr parse_term() {
    SNodePtr lhs = parse_factor();
    while (lex_.peek().kind == Token::Punct &&
           (lex_.peek().text == "*" || lex_.peek().text == "/")) {
      Token op = lex_.next();
      SNode n;
      n.kind = SNode::Bin;
      n.op = op.text[0];
      n.line = op.line;
      n.col = op.col;
      n.args = {lhs, parse_factor()};
      lhs = mk(std::move(n));
    }
    return lhs;
  }

  SNodePtr parse_factor() {
    if (lex_.peek().kind == Token::Punct && lex_.peek().text == "-") {
      Token op = lex_.next();
      SNode n;
      n.kind = SNode::Neg;
      n.line = op.line;
      n.col = op.col;
      n.args = {parse_factor()};
      return mk(std::move(n));
    }
    return parse_power();
  }

  SNodePtr parse_power() {
    SNodePtr base = parse_atom();
    if (lex_.peek().kind == Token::Punct && lex_.peek().text == "^") {
      Token op = lex_.next();
      if (lex_.peek().kind == Token::Punct && lex_.peek().text == "^")
        lex_.fail("'^^' is not an operator");
      SNode n;
      n.kind = SNode::Bin;
      n.op = '^';
      n.line = op.line;
      n.col = op.col;
      n.args = {base, parse_factor()};  // right-associative, longest match
      return mk(std::move(n));
    }
    return base;
  }

  SNodePtr parse_atom() {
    Token t = lex_.next();
    if (t.kind == Token::Number) {
      SNode n;
      n.kind = SNode::Num;
      n.num = t.num;
      n.line = t.line;
      n.col = t.col;
      return mk(std::move(n));
    }
    if (t.kind == Token::Ident) {
      if (lex_.peek().kind == Token::Punct && lex_.peek().text == "(") {
        lex_.next();
        SNode n;
        n.kind = SNode::Call;
        n.name = t.text;
        n.line = t.line;
        n.col = t.col;
        n.args.push_back(parse_expr());
        while (lex_.accept(",")) n.args.push_back(parse_expr());
        lex_.expect(")");
        return mk(std::move(n));
      }
      SNode n;
      n.kind = SNode::Ident;
      n.name = t.text;
      n.line = t.line;
      n.col = t.col;
      return mk(std::move(n));
    }
    if (t.kind == Token::Punct && t.text == "(") {
      SNodePtr inner = parse_expr();
      lex_.expect(")");
      return inner;
    }
    throw parse_error("expression expected", t.line, t.col);
  }
};

}  // namespace

namespace {

void validate_names(const Script& s, const SNodePtr& e, const std::vector<std::string>& vars) {
  if (!e) return;
  if (e->kind == SNode::Call) {
    if (e->name != "log" && e->name != "abs" && !s.funcs.count(e->name))
      throw parse_error("unknown function " + e->name, e->line, e->col);
    if (e->args.size() != 1)
      throw parse_error("function " + e->name + " takes one argument", e->line, e->col);
  }
  if (e->kind == SNode::Ident && e->name != "s" && e->name != "i" && e->name != "inf") {
    bool known = std::find(vars.begin(), vars.end(), e->name) != vars.end();
    for (auto& c : s.consts) known = known || c.name == e->name;
    known = known || IrrRegistry::instance().known(e->name);
    if (!known) throw parse_error("unknown identifier " + e->name, e->line, e->col);
  }
  for (auto& a : e->args) validate_names(s, a, vars);
}

}  // namespace

Script parse_script(const std::string& text) {
  Parser p(text);
  Script s = p.parse();
  for (auto& c : s.consts) IrrRegistry::instance().declare(c.name, c.def);
  for (auto& [name, f] : s.funcs) {
    std::vector<std::string> vars = s.base_order;
    vars.push_back(f.first);
    validate_names(s, f.second, vars);
  }
  for (auto& [name, c] : s.cells) {
    std::vector<std::string> vars = s.base_order;
    vars.push_back(c.var);
    validate_names(s, c.lower, vars);
    validate_names(s, c.upper, vars);
    validate_names(s, c.theta, vars);
  }
  for (auto& piece : s.command.pieces) {
    std::vector<std::string> vars = s.base_order;
    auto it = s.cells.find(piece.cell);
    if (it != s.cells.end()) vars.push_back(it->second.var);
    if (!s.command.var.empty()) vars.push_back(s.command.var);
    validate_names(s, piece.expr, vars);
  }
  return s;
}

std::string print_expr(const SNodePtr& e) {
  if (!e) return "inf";
  switch (e->kind) {
    case SNode::Num: {
      std::ostringstream os;
      os << e->num;
      std::string s = os.str();
      if (s.find('/') != std::string::npos) return "(" + s + ")";
      return s;
    }
    case SNode::Ident:
      return e->name;
    case SNode::Call: {
      std::string s = e->name + "(";
      for (size_t k = 0; k < e->args.size(); ++k) {
        if (k) s += ", ";
        s += print_expr(e->args[k]);
      }
      return s + ")";
    }
    case SNode::Neg:
      return "-(" + print_expr(e->args[0]) + ")";
    case SNode::Bin:
      return "(" + print_expr(e->args[0]) + " " + std::string(1, e->op) + " " +
             print_expr(e->args[1]) + ")";
  }
  return "?";
}

std::string print_script(const Script& s) {
  std::ostringstream os;
  for (auto& c : s.consts)
    os << "const " << c.name << " = " << (c.def.kind == IrrDef::Sqrt ? "sqrt" : "log") << "("
       << c.def.arg << ");\n";
  for (auto& name : s.base_order) {
    auto& box = s.base_boxes.at(name);
    os << "base " << name << " in (" << box.first << ", " << box.second << ");\n";
  }
  for (auto& [name, f] : s.funcs)
    os << name << "(" << f.first << ") = " << print_expr(f.second) << ";\n";
  for (auto& name : s.cell_order) {
    auto& c = s.cells.at(name);
    os << "cell " << c.name << ": " << c.var << " in (" << print_expr(c.lower) << ", "
       << print_expr(c.upper) << ")";
    if (c.theta || c.sigma != 1 || c.tau != 1) {
      os << " [";
      bool first = true;
      if (c.theta) {
        os << "theta = " << print_expr(c.theta);
        first = false;
      }
      if (c.sigma != 1) {
        os << (first ? "" : ", ") << "sigma = " << c.sigma;
        first = false;
      }
      if (c.tau != 1) os << (first ? "" : ", ") << "tau = " << c.tau;
      os << "]";
    }
    os << ";\n";
  }
  os << s.command.kind;
  if (!s.command.var.empty()) os << " " << s.command.var;
  os << ":";
  if (s.command.kind == "noncomp") {
    bool first = true;
    for (auto& [k, v] : s.command.kv) {
      os << (first ? " " : ", ") << k << " = " << print_expr(v);
      first = false;
    }
    for (auto& [k, tuples] : s.command.kv_pairs) {
      os << (first ? " " : ", ") << k << " = [";
      for (size_t i = 0; i < tuples.size(); ++i) {
        if (i) os << ", ";
        if (tuples[i].second)
          os << "(" << print_expr(tuples[i].first) << ", " << print_expr(tuples[i].second)
             << ")";
        else
          os << print_expr(tuples[i].first);
      }
      os << "]";
      first = false;
    }
  } else {
    for (size_t k = 0; k < s.command.pieces.size(); ++k) {
      os << (k ? " + " : " ") << print_expr(s.command.pieces[k].expr) << " on "
         << s.command.pieces[k].cell;
    }
  }
  os << ";\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// conversion
// ---------------------------------------------------------------------------

namespace {

bool is_var(const ConvertEnv& env, const std::string& name) {
  for (auto& v : env.vars)
    if (v == name) return true;
  return false;
}

struct AffineS {
  ExpCoeff alpha, c;
};

AffineS to_affine(const SNodePtr& e, const ConvertEnv& env);

AffineS affine_bin(const SNodePtr& e, const ConvertEnv& env) {
  AffineS a = to_affine(e->args[0], env);
  AffineS b = to_affine(e->args[1], env);
  switch (e->op) {
    case '+':
      return {a.alpha + b.alpha, a.c + b.c};
    case '-':
      return {a.alpha - b.alpha, a.c - b.c};
    case '*':
      if (a.alpha.is_zero()) return {a.c * b.alpha, a.c * b.c};
      if (b.alpha.is_zero()) return {b.c * a.alpha, b.c * a.c};
      throw parse_error("exponent is quadratic in s", e->line, e->col);
    case '/':
      if (!b.alpha.is_zero())
        throw parse_error("cannot divide by an s-dependent exponent", e->line, e->col);
      return {a.alpha / b.c, a.c / b.c};
  }
  throw parse_error("unsupported exponent operator", e->line, e->col);
}

AffineS to_affine(const SNodePtr& e, const ConvertEnv& env) {
  switch (e->kind) {
    case SNode::Num:
      return {ExpCoeff(0), ExpCoeff(e->num)};
    case SNode::Ident:
      if (e->name == "s") return {ExpCoeff(1), ExpCoeff(0)};
      if (e->name == "i") return {ExpCoeff(0), ExpCoeff::i()};
      if (IrrRegistry::instance().known(e->name))
        return {ExpCoeff(0), ExpCoeff::irrational(e->name)};
      throw parse_error("exponents must be affine in s with constant coefficients: " + e->name,
                        e->line, e->col);
    case SNode::Neg: {
      AffineS a = to_affine(e->args[0], env);
      return {-a.alpha, -a.c};
    }
    case SNode::Bin:
      return affine_bin(e, env);
    default:
      throw parse_error("unsupported exponent expression", e->line, e->col);
  }
}

}  // namespace

ExpCoeff to_scalar(const SNodePtr& e, const ConvertEnv& env) {
  AffineS a = to_affine(e, env);
  if (!a.alpha.is_zero()) throw parse_error("constant expected, found s", e->line, e->col);
  return a.c;
}

XExpr to_xexpr(const SNodePtr& e, const ConvertEnv& env) {
  switch (e->kind) {
    case SNode::Num:
      return XExpr::constant(ExpCoeff(e->num));
    case SNode::Ident: {
      if (is_var(env, e->name)) return XExpr::variable(e->name);
      if (e->name == "i") return XExpr::constant(ExpCoeff::i());
      if (e->name == "s") return XExpr::svar();
      if (IrrRegistry::instance().known(e->name))
        return XExpr::constant(ExpCoeff::irrational(e->name));
      throw parse_error("unknown identifier " + e->name, e->line, e->col);
    }
    case SNode::Neg:
      return XExpr::constant(ExpCoeff(-1)) * to_xexpr(e->args[0], env);
    case SNode::Call: {
      if (e->name == "log" && e->args.size() == 1) return log(to_xexpr(e->args[0], env));
      if (e->name == "abs" && e->args.size() == 1) return abs(to_xexpr(e->args[0], env));
      auto it = env.script->funcs.find(e->name);
      if (it == env.script->funcs.end())
        throw parse_error("unknown function " + e->name, e->line, e->col);
      if (e->args.size() != 1)
        throw parse_error("function " + e->name + " takes one argument", e->line, e->col);
      // substitute the body with the formal parameter bound to the argument
      XExpr arg = to_xexpr(e->args[0], env);
      const std::string& param = it->second.first;
      if (arg.node()->kind == XExpr::Node::Var && arg.node()->name == param)
        return to_xexpr(it->second.second, env);
      // general substitution: rebuild the body with param mapped to arg
      ConvertEnv sub_env = env;
      struct Subst {
        const ConvertEnv& env;
        const std::string& param;
        const XExpr& arg;
        XExpr walk(const SNodePtr& n) const {
          if (n->kind == SNode::Ident && n->name == param) return arg;
          if (n->kind == SNode::Num) return XExpr::constant(ExpCoeff(n->num));
          if (n->kind == SNode::Neg)
            return XExpr::constant(ExpCoeff(-1)) * walk(n->args[0]);
          if (n->kind == SNode::Bin) {
            if (n->op == '^') {
              AffineS a = to_affine(n->args[1], env);
              XExpr base = walk(n->args[0]);
              XExpr out = XExpr::one();
              if (!a.alpha.is_zero()) out = out * pow_s(base, a.alpha);
              if (!a.c.is_zero()) out = out * pow(base, a.c);
              return out;
            }
            XExpr l = walk(n->args[0]), r = walk(n->args[1]);
            switch (n->op) {
              case '+':
                return l + r;
              case '-':
                return l - r;
              case '*':
                return l * r;
              case '/':
                return l / r;
            }
          }
          return to_xexpr(n, env);
        }
      };
      return Subst{env, param, arg}.walk(it->second.second);
    }
    case SNode::Bin: {
      if (e->op == '^') {
        AffineS a = to_affine(e->args[1], env);
        XExpr base = to_xexpr(e->args[0], env);
        XExpr out = XExpr::one();
        if (!a.alpha.is_zero()) out = out * pow_s(base, a.alpha);
        if (!a.c.is_zero()) out = out * pow(base, a.c);
        if (a.alpha.is_zero() && a.c.is_zero()) out = XExpr::one();
        return out;
      }
      XExpr l = to_xexpr(e->args[0], env);
      XExpr r = to_xexpr(e->args[1], env);
      switch (e->op) {
        case '+':
          return l + r;
        case '-':
          return l - r;
        case '*':
          return l * r;
        case '/':
          return l / r;
      }
      throw parse_error("unsupported operator", e->line, e->col);
    }
  }
  throw parse_error("unsupported expression", e->line, e->col);
}

Cell1D build_cell(const Script& s, const std::string& cell_name) {
  auto it = s.cells.find(cell_name);
  if (it == s.cells.end()) throw unsupported_error("unknown cell " + cell_name);
  const CellDecl& c = it->second;
  Cell1D cell;
  cell.fibre_var = c.var;
  ConvertEnv env{&s, {}};
  for (auto& v : s.base_order) {
    env.vars.push_back(v);
    cell.base_vars.push_back(v);
    auto& box = s.base_boxes.at(v);
    cell.base_box[v] = DInt{box.first, box.second};
  }
  env.vars.push_back(c.var);
  cell.lower = to_xexpr(c.lower, env);
  cell.upper = c.upper ? to_xexpr(c.upper, env) : XExpr::infinity();
  if (c.theta) cell.theta = to_xexpr(c.theta, env);
  cell.sigma = c.sigma;
  cell.tau = c.tau;
  cell.certify();
  return cell;
}

}  // namespace pcm
