#include "pcm/xexpr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace pcm {

double EvalCtx::var(const std::string& name) const {
  if (!vars) throw std::domain_error("no variable bindings for " + name);
  auto it = vars->find(name);
  if (it == vars->end()) throw std::domain_error("unbound variable " + name);
  return it->second;
}

DInt DInt::widened() const {
  return {std::nextafter(lo, -1e308), std::nextafter(hi, 1e308)};
}

namespace {

DInt dadd(DInt a, DInt b) { return DInt{a.lo + b.lo, a.hi + b.hi}.widened(); }
DInt dsub(DInt a, DInt b) { return DInt{a.lo - b.hi, a.hi - b.lo}.widened(); }
DInt dmul(DInt a, DInt b) {
  double v[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return DInt{*std::min_element(v, v + 4), *std::max_element(v, v + 4)}.widened();
}
DInt ddiv(DInt a, DInt b) {
  if (b.lo <= 0 && b.hi >= 0) throw undecidable_error("interval division through zero");
  return dmul(a, DInt{1.0 / b.hi, 1.0 / b.lo}.widened());
}
DInt dlog(DInt a) {
  if (a.lo <= 0) throw undecidable_error("interval log of nonpositive range");
  return DInt{std::log(a.lo), std::log(a.hi)}.widened();
}
DInt dpow(DInt a, double e) {
  if (a.lo <= 0) throw undecidable_error("interval power of nonpositive range");
  DInt r{std::pow(a.lo, e), std::pow(a.hi, e)};
  if (e < 0) std::swap(r.lo, r.hi);
  return r.widened();
}
DInt dabs(DInt a) {
  if (a.lo >= 0) return a;
  if (a.hi <= 0) return DInt{-a.hi, -a.lo};
  return DInt{0.0, std::max(-a.lo, a.hi)};
}

}  // namespace

namespace {
using Node = XExpr::Node;

std::shared_ptr<const Node> make_const(const ExpCoeff& v) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Const;
  n->value = v;
  return n;
}
}  // namespace

XExpr::XExpr() : p_(make_const(ExpCoeff(0))) {}

XExpr XExpr::constant(const ExpCoeff& v) { return XExpr(make_const(v)); }

XExpr XExpr::variable(const std::string& name) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Var;
  n->name = name;
  return XExpr(n);
}

XExpr XExpr::svar() {
  auto n = std::make_shared<Node>();
  n->kind = Node::SVar;
  return XExpr(n);
}

XExpr XExpr::infinity() {
  auto n = std::make_shared<Node>();
  n->kind = Node::Inf;
  return XExpr(n);
}

bool XExpr::is_const() const { return p_->kind == Node::Const; }
bool XExpr::is_one() const { return is_const() && p_->value.is_one(); }
bool XExpr::is_zero() const { return is_const() && p_->value.is_zero(); }
bool XExpr::is_infinity() const { return p_->kind == Node::Inf; }
const ExpCoeff& XExpr::const_value() const {
  if (!is_const()) throw std::domain_error("expression is not constant");
  return p_->value;
}

bool XExpr::depends_on(const std::string& var) const {
  const Node* n = p_.get();
  switch (n->kind) {
    case Node::Const:
    case Node::Inf:
    case Node::SVar:
      return false;
    case Node::Var:
      return n->name == var;
    default: {
      bool d = n->a && XExpr(n->a).depends_on(var);
      if (!d && n->b) d = XExpr(n->b).depends_on(var);
      return d;
    }
  }
}

bool XExpr::depends_on_any(const std::vector<std::string>& vars) const {
  for (auto& v : vars)
    if (depends_on(v)) return true;
  return false;
}

XExpr operator+(const XExpr& a, const XExpr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.is_const() && b.is_const()) return XExpr::constant(a.const_value() + b.const_value());
  auto n = std::make_shared<Node>();
  n->kind = Node::Add;
  n->a = a.p_;
  n->b = b.p_;
  return XExpr(n);
}

XExpr operator-(const XExpr& a, const XExpr& b) {
  if (b.is_zero()) return a;
  if (a.is_const() && b.is_const()) return XExpr::constant(a.const_value() - b.const_value());
  auto n = std::make_shared<Node>();
  n->kind = Node::Sub;
  n->a = a.p_;
  n->b = b.p_;
  return XExpr(n);
}

XExpr operator*(const XExpr& a, const XExpr& b) {
  if (a.is_zero() || b.is_zero()) return XExpr::constant(ExpCoeff(0));
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  if (a.is_const() && b.is_const()) {
    try {
      return XExpr::constant(a.const_value() * b.const_value());
    } catch (const unsupported_error&) {
      // keep the product symbolic
    }
  }
  auto n = std::make_shared<Node>();
  n->kind = Node::Mul;
  n->a = a.p_;
  n->b = b.p_;
  return XExpr(n);
}

XExpr operator/(const XExpr& a, const XExpr& b) {
  if (b.is_one()) return a;
  if (a.is_zero()) return a;
  if (a.is_const() && b.is_const()) {
    try {
      return XExpr::constant(a.const_value() / b.const_value());
    } catch (const unsupported_error&) {
    }
  }
  auto n = std::make_shared<Node>();
  n->kind = Node::Div;
  n->a = a.p_;
  n->b = b.p_;
  return XExpr(n);
}

XExpr pow(const XExpr& base, const ExpCoeff& exponent) {
  if (exponent.is_zero()) return XExpr::one();
  if (exponent.is_one()) return base;
  if (base.is_one()) return base;
  if (base.is_const() && exponent.is_int_symbolic()) {
    Int e = exponent.integer();
    if (abs(e) <= 64) {
      try {
        ExpCoeff acc(1);
        ExpCoeff b = base.const_value();
        if (e < 0) b = b.inverse();
        for (Int k = 0; k < abs(e); ++k) acc = acc * b;
        return XExpr::constant(acc);
      } catch (const unsupported_error&) {
      }
    }
  }
  auto n = std::make_shared<Node>();
  n->kind = Node::Pow;
  n->value = exponent;
  n->a = XExpr(base).p_;
  return XExpr(n);
}

XExpr pow_s(const XExpr& base, const ExpCoeff& alpha) {
  if (alpha.is_zero()) return XExpr::one();
  auto n = std::make_shared<Node>();
  n->kind = Node::PowS;
  n->value = alpha;
  n->a = XExpr(base).p_;
  return XExpr(n);
}

XExpr log(const XExpr& arg) {
  if (arg.is_one()) return XExpr::constant(ExpCoeff(0));
  auto n = std::make_shared<Node>();
  n->kind = Node::Log;
  n->a = XExpr(arg).p_;
  return XExpr(n);
}

XExpr abs(const XExpr& arg) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Abs;
  n->a = XExpr(arg).p_;
  return XExpr(n);
}

std::complex<double> XExpr::eval(const EvalCtx& ctx) const {
  const Node* n = p_.get();
  switch (n->kind) {
    case Node::Const:
      return n->value.approx();
    case Node::Var:
      return {ctx.var(n->name), 0.0};
    case Node::SVar:
      return ctx.s;
    case Node::Inf:
      throw std::domain_error("cannot evaluate an infinite bound");
    case Node::Add:
      return XExpr(n->a).eval(ctx) + XExpr(n->b).eval(ctx);
    case Node::Sub:
      return XExpr(n->a).eval(ctx) - XExpr(n->b).eval(ctx);
    case Node::Mul:
      return XExpr(n->a).eval(ctx) * XExpr(n->b).eval(ctx);
    case Node::Div:
      return XExpr(n->a).eval(ctx) / XExpr(n->b).eval(ctx);
    case Node::Pow: {
      double base = XExpr(n->a).eval_real(ctx);
      std::complex<double> e = n->value.approx();
      if (base <= 0 && !(n->value.is_int_symbolic()))
        throw std::domain_error("power base must be positive: " + XExpr(n->a).str());
      if (base <= 0) {
        double ei = to_double(Rat(n->value.integer()));
        return {std::pow(base, ei), 0.0};
      }
      return std::exp(e * std::log(base));
    }
    case Node::PowS: {
      double base = XExpr(n->a).eval_real(ctx);
      if (base <= 0)
        throw std::domain_error("parametric power base must be positive: " + XExpr(n->a).str());
      return std::exp(n->value.approx() * ctx.s * std::log(base));
    }
    case Node::Log: {
      double a = XExpr(n->a).eval_real(ctx);
      if (a <= 0) throw std::domain_error("log argument must be positive: " + XExpr(n->a).str());
      return {std::log(a), 0.0};
    }
    case Node::Abs:
      return {std::abs(XExpr(n->a).eval(ctx)), 0.0};
  }
  return {0.0, 0.0};
}

double XExpr::eval_real(const EvalCtx& ctx) const {
  std::complex<double> v = eval(ctx);
  if (std::abs(v.imag()) > 1e-9 * (1.0 + std::abs(v.real())))
    throw std::domain_error("expected a real value from " + str());
  return v.real();
}

DInt XExpr::eval_interval(const Box& box) const {
  const Node* n = p_.get();
  switch (n->kind) {
    case Node::Const: {
      if (!n->value.is_real())
        throw undecidable_error("interval evaluation of a non-real constant");
      Interval e = n->value.real_enclosure(64);
      return DInt{e.lo(), e.hi()};
    }
    case Node::Var: {
      auto it = box.find(n->name);
      if (it == box.end()) throw std::domain_error("unbound variable " + n->name);
      return it->second;
    }
    case Node::SVar:
      throw undecidable_error("interval evaluation does not cover the s parameter");
    case Node::Inf:
      throw std::domain_error("cannot evaluate an infinite bound");
    case Node::Add:
      return dadd(XExpr(n->a).eval_interval(box), XExpr(n->b).eval_interval(box));
    case Node::Sub:
      return dsub(XExpr(n->a).eval_interval(box), XExpr(n->b).eval_interval(box));
    case Node::Mul:
      return dmul(XExpr(n->a).eval_interval(box), XExpr(n->b).eval_interval(box));
    case Node::Div:
      return ddiv(XExpr(n->a).eval_interval(box), XExpr(n->b).eval_interval(box));
    case Node::Pow: {
      if (!n->value.is_real())
        throw undecidable_error("interval power with non-real exponent");
      Interval e = n->value.real_enclosure(64);
      if (e.lo() != e.hi()) {
        // widen across the exponent enclosure
        DInt b = XExpr(n->a).eval_interval(box);
        DInt r1 = dpow(b, e.lo()), r2 = dpow(b, e.hi());
        return DInt{std::min(r1.lo, r2.lo), std::max(r1.hi, r2.hi)};
      }
      return dpow(XExpr(n->a).eval_interval(box), e.lo());
    }
    case Node::PowS:
      throw undecidable_error("interval evaluation does not cover parametric powers");
    case Node::Log:
      return dlog(XExpr(n->a).eval_interval(box));
    case Node::Abs:
      return dabs(XExpr(n->a).eval_interval(box));
  }
  return {};
}

namespace {
int prec_of(Node::Kind k) {
  switch (k) {
    case Node::Add:
    case Node::Sub:
      return 1;
    case Node::Mul:
    case Node::Div:
      return 2;
    case Node::Pow:
    case Node::PowS:
      return 3;
    default:
      return 4;
  }
}
}  // namespace

std::string XExpr::str() const {
  const Node* n = p_.get();
  auto wrap = [n](const XExpr& sub) {
    std::string s = sub.str();
    if (prec_of(sub.p_->kind) < prec_of(n->kind)) return "(" + s + ")";
    return s;
  };
  switch (n->kind) {
    case Node::Const: {
      std::string s = n->value.str();
      if (s.find_first_of("+-*") != std::string::npos && !(s[0] == '-' && s.find_first_of("+-*", 1) == std::string::npos))
        return "(" + s + ")";
      return s;
    }
    case Node::Var:
      return n->name;
    case Node::SVar:
      return "s";
    case Node::Inf:
      return "inf";
    case Node::Add:
      return wrap(XExpr(n->a)) + " + " + wrap(XExpr(n->b));
    case Node::Sub:
      return wrap(XExpr(n->a)) + " - " +
             (prec_of(n->b->kind) <= prec_of(Node::Sub) ? "(" + XExpr(n->b).str() + ")"
                                                        : XExpr(n->b).str());
    case Node::Mul:
      return wrap(XExpr(n->a)) + "*" + wrap(XExpr(n->b));
    case Node::Div:
      return wrap(XExpr(n->a)) + "/" + (prec_of(n->b->kind) <= prec_of(Node::Div) ? "(" + XExpr(n->b).str() + ")" : XExpr(n->b).str());
    case Node::Pow:
      return (prec_of(n->a->kind) <= prec_of(Node::Pow) ? "(" + XExpr(n->a).str() + ")" : XExpr(n->a).str()) + "^(" + n->value.str() + ")";
    case Node::PowS: {
      std::string e = n->value.is_one() ? "s" : "(" + n->value.str() + ")*s";
      return (prec_of(n->a->kind) <= prec_of(Node::PowS) ? "(" + XExpr(n->a).str() + ")" : XExpr(n->a).str()) + "^(" + e + ")";
    }
    case Node::Log:
      return "log(" + XExpr(n->a).str() + ")";
    case Node::Abs:
      return "abs(" + XExpr(n->a).str() + ")";
  }
  return "?";
}

std::string XExpr::json() const {
  std::ostringstream os;
  os << "\"" << str() << "\"";
  return os.str();
}

namespace {

struct ProductLeaf {
  std::string key;
  XExpr base;
  ExpCoeff exponent;
};

void collect_product(const XExpr& e, const ExpCoeff& outer, ExpCoeff& constant,
                     std::vector<ProductLeaf>& leaves, bool& opaque) {
  using Node = XExpr::Node;
  const Node* n = e.node();
  switch (n->kind) {
    case Node::Const: {
      if (outer.is_one()) {
        try {
          constant = constant * n->value;
          return;
        } catch (const unsupported_error&) {
        }
      }
      break;
    }
    case Node::Mul:
      collect_product(e.child_a(), outer, constant, leaves, opaque);
      collect_product(e.child_b(), outer, constant, leaves, opaque);
      return;
    case Node::Div:
      collect_product(e.child_a(), outer, constant, leaves, opaque);
      collect_product(e.child_b(), -outer, constant, leaves, opaque);
      return;
    case Node::Pow: {
      try {
        ExpCoeff comp = outer * n->value;
        collect_product(e.child_a(), comp, constant, leaves, opaque);
        return;
      } catch (const unsupported_error&) {
        opaque = true;
      }
      break;
    }
    default:
      break;
  }
  std::string key = e.str();
  for (auto& l : leaves)
    if (l.key == key) {
      l.exponent += outer;
      return;
    }
  leaves.push_back({key, e, outer});
}

}  // namespace

XExpr simplify_product(const XExpr& e) {
  ExpCoeff constant(1);
  std::vector<ProductLeaf> leaves;
  bool opaque = false;
  collect_product(e, ExpCoeff(1), constant, leaves, opaque);
  if (opaque) return e;
  XExpr out = XExpr::constant(constant);
  for (auto& l : leaves) {
    if (l.exponent.is_zero()) continue;
    out = out * pow(l.base, l.exponent);
  }
  return out;
}

bool certify_ge(const XExpr& e, double lower, const Box& box, bool strict, int max_depth) {
  DInt r;
  try {
    r = e.eval_interval(box);
  } catch (const undecidable_error&) {
    if (max_depth <= 0) return false;
    r = DInt{-1e308, 1e308};
  } catch (const std::domain_error&) {
    return false;
  }
  // rounding allowance: exact boundary contact must still certify
  double slack = 1e-12 * (1.0 + std::abs(lower));
  if (strict ? (r.lo > lower) : (r.lo >= lower - slack)) return true;
  if (strict ? (r.hi <= lower) : (r.hi < lower)) return false;
  if (max_depth <= 0) return false;
  // bisect the widest box dimension
  auto widest = box.end();
  double w = -1;
  for (auto it = box.begin(); it != box.end(); ++it) {
    double cw = it->second.hi - it->second.lo;
    if (cw > w) {
      w = cw;
      widest = it;
    }
  }
  if (widest == box.end() || w <= 1e-12) return false;
  Box left = box, right = box;
  double mid = 0.5 * (widest->second.lo + widest->second.hi);
  left[widest->first] = DInt{widest->second.lo, mid};
  right[widest->first] = DInt{mid, widest->second.hi};
  return certify_ge(e, lower, left, strict, max_depth - 1) &&
         certify_ge(e, lower, right, strict, max_depth - 1);
}

double certified_abs_sup(const XExpr& e, const Box& box, int max_depth) {
  // branch and bound: repeatedly split the box with the largest certified
  // bound until the global bound stabilizes (interval dependency shrinks
  // with the boxes)
  struct Entry {
    double bound;
    Box box;
    int depth;
  };
  auto bound_of = [&e](const Box& b) -> double {
    try {
      DInt r = e.eval_interval(b);
      return std::max(std::abs(r.lo), std::abs(r.hi));
    } catch (const std::exception&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  std::vector<Entry> heap{{bound_of(box), box, 0}};
  auto cmp = [](const Entry& a, const Entry& b) { return a.bound < b.bound; };
  std::make_heap(heap.begin(), heap.end(), cmp);
  long budget = 4000;
  while (budget-- > 0) {
    std::pop_heap(heap.begin(), heap.end(), cmp);
    Entry top = heap.back();
    heap.pop_back();
    if (top.depth >= max_depth + 10 || !std::isfinite(top.bound)) {
      heap.push_back(top);
      std::push_heap(heap.begin(), heap.end(), cmp);
      break;
    }
    auto widest = top.box.end();
    double w = -1;
    for (auto it = top.box.begin(); it != top.box.end(); ++it) {
      double cw = it->second.hi - it->second.lo;
      if (cw > w) {
        w = cw;
        widest = it;
      }
    }
    if (widest == top.box.end() || w <= 1e-10) {
      heap.push_back(top);
      std::push_heap(heap.begin(), heap.end(), cmp);
      break;
    }
    double mid = 0.5 * (widest->second.lo + widest->second.hi);
    Box left = top.box, right = top.box;
    left[widest->first] = DInt{widest->second.lo, mid};
    right[widest->first] = DInt{mid, widest->second.hi};
    heap.push_back({bound_of(left), std::move(left), top.depth + 1});
    std::push_heap(heap.begin(), heap.end(), cmp);
    heap.push_back({bound_of(right), std::move(right), top.depth + 1});
    std::push_heap(heap.begin(), heap.end(), cmp);
  }
  double best = 0.0;
  for (auto& h : heap) best = std::max(best, h.bound);
  return best;
}

}  // namespace pcm
