#pragma once

// Expression trees over the real base variables: exact constants, field
// operations, powers with constant exponents, logarithms, absolute value,
// and parametric power leaves f(x)^{alpha*s}. Values are shared immutable
// nodes; evaluation is numeric (complex once parametric powers enter) and
// a crude outward-rounded double-interval evaluator backs the cell
// certification probes.

#include <complex>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "pcm/scalar.hpp"

namespace pcm {

struct EvalCtx {
  std::complex<double> s{0.0, 0.0};
  const std::map<std::string, double>* vars = nullptr;
  double var(const std::string& name) const;
};

struct DInt {
  double lo = 0.0, hi = 0.0;
  static DInt point(double v) { return {v, v}; }
  static DInt hull(double a, double b) { return a <= b ? DInt{a, b} : DInt{b, a}; }
  DInt widened() const;
};

using Box = std::map<std::string, DInt>;

class XExpr {
 public:
  XExpr();  // constant 0
  static XExpr constant(const ExpCoeff& v);
  static XExpr constant(const Rat& v) { return constant(ExpCoeff(v)); }
  static XExpr constant(long v) { return constant(ExpCoeff(Rat(v))); }
  static XExpr one() { return constant(ExpCoeff(1)); }
  static XExpr variable(const std::string& name);
  static XExpr svar();       // the complex parameter s as a factor
  static XExpr infinity();  // only as a cell bound marker

  friend XExpr operator+(const XExpr& a, const XExpr& b);
  friend XExpr operator-(const XExpr& a, const XExpr& b);
  friend XExpr operator*(const XExpr& a, const XExpr& b);
  friend XExpr operator/(const XExpr& a, const XExpr& b);
  friend XExpr pow(const XExpr& base, const ExpCoeff& exponent);
  friend XExpr pow_s(const XExpr& base, const ExpCoeff& alpha);  // base^{alpha*s}
  friend XExpr log(const XExpr& arg);
  friend XExpr abs(const XExpr& arg);

  bool is_const() const;
  bool is_one() const;
  bool is_zero() const;
  bool is_infinity() const;
  const ExpCoeff& const_value() const;  // requires is_const()
  bool depends_on(const std::string& var) const;
  bool depends_on_any(const std::vector<std::string>& vars) const;

  std::complex<double> eval(const EvalCtx& ctx) const;
  double eval_real(const EvalCtx& ctx) const;  // checks the imaginary part is tiny
  DInt eval_interval(const Box& box) const;    // s-dependent nodes are rejected

  std::string str() const;
  std::string json() const;

  // structural identity (same printed form after constant folding)
  bool same_as(const XExpr& o) const { return str() == o.str(); }

  struct Node {
    enum Kind { Const, Var, SVar, Inf, Add, Sub, Mul, Div, Pow, PowS, Log, Abs } kind;
    ExpCoeff value;    // Const value; Pow/PowS exponent
    std::string name;  // Var
    std::shared_ptr<const Node> a, b;
  };
  const Node* node() const { return p_.get(); }
  XExpr child_a() const { return XExpr(p_->a); }
  XExpr child_b() const { return XExpr(p_->b); }

 private:
  explicit XExpr(std::shared_ptr<const Node> p) : p_(std::move(p)) {}
  std::shared_ptr<const Node> p_;
};

// Product normal form: flattens nested products, quotients and constant
// powers, combines exponents of structurally identical bases, and folds the
// constant content. Cancellation here is what keeps interval certification
// sharp on rescaled coefficients.
XExpr simplify_product(const XExpr& e);

// Certifies lower <= e (or strict) over the box by adaptive bisection of the
// interval evaluation; returns false when inconclusive at the given depth.
bool certify_ge(const XExpr& e, double lower, const Box& box, bool strict, int max_depth = 14);
// Certified upper bound of |e| over the box (+inf when evaluation fails).
double certified_abs_sup(const XExpr& e, const Box& box, int max_depth = 10);

}  // namespace pcm
