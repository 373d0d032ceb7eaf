#pragma once

// Rational-in-s coefficients with linear denominator factors: the exactly
// representable slice of the meromorphic coefficient field. A value is
//     numer(s) / prod_j (s + beta_j)^{m_j}
// with ExpCoeff polynomial numerator and monic linear factors kept as a
// sorted multiset. Reduction cancels factors whose root annihilates the
// numerator, so poles and their orders are read off the denominator.

#include <complex>
#include <vector>

#include "pcm/scalar.hpp"

namespace pcm {

struct Poly {
  std::vector<ExpCoeff> c;  // c[k] * s^k, no trailing zero coefficients

  static Poly zero() { return {}; }
  static Poly constant(const ExpCoeff& v);
  static Poly var();  // s

  bool is_zero() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; }
  void normalize();

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly scaled(const ExpCoeff& v) const;

  ExpCoeff eval(const ExpCoeff& s) const;
  std::complex<double> eval(const std::complex<double>& s) const;
  // divide by (s - root); remainder returned via *rem
  Poly deflate(const ExpCoeff& root, ExpCoeff* rem) const;

  bool operator==(const Poly& o) const { return c == o.c; }
};

struct LinFactor {
  ExpCoeff beta;  // factor (s + beta), root -beta
  int mult = 1;
};

class MeroFunction {
 public:
  MeroFunction() = default;  // zero
  static MeroFunction constant(const ExpCoeff& v);
  static MeroFunction one() { return constant(ExpCoeff(1)); }
  static MeroFunction var_s();
  static MeroFunction from_poly(Poly p);
  // 1 / (alpha*s + beta)^mult, normalized monic (alpha != 0)
  static MeroFunction linear_inverse(const ExpCoeff& alpha, const ExpCoeff& beta, int mult);

  const Poly& numer() const { return numer_; }
  const std::vector<LinFactor>& denom() const { return denom_; }
  bool is_zero() const { return numer_.is_zero(); }
  bool is_constant() const { return denom_.empty() && numer_.degree() <= 0; }

  MeroFunction operator+(const MeroFunction& o) const;
  MeroFunction operator-(const MeroFunction& o) const;
  MeroFunction operator*(const MeroFunction& o) const;
  MeroFunction operator-() const;
  MeroFunction scaled(const ExpCoeff& v) const;
  // multiply by 1/(alpha s + beta)^mult
  MeroFunction over_linear(const ExpCoeff& alpha, const ExpCoeff& beta, int mult) const;

  std::complex<double> eval(const std::complex<double>& s) const;
  ExpCoeff eval_exact(const ExpCoeff& s) const;  // partial (needs exact inversion)

  // pole order at s0 (positive: pole, 0: regular, negative: zero order) and
  // for order <= 0 the finite limit, for order > 0 the leading coefficient
  // of the principal part: lim (s-s0)^order * f(s).
  struct OrderLimit {
    int order;
    ExpCoeff value;
  };
  OrderLimit pole_order_and_limit(const ExpCoeff& s0) const;

  std::vector<std::pair<ExpCoeff, int>> poles() const;  // (root, order)
  double min_denom_distance(const std::complex<double>& s) const;  // inf if none
  int total_denom_mult() const;

  bool operator==(const MeroFunction& o) const {
    return numer_ == o.numer_ && denom_eq(o);
  }

  std::string json() const;
  std::string str() const;

 private:
  Poly numer_;
  std::vector<LinFactor> denom_;  // sorted by beta key, merged, mult > 0

  bool denom_eq(const MeroFunction& o) const;
  void sort_denom();
  void reduce();
  friend MeroFunction mero_pow(const MeroFunction&, int);
};

// s(s-1)...(s-k+1)/k!   (entire; the binomial coefficient as a polynomial)
MeroFunction binomial_poly(int k);
// C(alpha*s + eta0, k) as a polynomial in s
MeroFunction binomial_affine(const ExpCoeff& alpha, const ExpCoeff& eta0, int k);

}  // namespace pcm
