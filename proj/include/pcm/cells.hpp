#pragma once

// Cells over a parameter base and prepared generators on them.
// A cell fixes one fibre variable y over a base box; fibres are (a(x), b(x))
// with 1 <= a < b, (0, b(x)), or (a(x), +inf) with a >= 1. The coordinate
// change Pi(x,y) = (x, sigma*y^tau + theta(x)) is recorded on the cell; a
// generator is always written in the normalized coordinates and pullback
// applies the Jacobian bookkeeping.

#include <map>
#include <random>
#include <vector>

#include "pcm/series.hpp"

namespace pcm {

struct certification_error : public std::runtime_error {
  explicit certification_error(const std::string& w) : std::runtime_error(w) {}
};

enum class CertLevel { None, Sampled, Interval };

struct Cell1D {
  std::vector<std::string> base_vars;
  Box base_box;  // bounding box of the base (certification + sampling)
  std::string fibre_var = "y";
  XExpr lower = XExpr::one();
  XExpr upper = XExpr::infinity();
  XExpr theta = XExpr::constant(ExpCoeff(0));
  int sigma = 1, tau = 1;
  CertLevel cert = CertLevel::None;

  bool zero_lower() const { return lower.is_zero(); }
  bool unbounded() const { return upper.is_infinity(); }

  // Certifies the shape constraints (1 <= a < b, or 0 < b, or 1 <= a with
  // b = +inf): interval bisection first, dense sampling as the declared
  // fallback; a sampled counterexample throws certification_error.
  void certify();

  std::vector<std::map<std::string, double>> sample_base(int count, unsigned seed) const;
  // a point strictly inside the fibre over x; t in (0,1)
  double fibre_point(const std::map<std::string, double>& x, double t) const;

  std::string json() const;
};

// A prepared generator G0(s,x) * y^{(ell*s+eta)/d} * (log y)^mu * Phi(s,x,y).
struct PreparedGenerator {
  Cell1D cell;
  std::vector<CoeffTerm> g0;  // finite sum: mero(s) * xfac(x) * prod f^{alpha s}
  ExpCoeff ell, eta;
  int d = 1;
  int mu = 0;
  StrongSeries phi;
  enum FuncClass { CKM, CPKM } cls = CKM;
  PoleSet poles;

  std::complex<double> eval(const EvalCtx& ctx, int M, double* tail = nullptr) const;
  void lift_to(int new_d);
  std::string json(int order) const;
};

// Jacobian bookkeeping for T already composed with Pi (caller-certified):
// multiplies by sigma*tau*y^{tau-1}, i.e. eta += d*(tau-1) and G0 *= sigma*tau,
// and clears (theta, sigma, tau) on the cell. Integration of the result over
// the normalized cell equals integration of the original over the image cell.
PreparedGenerator pullback(const PreparedGenerator& composed);

// Lemma-style monomial rescaling: c(x)*y^{l/d} rewritten against the cell
// bounds so the rewritten coefficient certifies sup <= 1 on the closure.
struct RescaledTerm {
  XExpr coeff;          // c~(x)
  enum Side { AoverY, YoverB, NoneSide } side;
  long index = 0;       // exponent numerator of (a/y)^{index/d} or (y/b)^{index/d}
  double sup = 0.0;     // certified sup of |coeff|
  CertLevel cert = CertLevel::None;
};
RescaledTerm monomial_rescale(const XExpr& c, long ell_j, int d, const Cell1D& cell);

// certified sup of |e| over the cell base box; interval first, sampling
// fallback (records which level succeeded)
double cell_sup(const XExpr& e, const Cell1D& cell, CertLevel* level);

}  // namespace pcm
