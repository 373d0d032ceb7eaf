#pragma once

// Truncated strongly convergent series with meromorphic-in-s coefficients.
// A StrongSeries is a lazy stream of coefficients indexed by (m, n) together
// with two monomial bases: term(m,n) = coeff(m,n) * u^(m/d) * v^(n/d).
// On a fibre cell u = a(x)/y and v = y/b(x); after integration the same type
// carries x-level series (bases in x only, or constant).
//
// Tail contract: for every index pair, the sup over the declared domain of
// |coeff(m,n)(s,x) * u^(m/d) * v^(n/d)| is at most
//     bound(s) * dist_scale(s) * ratio^(m+n),
// where dist_scale(s) = max(1, dist(s, poles)^-maxmult) accounts for the
// denominator factors recorded in `poles`. Constructors set (bound, ratio,
// maxmult) from how the stream was built, never from numerical sniffing.

#include <functional>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "pcm/mero.hpp"
#include "pcm/poleset.hpp"
#include "pcm/xexpr.hpp"

namespace pcm {

struct pole_proximity_error : public std::runtime_error {
  explicit pole_proximity_error(const std::string& w) : std::runtime_error(w) {}
};
struct unit_certification_error : public std::runtime_error {
  explicit unit_certification_error(const std::string& w) : std::runtime_error(w) {}
};

struct ParamPower {
  XExpr base;     // positive expression
  ExpCoeff alpha; // value = base^{alpha*s}
};

struct CoeffTerm {
  MeroFunction mero = MeroFunction::one();
  XExpr xfac = XExpr::one();
  std::vector<ParamPower> spow;
};

using SeriesCoeff = std::vector<CoeffTerm>;  // a finite sum of terms

SeriesCoeff coeff_zero();
SeriesCoeff coeff_one();
SeriesCoeff coeff_of(MeroFunction m, XExpr x = XExpr::one());
bool coeff_is_zero(const SeriesCoeff& c);
SeriesCoeff coeff_add(const SeriesCoeff& a, const SeriesCoeff& b);
SeriesCoeff coeff_neg(const SeriesCoeff& a);
SeriesCoeff coeff_mul(const SeriesCoeff& a, const SeriesCoeff& b);
SeriesCoeff coeff_scale(const SeriesCoeff& a, const CoeffTerm& t);
SeriesCoeff coeff_scale_mero(const SeriesCoeff& a, const MeroFunction& m);
std::complex<double> coeff_eval(const SeriesCoeff& c, const EvalCtx& ctx);
std::string coeff_json(const SeriesCoeff& c);
std::string coeff_str(const SeriesCoeff& c);

struct EvalResult {
  std::complex<double> value{0.0, 0.0};
  double tail = 0.0;  // rigorous bound on what truncation dropped
};

class StrongSeries {
 public:
  using Gen = std::function<SeriesCoeff(long, long)>;

  int d = 1;
  bool has_m = false;  // u-indexed component present
  bool has_n = false;  // v-indexed component present
  XExpr u_base = XExpr::one();
  XExpr v_base = XExpr::one();
  Rat ratio{2, 3};
  double bound = 1.0;
  std::function<double(std::complex<double>)> bound_fn;  // optional s-dependent bound
  int maxmult = 0;
  PoleSet poles;
  long finite_max_t = -1;  // largest m+n with a nonzero coefficient; -1 = unbounded
  double dev_bound = -1.0;  // certified sup of |series - 1| when >= 0 (units)
  std::vector<std::pair<long, double>> level_sups;  // finite series: per-level sups

  StrongSeries();
  static StrongSeries constant(const SeriesCoeff& c);
  static StrongSeries constant_one() { return constant(coeff_one()); }
  // finite support: entries ((m,n) -> coeff)
  static StrongSeries finite(int d, bool has_m, bool has_n, XExpr u, XExpr v,
                             std::vector<std::tuple<long, long, SeriesCoeff>> entries,
                             Rat ratio, double bound);
  static StrongSeries from_gen(int d, bool has_m, bool has_n, XExpr u, XExpr v, Gen g,
                               Rat ratio, double bound, int maxmult, PoleSet poles);

  SeriesCoeff at(long m, long n) const;  // memoized; zero for negative indices

  // partial sum over m+n <= M plus a rigorous tail bound; `guard` rejects
  // evaluations too close to a declared pole
  EvalResult eval(const EvalCtx& ctx, int M, double guard = 1e-9) const;

  double tail_after(int M, const std::complex<double>& s) const;
  double sup_bound(const std::complex<double>& s) const;  // bound over all indices

  StrongSeries lifted(int new_d) const;           // new_d a multiple of d
  StrongSeries shifted(long dm, long dn) const;   // coeff(m,n) <- coeff(m-dm, n-dn)
  StrongSeries scaled(const CoeffTerm& t) const;
  StrongSeries scaled_mero(const MeroFunction& m) const;
  // coefficient-wise map with extra pole/multiplicity bookkeeping
  StrongSeries mapped(std::function<SeriesCoeff(long, long, const SeriesCoeff&)> f,
                      PoleSet extra_poles, int extra_mult) const;

  friend StrongSeries series_add(const StrongSeries& a, const StrongSeries& b);
  friend StrongSeries series_mul(const StrongSeries& a, const StrongSeries& b);
  // (sel, rest) by index predicate
  std::pair<StrongSeries, StrongSeries> split(std::function<bool(long, long)> pred) const;

  std::string json(int order) const;  // coefficients with m+n <= order

 private:
  Gen gen_;
  struct Cache {
    std::mutex mu;
    std::unordered_map<unsigned long long, SeriesCoeff> map;
  };
  std::shared_ptr<Cache> cache_;
};

struct PowExponent {
  // exponent = alpha*s + c
  ExpCoeff alpha;  // zero for a constant exponent
  ExpCoeff c;
  static PowExponent constant(const ExpCoeff& v) { return {ExpCoeff(0), v}; }
  static PowExponent s_times(const ExpCoeff& a) { return {a, ExpCoeff(0)}; }
  bool is_constant() const { return alpha.is_zero(); }
};

// (U)^exponent for a strong unit U (certified |U-1| <= 1/2 via the tail
// contract); coefficients pick up binomial polynomials when the exponent
// involves s (entire in s: no new poles).
StrongSeries unit_power(const StrongSeries& U, const PowExponent& e);
// certified sup of |U - 1| from the tail contract (throws when the
// constant coefficient is not literally 1)
double unit_deviation_bound(const StrongSeries& U);

// Nested presentation: regroups a finite full-form series
//   sum_{I,m,n} xi_{I,m,n}(s) c(x)^I u^(m/d) v^(n/d)
// into a stream whose coefficients are x-expression-valued.
struct FullSeriesTerm {
  std::vector<long> I;  // exponents of the c-components
  long m = 0, n = 0;
  MeroFunction xi;
};
StrongSeries nested_presentation(const std::vector<FullSeriesTerm>& terms,
                                 const std::vector<XExpr>& c_components, int d, bool has_m,
                                 bool has_n, XExpr u, XExpr v, Rat ratio, double bound);

}  // namespace pcm
