#include "pcm/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace pcm {

// ---------------------------------------------------------------------------
// SeriesCoeff helpers
// ---------------------------------------------------------------------------

SeriesCoeff coeff_zero() { return {}; }

SeriesCoeff coeff_one() { return {CoeffTerm{}}; }

namespace {

// pulls constant multiplicative content out of an expression tree
std::pair<ExpCoeff, XExpr> factor_const(const XExpr& e) {
  using Node = XExpr::Node;
  const Node* n = e.node();
  if (n->kind == Node::Const) return {n->value, XExpr::one()};
  if (n->kind == Node::Mul) {
    auto [ca, ra] = factor_const(e.child_a());
    auto [cb, rb] = factor_const(e.child_b());
    try {
      return {ca * cb, ra * rb};
    } catch (const unsupported_error&) {
      return {ExpCoeff(1), e};
    }
  }
  if (n->kind == Node::Div) {
    auto [ca, ra] = factor_const(e.child_a());
    auto [cb, rb] = factor_const(e.child_b());
    if (!cb.is_zero()) {
      try {
        return {ca / cb, ra / rb};
      } catch (const unsupported_error&) {
      }
    }
    return {ExpCoeff(1), e};
  }
  return {ExpCoeff(1), e};
}

// moves the constant content of the xfac into the meromorphic part and
// cancels structural products, so golden coefficient forms come out
// sign-normalized
void normalize_term(CoeffTerm& t) {
  auto [c, rest] = factor_const(simplify_product(t.xfac));
  if (c.is_one() && rest.same_as(t.xfac)) return;
  t.xfac = rest;
  if (!c.is_one()) t.mero = t.mero.scaled(c);
}

}  // namespace

SeriesCoeff coeff_of(MeroFunction m, XExpr x) {
  if (m.is_zero()) return {};
  CoeffTerm t;
  t.mero = std::move(m);
  t.xfac = std::move(x);
  normalize_term(t);
  return {t};
}

bool coeff_is_zero(const SeriesCoeff& c) {
  for (auto& t : c)
    if (!t.mero.is_zero() && !t.xfac.is_zero()) return false;
  return true;
}

namespace {
bool spow_eq(const std::vector<ParamPower>& a, const std::vector<ParamPower>& b) {
  if (a.size() != b.size()) return false;
  for (size_t k = 0; k < a.size(); ++k)
    if (!(a[k].alpha == b[k].alpha) || !a[k].base.same_as(b[k].base)) return false;
  return true;
}
}  // namespace

SeriesCoeff coeff_add(const SeriesCoeff& a, const SeriesCoeff& b) {
  SeriesCoeff r = a;
  for (auto& t : b) {
    bool merged = false;
    for (auto& u : r) {
      if (u.xfac.same_as(t.xfac) && spow_eq(u.spow, t.spow)) {
        u.mero = u.mero + t.mero;
        merged = true;
        break;
      }
    }
    if (!merged) r.push_back(t);
  }
  r.erase(std::remove_if(r.begin(), r.end(),
                         [](const CoeffTerm& t) { return t.mero.is_zero() || t.xfac.is_zero(); }),
          r.end());
  return r;
}

SeriesCoeff coeff_neg(const SeriesCoeff& a) {
  SeriesCoeff r = a;
  for (auto& t : r) t.mero = -t.mero;
  return r;
}

SeriesCoeff coeff_mul(const SeriesCoeff& a, const SeriesCoeff& b) {
  SeriesCoeff r;
  for (auto& t1 : a)
    for (auto& t2 : b) {
      CoeffTerm t;
      t.mero = t1.mero * t2.mero;
      t.xfac = t1.xfac * t2.xfac;
      normalize_term(t);
      t.spow = t1.spow;
      for (auto& p : t2.spow) {
        bool merged = false;
        for (auto& q : t.spow)
          if (q.base.same_as(p.base)) {
            q.alpha += p.alpha;
            merged = true;
            break;
          }
        if (!merged) t.spow.push_back(p);
      }
      t.spow.erase(std::remove_if(t.spow.begin(), t.spow.end(),
                                  [](const ParamPower& p) { return p.alpha.is_zero(); }),
                   t.spow.end());
      if (!t.mero.is_zero()) r = coeff_add(r, {t});
    }
  return r;
}

SeriesCoeff coeff_scale(const SeriesCoeff& a, const CoeffTerm& t) { return coeff_mul(a, {t}); }

SeriesCoeff coeff_scale_mero(const SeriesCoeff& a, const MeroFunction& m) {
  SeriesCoeff r = a;
  for (auto& t : r) t.mero = t.mero * m;
  r.erase(std::remove_if(r.begin(), r.end(), [](const CoeffTerm& t) { return t.mero.is_zero(); }),
          r.end());
  return r;
}

std::complex<double> coeff_eval(const SeriesCoeff& c, const EvalCtx& ctx) {
  std::complex<double> acc(0.0, 0.0);
  for (auto& t : c) {
    std::complex<double> v = t.mero.eval(ctx.s) * t.xfac.eval(ctx);
    for (auto& p : t.spow) {
      double base = p.base.eval_real(ctx);
      if (base <= 0) throw std::domain_error("parametric power base must be positive");
      v *= std::exp(p.alpha.approx() * ctx.s * std::log(base));
    }
    acc += v;
  }
  return acc;
}

std::string coeff_json(const SeriesCoeff& c) {
  std::ostringstream os;
  os << "[";
  for (size_t k = 0; k < c.size(); ++k) {
    if (k) os << ",";
    os << "{\"mero\":" << c[k].mero.json() << ",\"xexpr\":" << c[k].xfac.json();
    if (!c[k].spow.empty()) {
      os << ",\"spow\":[";
      for (size_t j = 0; j < c[k].spow.size(); ++j) {
        if (j) os << ",";
        os << "{\"base\":" << c[k].spow[j].base.json()
           << ",\"alpha\":" << c[k].spow[j].alpha.json() << "}";
      }
      os << "]";
    }
    os << "}";
  }
  os << "]";
  return os.str();
}

std::string coeff_str(const SeriesCoeff& c) {
  if (c.empty()) return "0";
  std::ostringstream os;
  for (size_t k = 0; k < c.size(); ++k) {
    if (k) os << " + ";
    os << "[" << c[k].mero.str() << "]*" << c[k].xfac.str();
    for (auto& p : c[k].spow) os << "*" << p.base.str() << "^((" << p.alpha.str() << ")s)";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// StrongSeries
// ---------------------------------------------------------------------------

namespace {
unsigned long long key_of(long m, long n) {
  return (static_cast<unsigned long long>(static_cast<unsigned long>(m)) << 32) |
         static_cast<unsigned long>(n);
}
}  // namespace

StrongSeries::StrongSeries() : cache_(std::make_shared<Cache>()) {
  gen_ = [](long, long) { return coeff_zero(); };
}

StrongSeries StrongSeries::constant(const SeriesCoeff& c) {
  StrongSeries s;
  s.gen_ = [c](long m, long n) { return (m == 0 && n == 0) ? c : coeff_zero(); };
  s.finite_max_t = 0;
  s.ratio = Rat(1, 2);
  s.bound = 1.0;
  return s;
}

StrongSeries StrongSeries::finite(int d, bool has_m, bool has_n, XExpr u, XExpr v,
                                  std::vector<std::tuple<long, long, SeriesCoeff>> entries,
                                  Rat ratio, double bound) {
  StrongSeries s;
  s.d = d;
  s.has_m = has_m;
  s.has_n = has_n;
  s.u_base = std::move(u);
  s.v_base = std::move(v);
  s.ratio = std::move(ratio);
  s.bound = bound;
  long maxt = 0;
  for (auto& [m, n, c] : entries) maxt = std::max(maxt, m + n);
  s.finite_max_t = maxt;
  auto table = std::make_shared<std::vector<std::tuple<long, long, SeriesCoeff>>>(std::move(entries));
  s.gen_ = [table](long m, long n) {
    SeriesCoeff acc;
    for (auto& [em, en, c] : *table)
      if (em == m && en == n) acc = coeff_add(acc, c);
    return acc;
  };
  return s;
}

StrongSeries StrongSeries::from_gen(int d, bool has_m, bool has_n, XExpr u, XExpr v, Gen g,
                                    Rat ratio, double bound, int maxmult, PoleSet poles) {
  StrongSeries s;
  s.d = d;
  s.has_m = has_m;
  s.has_n = has_n;
  s.u_base = std::move(u);
  s.v_base = std::move(v);
  s.gen_ = std::move(g);
  s.ratio = std::move(ratio);
  s.bound = bound;
  s.maxmult = maxmult;
  s.poles = std::move(poles);
  return s;
}

SeriesCoeff StrongSeries::at(long m, long n) const {
  if (m < 0 || n < 0) return coeff_zero();
  if (!has_m && m != 0) return coeff_zero();
  if (!has_n && n != 0) return coeff_zero();
  unsigned long long key = key_of(m, n);
  {
    std::lock_guard<std::mutex> lk(cache_->mu);
    auto it = cache_->map.find(key);
    if (it != cache_->map.end()) return it->second;
  }
  SeriesCoeff c = gen_(m, n);
  std::lock_guard<std::mutex> lk(cache_->mu);
  return cache_->map.emplace(key, std::move(c)).first->second;
}

double StrongSeries::sup_bound(const std::complex<double>& s) const {
  double b = bound_fn ? bound_fn(s) : bound;
  if (maxmult > 0) {
    double dist = poles.distance(s);
    if (dist <= 0) return std::numeric_limits<double>::infinity();
    if (dist < 1) b *= std::pow(dist, -maxmult);
  }
  return b;
}

double StrongSeries::tail_after(int M, const std::complex<double>& s) const {
  if (finite_max_t >= 0 && M >= finite_max_t) return 0.0;
  double q = to_double(ratio);
  if (q >= 1.0) return std::numeric_limits<double>::infinity();
  double B = sup_bound(s);
  if (has_m && has_n) {
    // sum_{t>M} (t+1) q^t
    double qM = std::pow(q, M + 1);
    return B * qM * ((M + 2) * (1 - q) + q) / ((1 - q) * (1 - q));
  }
  return B * std::pow(q, M + 1) / (1 - q);
}

EvalResult StrongSeries::eval(const EvalCtx& ctx, int M, double guard) const {
  double dist = poles.distance(ctx.s);
  if (dist < guard)
    throw pole_proximity_error("evaluation within guard distance of a declared pole");
  EvalResult r;
  double uv = 1.0, vv = 1.0;
  if (has_m) {
    uv = u_base.is_one() ? 1.0 : u_base.eval_real(ctx);
    if (uv <= 0) throw std::domain_error("nonpositive series base " + u_base.str());
  }
  if (has_n) {
    vv = v_base.is_one() ? 1.0 : v_base.eval_real(ctx);
    if (vv <= 0) throw std::domain_error("nonpositive series base " + v_base.str());
  }
  long top = (finite_max_t >= 0) ? std::min<long>(M, finite_max_t) : M;
  for (long t = 0; t <= top; ++t) {
    long mlo = has_m ? 0 : 0, mhi = has_m ? t : 0;
    for (long m = mlo; m <= mhi; ++m) {
      long n = t - m;
      if (!has_n && n != 0) continue;
      if (n < 0) continue;
      SeriesCoeff c = at(m, n);
      if (c.empty()) continue;
      std::complex<double> term = coeff_eval(c, ctx);
      if (m) term *= std::pow(uv, static_cast<double>(m) / d);
      if (n) term *= std::pow(vv, static_cast<double>(n) / d);
      r.value += term;
    }
  }
  r.tail = tail_after(M, ctx.s);
  return r;
}

StrongSeries StrongSeries::lifted(int new_d) const {
  if (new_d == d) return *this;
  if (new_d % d != 0) throw unsupported_error("ramification lift must be a multiple");
  int f = new_d / d;
  StrongSeries s = *this;
  s.cache_ = std::make_shared<Cache>();
  s.d = new_d;
  StrongSeries base = *this;
  s.gen_ = [base, f](long m, long n) {
    if (m % f || n % f) return coeff_zero();
    return base.at(m / f, n / f);
  };
  // contract: coeff'(fm, fn) <= B rho^{m+n} = B (rho^{1/f})^{fm+fn}
  double r = std::pow(to_double(ratio), 1.0 / f);
  long num = static_cast<long>(std::ceil(r * (1 << 20))) + 1;
  s.ratio = std::min(Rat(num, 1 << 20), Rat(1 << 20, (1 << 20) + 1));
  if (finite_max_t >= 0) s.finite_max_t = finite_max_t * f;
  return s;
}

StrongSeries StrongSeries::shifted(long dm, long dn) const {
  StrongSeries s = *this;
  s.cache_ = std::make_shared<Cache>();
  StrongSeries base = *this;
  s.gen_ = [base, dm, dn](long m, long n) { return base.at(m - dm, n - dn); };
  s.bound = bound * std::pow(to_double(ratio), -static_cast<double>(dm + dn));
  if (bound_fn) {
    auto bf = bound_fn;
    double fac = std::pow(to_double(ratio), -static_cast<double>(dm + dn));
    s.bound_fn = [bf, fac](std::complex<double> z) { return bf(z) * fac; };
  }
  if (finite_max_t >= 0) s.finite_max_t = finite_max_t + dm + dn;
  if (dm > 0) s.has_m = true;
  if (dn > 0) s.has_n = true;
  return s;
}

StrongSeries StrongSeries::scaled(const CoeffTerm& t) const {
  // caller folds the sup of t into `bound` when it matters; here the xfac is
  // carried symbolically and the mero factor feeds poles/maxmult
  StrongSeries s = *this;
  s.cache_ = std::make_shared<Cache>();
  StrongSeries base = *this;
  s.gen_ = [base, t](long m, long n) { return coeff_scale(base.at(m, n), t); };
  for (auto& [root, mult] : t.mero.poles()) {
    s.poles.add_point(root);
    s.maxmult += mult;
  }
  return s;
}

StrongSeries StrongSeries::scaled_mero(const MeroFunction& m) const {
  CoeffTerm t;
  t.mero = m;
  return scaled(t);
}

StrongSeries StrongSeries::mapped(std::function<SeriesCoeff(long, long, const SeriesCoeff&)> f,
                                  PoleSet extra_poles, int extra_mult) const {
  StrongSeries s = *this;
  s.cache_ = std::make_shared<Cache>();
  StrongSeries base = *this;
  s.gen_ = [base, f](long m, long n) { return f(m, n, base.at(m, n)); };
  s.poles.merge(extra_poles);
  s.maxmult += extra_mult;
  return s;
}

namespace {
Rat rat_upper(double x) {
  long num = static_cast<long>(std::ceil(x * (1 << 20))) + 1;
  return Rat(num, 1 << 20);
}
}  // namespace

StrongSeries series_add(const StrongSeries& a0, const StrongSeries& b0) {
  int d = std::lcm(a0.d, b0.d);
  StrongSeries a = a0.lifted(d), b = b0.lifted(d);
  if (a.has_m && b.has_m && !a.u_base.same_as(b.u_base))
    throw unsupported_error("series sum with incompatible u-bases");
  if (a.has_n && b.has_n && !a.v_base.same_as(b.v_base))
    throw unsupported_error("series sum with incompatible v-bases");
  StrongSeries s;
  s.d = d;
  s.has_m = a.has_m || b.has_m;
  s.has_n = a.has_n || b.has_n;
  s.u_base = a.has_m ? a.u_base : b.u_base;
  s.v_base = a.has_n ? a.v_base : b.v_base;
  s.gen_ = [a, b](long m, long n) { return coeff_add(a.at(m, n), b.at(m, n)); };
  s.ratio = std::max(a.ratio, b.ratio);
  s.bound = a.bound + b.bound;
  if (a.bound_fn || b.bound_fn) {
    auto fa = a.bound_fn, fb = b.bound_fn;
    double ca = a.bound, cb = b.bound;
    s.bound_fn = [fa, fb, ca, cb](std::complex<double> z) {
      return (fa ? fa(z) : ca) + (fb ? fb(z) : cb);
    };
  }
  s.maxmult = std::max(a.maxmult, b.maxmult);
  s.poles = a.poles;
  s.poles.merge(b.poles);
  if (a.finite_max_t >= 0 && b.finite_max_t >= 0)
    s.finite_max_t = std::max(a.finite_max_t, b.finite_max_t);
  return s;
}

StrongSeries series_mul(const StrongSeries& a0, const StrongSeries& b0) {
  int d = std::lcm(a0.d, b0.d);
  StrongSeries a = a0.lifted(d), b = b0.lifted(d);
  if (a.has_m && b.has_m && !a.u_base.same_as(b.u_base))
    throw unsupported_error("series product with incompatible u-bases");
  if (a.has_n && b.has_n && !a.v_base.same_as(b.v_base))
    throw unsupported_error("series product with incompatible v-bases");
  StrongSeries s;
  s.d = d;
  s.has_m = a.has_m || b.has_m;
  s.has_n = a.has_n || b.has_n;
  s.u_base = a.has_m ? a.u_base : b.u_base;
  s.v_base = a.has_n ? a.v_base : b.v_base;
  s.gen_ = [a, b](long m, long n) {
    SeriesCoeff acc;
    for (long i = 0; i <= m; ++i)
      for (long j = 0; j <= n; ++j) {
        SeriesCoeff c1 = a.at(i, j);
        if (c1.empty()) continue;
        SeriesCoeff c2 = b.at(m - i, n - j);
        if (c2.empty()) continue;
        acc = coeff_add(acc, coeff_mul(c1, c2));
      }
    return acc;
  };
  // |sum over splits| <= (t+1)^2 Ca Cb rho0^t, absorbed into a larger ratio
  double r0 = std::max(to_double(a.ratio), to_double(b.ratio));
  double r1 = 0.5 * (1.0 + r0);
  double poly = 1.0;
  for (long t = 0; t < 4000; ++t) {
    double v = (t + 1.0) * (t + 1.0) * std::pow(r0 / r1, t);
    poly = std::max(poly, v);
    if (t > 8 && v < poly * 1e-12) break;
  }
  s.ratio = rat_upper(r1);
  s.bound = a.bound * b.bound * poly;
  if (a.bound_fn || b.bound_fn) {
    auto fa = a.bound_fn, fb = b.bound_fn;
    double ca = a.bound, cb = b.bound;
    s.bound_fn = [fa, fb, ca, cb, poly](std::complex<double> z) {
      return (fa ? fa(z) : ca) * (fb ? fb(z) : cb) * poly;
    };
  }
  s.maxmult = a.maxmult + b.maxmult;
  s.poles = a.poles;
  s.poles.merge(b.poles);
  if (a.finite_max_t >= 0 && b.finite_max_t >= 0)
    s.finite_max_t = a.finite_max_t + b.finite_max_t;
  return s;
}

std::pair<StrongSeries, StrongSeries> StrongSeries::split(
    std::function<bool(long, long)> pred) const {
  StrongSeries base = *this;
  StrongSeries sel = *this, rest = *this;
  sel.cache_ = std::make_shared<Cache>();
  rest.cache_ = std::make_shared<Cache>();
  sel.gen_ = [base, pred](long m, long n) {
    return pred(m, n) ? base.at(m, n) : coeff_zero();
  };
  rest.gen_ = [base, pred](long m, long n) {
    return pred(m, n) ? coeff_zero() : base.at(m, n);
  };
  return {sel, rest};
}

std::string StrongSeries::json(int order) const {
  std::ostringstream os;
  os << "{\"d\":" << d << ",\"M\":" << order << ",\"ratio\":\"" << ratio << "\",\"coeffs\":[";
  bool first = true;
  for (long t = 0; t <= order; ++t) {
    for (long m = 0; m <= (has_m ? t : 0); ++m) {
      long n = t - m;
      if (!has_n && n != 0) continue;
      if (n < 0) continue;
      SeriesCoeff c = at(m, n);
      if (c.empty()) continue;
      if (!first) os << ",";
      first = false;
      if (c.size() == 1 && c[0].spow.empty()) {
        os << "{\"m\":" << m << ",\"n\":" << n << ",\"mero\":" << c[0].mero.json()
           << ",\"xexpr\":" << c[0].xfac.json() << "}";
      } else {
        os << "{\"m\":" << m << ",\"n\":" << n << ",\"terms\":" << coeff_json(c) << "}";
      }
    }
  }
  os << "]}";
  return os.str();
}

// ---------------------------------------------------------------------------
// unit_power
// ---------------------------------------------------------------------------

double unit_deviation_bound(const StrongSeries& U) {
  SeriesCoeff c00 = U.at(0, 0);
  bool literal_one = c00.size() == 1 && c00[0].mero == MeroFunction::one() &&
                     c00[0].xfac.is_one() && c00[0].spow.empty();
  if (!literal_one)
    throw unit_certification_error("strong unit must have constant coefficient 1");
  if (U.dev_bound >= 0.0) return U.dev_bound;
  double q = to_double(U.ratio);
  if (q >= 1.0) return std::numeric_limits<double>::infinity();
  if (U.finite_max_t == 0) return 0.0;
  if (U.has_m && U.has_n) return U.bound * q * (2.0 - q) / ((1.0 - q) * (1.0 - q));
  return U.bound * q / (1.0 - q);
}

namespace {
// S(q) = sum_j |C(w,j)| q^j for q < 1 (numeric; finite since |C(w,j+1)/C(w,j)|
// tends to 1)
double binomial_series_sum(double absw, double q) {
  double t = 1.0, sum = 1.0;
  for (long j = 0; j < 100000; ++j) {
    t *= q * (absw + j) / (j + 1);
    sum += t;
    if (t < 1e-300 || (j > 4 * absw + 16 && t < sum * 1e-17)) break;
  }
  return sum;
}
}  // namespace

StrongSeries unit_power(const StrongSeries& U, const PowExponent& e) {
  double B = unit_deviation_bound(U);
  bool int_exp = e.is_constant() && e.c.is_int_symbolic();
  // allow the certification slack of the outward-rounded sup computation:
  // boundary-tight patterns (sup exactly 1/2) must still certify
  if (int_exp) {
    if (!(B < 1.0 - 1e-9))
      throw unit_certification_error("cannot certify |U-1| < 1 for the geometric stream");
  } else if (!(B <= 0.5 * (1 + 1e-5))) {
    throw unit_certification_error("cannot certify |U-1| <= 1/2 from the ratio bound");
  }
  B = std::min(B, 0.74);
  if (e.is_constant() && e.c.is_int_symbolic() && e.c.integer() >= 0 && e.c.integer() <= 16) {
    // small nonnegative integer exponents: plain repeated product
    long n = static_cast<long>(e.c.integer());
    StrongSeries r = StrongSeries::constant(coeff_one());
    r.d = U.d;
    r.has_m = false;
    r.has_n = false;
    r.u_base = U.u_base;
    r.v_base = U.v_base;
    for (long k = 0; k < n; ++k) r = series_mul(r, U);
    return r;
  }

  StrongSeries base_u = U;
  auto drop_const = [base_u](long m, long n) {
    if (m == 0 && n == 0) return coeff_zero();
    return base_u.at(m, n);
  };
  StrongSeries V = StrongSeries::from_gen(U.d, U.has_m, U.has_n, U.u_base, U.v_base,
                                          drop_const, U.ratio, U.bound, U.maxmult, U.poles);
  V.finite_max_t = U.finite_max_t;

  // powers of V, memoized across coefficient queries
  auto vpowers = std::make_shared<std::vector<StrongSeries>>();
  vpowers->push_back(StrongSeries::constant(coeff_one()));
  vpowers->push_back(V);
  auto vpow_mu = std::make_shared<std::mutex>();
  auto vpow = [vpowers, vpow_mu, V](long j) {
    std::lock_guard<std::mutex> lk(*vpow_mu);
    while (static_cast<long>(vpowers->size()) <= j)
      vpowers->push_back(series_mul(vpowers->back(), V));
    return (*vpowers)[j];
  };

  ExpCoeff alpha = e.alpha, c0 = e.c;
  auto gen = [vpow, alpha, c0](long m, long n) {
    SeriesCoeff acc;
    for (long j = 0; j <= m + n; ++j) {
      SeriesCoeff vj = vpow(j).at(m, n);
      if (vj.empty()) continue;
      MeroFunction b = binomial_affine(alpha, c0, static_cast<int>(j));
      acc = coeff_add(acc, coeff_scale_mero(vj, b));
    }
    return acc;
  };

  StrongSeries r = StrongSeries::from_gen(U.d, U.has_m, U.has_n, U.u_base, U.v_base, gen,
                                          U.ratio, U.bound, U.maxmult, U.poles);
  // Tail contract via level-sum generating functions: with
  // b(x) = sum_tau (level-tau sup of V) x^tau, the level-t sup of the result
  // is at most x^{-t} * sum_j |C(w,j)| b(x)^j whenever b(x) < 1.
  double target = int_exp ? std::min(0.5 * (1.0 + B), 0.96) : 0.75;
  auto levelsum = [&U](double x) {
    if (!U.level_sups.empty()) {
      double s = 0.0;
      for (auto& [t, v] : U.level_sups) s += v * std::pow(x, static_cast<double>(t));
      return s;
    }
    double qx = to_double(U.ratio) * x;
    if (qx >= 1.0) return std::numeric_limits<double>::infinity();
    bool dbl = U.has_m && U.has_n;
    return dbl ? U.bound * qx * (2.0 - qx) / ((1.0 - qx) * (1.0 - qx))
               : U.bound * qx / (1.0 - qx);
  };
  double xlo = 1.0, xhi = U.level_sups.empty() ? 1.0 / to_double(U.ratio) : 1e6;
  for (int it = 0; it < 200; ++it) {
    double mid = U.level_sups.empty() ? 0.5 * (xlo + xhi) : std::sqrt(xlo * xhi);
    if (levelsum(mid) <= target)
      xlo = mid;
    else
      xhi = mid;
  }
  double xstar = std::max(xlo, 1.0 + 1e-12);
  double q_eff = std::min(levelsum(xstar), target);
  r.ratio = rat_upper(1.0 / xstar);
  if (r.ratio >= 1) r.ratio = Rat((1 << 20) - 1, 1 << 20);
  auto bf = [alpha, c0, q_eff](std::complex<double> s) {
    double absw = std::abs(alpha.approx() * s + c0.approx());
    return binomial_series_sum(absw, q_eff);
  };
  r.bound_fn = bf;
  r.bound = bf(std::complex<double>(1.0, 0.0));
  r.finite_max_t = -1;
  return r;
}

// ---------------------------------------------------------------------------
// nested_presentation
// ---------------------------------------------------------------------------

StrongSeries nested_presentation(const std::vector<FullSeriesTerm>& terms,
                                 const std::vector<XExpr>& c_components, int d, bool has_m,
                                 bool has_n, XExpr u, XExpr v, Rat ratio, double bound) {
  std::vector<std::tuple<long, long, SeriesCoeff>> entries;
  for (auto& t : terms) {
    if (t.I.size() != c_components.size())
      throw unsupported_error("nested presentation: component count mismatch");
    XExpr xf = XExpr::one();
    for (size_t k = 0; k < t.I.size(); ++k)
      if (t.I[k] != 0) xf = xf * pow(c_components[k], ExpCoeff(Rat(t.I[k])));
    entries.emplace_back(t.m, t.n, coeff_of(t.xi, xf));
  }
  return StrongSeries::finite(d, has_m, has_n, std::move(u), std::move(v), std::move(entries),
                              std::move(ratio), bound);
}

}  // namespace pcm
