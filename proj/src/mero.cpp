#include "pcm/mero.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace pcm {

// ---------------------------------------------------------------------------
// Poly
// ---------------------------------------------------------------------------

Poly Poly::constant(const ExpCoeff& v) {
  Poly p;
  if (!v.is_zero()) p.c = {v};
  return p;
}

Poly Poly::var() {
  Poly p;
  p.c = {ExpCoeff(0), ExpCoeff(1)};
  return p;
}

void Poly::normalize() {
  while (!c.empty() && c.back().is_zero()) c.pop_back();
}

Poly Poly::operator+(const Poly& o) const {
  Poly r;
  r.c.resize(std::max(c.size(), o.c.size()));
  for (size_t k = 0; k < r.c.size(); ++k) {
    if (k < c.size()) r.c[k] += c[k];
    if (k < o.c.size()) r.c[k] += o.c[k];
  }
  r.normalize();
  return r;
}

Poly Poly::operator-(const Poly& o) const {
  Poly r;
  r.c.resize(std::max(c.size(), o.c.size()));
  for (size_t k = 0; k < r.c.size(); ++k) {
    if (k < c.size()) r.c[k] += c[k];
    if (k < o.c.size()) r.c[k] -= o.c[k];
  }
  r.normalize();
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  if (is_zero() || o.is_zero()) return {};
  Poly r;
  r.c.assign(c.size() + o.c.size() - 1, ExpCoeff(0));
  for (size_t i = 0; i < c.size(); ++i)
    for (size_t j = 0; j < o.c.size(); ++j) r.c[i + j] += c[i] * o.c[j];
  r.normalize();
  return r;
}

Poly Poly::scaled(const ExpCoeff& v) const {
  if (v.is_zero()) return {};
  Poly r;
  r.c.reserve(c.size());
  for (auto& ck : c) r.c.push_back(ck * v);
  r.normalize();
  return r;
}

ExpCoeff Poly::eval(const ExpCoeff& s) const {
  ExpCoeff acc(0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * s + *it;
  return acc;
}

std::complex<double> Poly::eval(const std::complex<double>& s) const {
  std::complex<double> acc(0.0, 0.0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * s + it->approx();
  return acc;
}

Poly Poly::deflate(const ExpCoeff& root, ExpCoeff* rem) const {
  // synthetic division by (s - root)
  Poly q;
  if (c.empty()) {
    *rem = ExpCoeff(0);
    return q;
  }
  q.c.assign(c.size() > 1 ? c.size() - 1 : 0, ExpCoeff(0));
  ExpCoeff carry(0);
  for (size_t k = c.size(); k-- > 0;) {
    ExpCoeff cur = c[k] + carry;
    if (k == 0) {
      *rem = cur;
    } else {
      q.c[k - 1] = cur;
      carry = cur * root;
    }
  }
  q.normalize();
  return q;
}

// ---------------------------------------------------------------------------
// MeroFunction
// ---------------------------------------------------------------------------

MeroFunction MeroFunction::constant(const ExpCoeff& v) {
  MeroFunction f;
  f.numer_ = Poly::constant(v);
  return f;
}

MeroFunction MeroFunction::var_s() {
  MeroFunction f;
  f.numer_ = Poly::var();
  return f;
}

MeroFunction MeroFunction::from_poly(Poly p) {
  MeroFunction f;
  f.numer_ = std::move(p);
  f.numer_.normalize();
  return f;
}

MeroFunction MeroFunction::linear_inverse(const ExpCoeff& alpha, const ExpCoeff& beta,
                                          int mult) {
  if (alpha.is_zero()) throw unsupported_error("linear factor with zero leading coefficient");
  MeroFunction f;
  // 1/(alpha s + beta)^m = alpha^{-m} / (s + beta/alpha)^m
  ExpCoeff scale = alpha.inverse();
  ExpCoeff sc(1);
  for (int k = 0; k < mult; ++k) sc = sc * scale;
  f.numer_ = Poly::constant(sc);
  f.denom_ = {LinFactor{beta / alpha, mult}};
  return f;
}

void MeroFunction::sort_denom() {
  std::sort(denom_.begin(), denom_.end(),
            [](const LinFactor& a, const LinFactor& b) { return a.beta.key_cmp(b.beta) < 0; });
  std::vector<LinFactor> merged;
  for (auto& f : denom_) {
    if (!merged.empty() && merged.back().beta == f.beta)
      merged.back().mult += f.mult;
    else
      merged.push_back(f);
  }
  denom_ = std::move(merged);
}

void MeroFunction::reduce() {
  if (numer_.is_zero()) {
    denom_.clear();
    return;
  }
  for (auto& f : denom_) {
    while (f.mult > 0) {
      ExpCoeff root = -f.beta;
      ExpCoeff rem(1);
      Poly q;
      try {
        q = numer_.deflate(root, &rem);
      } catch (const unsupported_error&) {
        break;  // exact evaluation not representable; keep the factor
      }
      if (!rem.is_zero()) break;
      numer_ = q;
      f.mult -= 1;
      if (numer_.is_zero()) {
        denom_.clear();
        return;
      }
    }
  }
  denom_.erase(std::remove_if(denom_.begin(), denom_.end(),
                              [](const LinFactor& f) { return f.mult == 0; }),
               denom_.end());
}

bool MeroFunction::denom_eq(const MeroFunction& o) const {
  if (denom_.size() != o.denom_.size()) return false;
  for (size_t k = 0; k < denom_.size(); ++k)
    if (denom_[k].mult != o.denom_[k].mult || !(denom_[k].beta == o.denom_[k].beta))
      return false;
  return true;
}

MeroFunction MeroFunction::operator+(const MeroFunction& o) const {
  // common denominator by root: max multiplicity
  MeroFunction r;
  std::vector<LinFactor> common = denom_;
  for (auto& f : o.denom_) {
    bool found = false;
    for (auto& g : common) {
      if (g.beta == f.beta) {
        g.mult = std::max(g.mult, f.mult);
        found = true;
        break;
      }
    }
    if (!found) common.push_back(f);
  }
  auto cofactor = [&common](const std::vector<LinFactor>& own) {
    Poly p = Poly::constant(ExpCoeff(1));
    for (auto& g : common) {
      int have = 0;
      for (auto& f : own)
        if (f.beta == g.beta) have = f.mult;
      Poly lin;
      lin.c = {g.beta, ExpCoeff(1)};
      for (int k = have; k < g.mult; ++k) p = p * lin;
    }
    return p;
  };
  r.numer_ = numer_ * cofactor(denom_) + o.numer_ * cofactor(o.denom_);
  r.denom_ = common;
  r.sort_denom();
  r.reduce();
  return r;
}

MeroFunction MeroFunction::operator-() const {
  MeroFunction r = *this;
  r.numer_ = Poly::zero() - r.numer_;
  return r;
}

MeroFunction MeroFunction::operator-(const MeroFunction& o) const { return *this + (-o); }

MeroFunction MeroFunction::operator*(const MeroFunction& o) const {
  MeroFunction r;
  r.numer_ = numer_ * o.numer_;
  r.denom_ = denom_;
  r.denom_.insert(r.denom_.end(), o.denom_.begin(), o.denom_.end());
  r.sort_denom();
  r.reduce();
  return r;
}

MeroFunction MeroFunction::scaled(const ExpCoeff& v) const {
  MeroFunction r = *this;
  r.numer_ = r.numer_.scaled(v);
  if (r.numer_.is_zero()) r.denom_.clear();
  return r;
}

MeroFunction MeroFunction::over_linear(const ExpCoeff& alpha, const ExpCoeff& beta,
                                       int mult) const {
  return *this * linear_inverse(alpha, beta, mult);
}

std::complex<double> MeroFunction::eval(const std::complex<double>& s) const {
  std::complex<double> num = numer_.eval(s);
  std::complex<double> den(1.0, 0.0);
  for (auto& f : denom_) {
    std::complex<double> lin = s + f.beta.approx();
    for (int k = 0; k < f.mult; ++k) den *= lin;
  }
  return num / den;
}

ExpCoeff MeroFunction::eval_exact(const ExpCoeff& s) const {
  ExpCoeff num = numer_.eval(s);
  ExpCoeff den(1);
  for (auto& f : denom_) {
    ExpCoeff lin = s + f.beta;
    if (lin.is_zero()) throw std::domain_error("exact evaluation at a pole");
    for (int k = 0; k < f.mult; ++k) den = den * lin;
  }
  return num / den;
}

MeroFunction::OrderLimit MeroFunction::pole_order_and_limit(const ExpCoeff& s0) const {
  if (numer_.is_zero()) return {0, ExpCoeff(0)};
  // after reduction the denominator multiplicity at s0 is the pole order
  int dmult = 0;
  for (auto& f : denom_)
    if (-f.beta == s0) dmult = f.mult;
  // vanishing order of the numerator at s0 (zero when dmult > 0 by reduction,
  // unless reduction was blocked by a non-representable exact product)
  Poly n = numer_;
  int zorder = 0;
  while (true) {
    ExpCoeff rem(1);
    Poly q;
    try {
      q = n.deflate(s0, &rem);
    } catch (const unsupported_error&) {
      break;
    }
    if (!rem.is_zero()) break;
    n = q;
    ++zorder;
    if (n.is_zero()) break;
  }
  int order = dmult - zorder;
  // limit of (s-s0)^order * f = n(s0) / prod_{other factors} (s0 + beta)^m
  ExpCoeff val = n.eval(s0);
  ExpCoeff den(1);
  for (auto& f : denom_) {
    if (-f.beta == s0) continue;
    ExpCoeff lin = s0 + f.beta;
    for (int k = 0; k < f.mult; ++k) den = den * lin;
  }
  return {order, val / den};
}

std::vector<std::pair<ExpCoeff, int>> MeroFunction::poles() const {
  std::vector<std::pair<ExpCoeff, int>> r;
  for (auto& f : denom_) r.emplace_back(-f.beta, f.mult);
  return r;
}

double MeroFunction::min_denom_distance(const std::complex<double>& s) const {
  double d = std::numeric_limits<double>::infinity();
  for (auto& f : denom_) d = std::min(d, std::abs(s + f.beta.approx()));
  return d;
}

int MeroFunction::total_denom_mult() const {
  int t = 0;
  for (auto& f : denom_) t += f.mult;
  return t;
}

std::string MeroFunction::json() const {
  std::ostringstream os;
  os << "{\"numer\":[";
  for (size_t k = 0; k < numer_.c.size(); ++k) {
    if (k) os << ",";
    os << numer_.c[k].json();
  }
  os << "],\"denom\":[";
  for (size_t k = 0; k < denom_.size(); ++k) {
    if (k) os << ",";
    os << "[" << ExpCoeff(1).json() << "," << denom_[k].beta.json() << ","
       << denom_[k].mult << "]";
  }
  os << "]}";
  return os.str();
}

std::string MeroFunction::str() const {
  std::ostringstream os;
  if (numer_.is_zero()) return "0";
  os << "(";
  for (int k = numer_.degree(); k >= 0; --k) {
    if (k < numer_.degree()) os << " + ";
    os << "(" << numer_.c[k].str() << ")";
    if (k >= 1) os << "*s";
    if (k >= 2) os << "^" << k;
  }
  os << ")";
  for (auto& f : denom_) {
    os << "/(s+(" << f.beta.str() << "))";
    if (f.mult > 1) os << "^" << f.mult;
  }
  return os.str();
}

MeroFunction binomial_poly(int k) { return binomial_affine(ExpCoeff(1), ExpCoeff(0), k); }

MeroFunction binomial_affine(const ExpCoeff& alpha, const ExpCoeff& eta0, int k) {
  if (k < 0) return MeroFunction();
  Poly p = Poly::constant(ExpCoeff(1));
  Poly w;  // alpha*s + eta0
  w.c = {eta0, alpha};
  w.normalize();
  Rat fact(1);
  for (int j = 0; j < k; ++j) {
    Poly shifted = w - Poly::constant(ExpCoeff(j));
    p = p * shifted;
    fact *= j + 1;
  }
  return MeroFunction::from_poly(p.scaled(ExpCoeff(Rat(1) / fact)));
}

}  // namespace pcm
