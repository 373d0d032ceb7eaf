#include "pcm/scalar.hpp"

#include <algorithm>
#include <cstdlib>
#include <mutex>
#include <sstream>

namespace pcm {

double to_double(const Rat& q) { return q.convert_to<double>(); }

long precision_bit_cap() {
  static long cap = [] {
    if (const char* e = std::getenv("MF_PRECISION_BITS")) {
      long v = std::atol(e);
      if (v >= 64) return v;
    }
    return 8192L;
  }();
  return cap;
}

// ---------------------------------------------------------------------------
// Interval
// ---------------------------------------------------------------------------

Interval::Interval(long prec) : prec_(prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Interval::Interval(const Interval& o) : prec_(o.prec_) {
  mpfr_init2(lo_, prec_);
  mpfr_init2(hi_, prec_);
  mpfr_set(lo_, o.lo_, MPFR_RNDD);
  mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& o) noexcept : prec_(o.prec_) {
  mpfr_init2(lo_, prec_);
  mpfr_init2(hi_, prec_);
  mpfr_swap(lo_, o.lo_);
  mpfr_swap(hi_, o.hi_);
}

void swap(Interval& a, Interval& b) {
  mpfr_swap(a.lo_, b.lo_);
  mpfr_swap(a.hi_, b.hi_);
  std::swap(a.prec_, b.prec_);
}

Interval& Interval::operator=(Interval o) {
  swap(*this, o);
  return *this;
}

Interval::~Interval() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

Interval Interval::from_rat(const Rat& q, long prec) {
  Interval r(prec);
  mpfr_set_q(r.lo_, q.backend().data(), MPFR_RNDD);
  mpfr_set_q(r.hi_, q.backend().data(), MPFR_RNDU);
  return r;
}

Interval Interval::sqrt_of(const Rat& q, long prec) {
  Interval r = from_rat(q, prec);
  mpfr_sqrt(r.lo_, r.lo_, MPFR_RNDD);
  mpfr_sqrt(r.hi_, r.hi_, MPFR_RNDU);
  return r;
}

Interval Interval::log_of(const Rat& q, long prec) {
  Interval r = from_rat(q, prec);
  mpfr_log(r.lo_, r.lo_, MPFR_RNDD);
  mpfr_log(r.hi_, r.hi_, MPFR_RNDU);
  return r;
}

void Interval::add(const Interval& o) {
  mpfr_add(lo_, lo_, o.lo_, MPFR_RNDD);
  mpfr_add(hi_, hi_, o.hi_, MPFR_RNDU);
}

void Interval::add_rat(const Rat& q) {
  mpfr_t t;
  mpfr_init2(t, prec_);
  mpfr_set_q(t, q.backend().data(), MPFR_RNDD);
  mpfr_add(lo_, lo_, t, MPFR_RNDD);
  mpfr_set_q(t, q.backend().data(), MPFR_RNDU);
  mpfr_add(hi_, hi_, t, MPFR_RNDU);
  mpfr_clear(t);
}

void Interval::scale(const Rat& q) {
  if (q == 0) {
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
    return;
  }
  if (q < 0) negate();
  Rat aq = abs(q);
  mpfr_t t;
  mpfr_init2(t, prec_);
  mpfr_set_q(t, aq.backend().data(), MPFR_RNDD);
  // endpoints keep their roles: positive scaling is monotone, and the sign
  // of each endpoint decides the rounding that stays outward
  mpfr_mul(lo_, lo_, t, MPFR_RNDD);
  mpfr_set_q(t, aq.backend().data(), MPFR_RNDU);
  mpfr_mul(hi_, hi_, t, MPFR_RNDU);
  mpfr_clear(t);
}

void Interval::negate() {
  mpfr_swap(lo_, hi_);
  mpfr_neg(lo_, lo_, MPFR_RNDD);
  mpfr_neg(hi_, hi_, MPFR_RNDU);
}

double Interval::lo() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double Interval::hi() const { return mpfr_get_d(hi_, MPFR_RNDU); }

int Interval::sign() const {
  if (mpfr_sgn(lo_) > 0) return 1;
  if (mpfr_sgn(hi_) < 0) return -1;
  return 0;
}

static Int mpfr_floor_to_int(const mpfr_t v) {
  mpfr_t f;
  mpfr_init2(f, mpfr_get_prec(v));
  mpfr_floor(f, v);
  mpz_t z;
  mpz_init(z);
  mpfr_get_z(z, f, MPFR_RNDN);
  Int r(z);
  mpz_clear(z);
  mpfr_clear(f);
  return r;
}

bool Interval::contains_integer() const {
  Int fl = mpfr_floor_to_int(lo_);
  Int fh = mpfr_floor_to_int(hi_);
  if (fh > fl) return true;
  // same floor: integer inside iff lo is exactly that integer
  return mpfr_integer_p(lo_) != 0;
}

std::optional<Int> Interval::unique_integer() const {
  Int fl = mpfr_floor_to_int(lo_);
  Int fh = mpfr_floor_to_int(hi_);
  if (fh == fl) {
    if (mpfr_integer_p(lo_)) return fl;
    return std::nullopt;  // no integer inside at all
  }
  if (fh == fl + 1 && mpfr_integer_p(hi_) == 0) return fh;
  if (fh == fl + 1 && mpfr_integer_p(hi_) != 0 && mpfr_integer_p(lo_) == 0) return fh;
  return std::nullopt;  // several candidates
}

std::optional<Int> Interval::floor_consistent() const {
  Int fl = mpfr_floor_to_int(lo_);
  Int fh = mpfr_floor_to_int(hi_);
  if (fl == fh) return fl;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// IrrRegistry
// ---------------------------------------------------------------------------

namespace {
std::mutex g_registry_mutex;
}

IrrRegistry& IrrRegistry::instance() {
  static IrrRegistry reg;
  return reg;
}

void IrrRegistry::declare(const std::string& name, const IrrDef& def) {
  if (def.arg <= 0) throw unsupported_error("constant argument must be positive: " + name);
  if (def.kind == IrrDef::Log && def.arg == 1)
    throw unsupported_error("log(1) is rational, not a constant: " + name);
  std::lock_guard<std::mutex> lk(g_registry_mutex);
  auto it = defs_.find(name);
  if (it != defs_.end()) {
    if (!(it->second == def)) throw unsupported_error("conflicting redefinition of constant " + name);
    return;
  }
  defs_.emplace(name, def);
}

namespace {
// Extracts the largest square factor found by bounded trial division plus a
// perfect-square check; returns (root_factor, squarefree_rest).
std::pair<Int, Int> extract_square(Int n) {
  Int root = 1;
  if (n == 0) return {0, 0};
  Int s = sqrt(n);
  if (s * s == n) return {s, Int(1)};
  for (Int p = 2; p * p <= 10000 && p * p <= n; ++p) {
    while (n % (p * p) == 0) {
      n /= p * p;
      root *= p;
    }
  }
  s = sqrt(n);
  if (s * s == n) {
    root *= s;
    n = 1;
  }
  return {root, n};
}
}  // namespace

std::string IrrRegistry::canonical_sqrt(const Rat& q, Rat* rational_prefactor) {
  // sqrt(a/b) = sqrt(ab)/b; canonicalize sqrt of the integer ab
  Int num = numerator(q), den = denominator(q);
  Int ab = num * den;
  auto [root, rest] = extract_square(ab);
  *rational_prefactor = Rat(root, den);
  if (rest == 1) return {};  // perfect square: fully rational
  std::ostringstream name;
  name << "sqrt(" << rest << ")";
  declare(name.str(), IrrDef{IrrDef::Sqrt, Rat(rest)});
  return name.str();
}

const IrrDef& IrrRegistry::lookup(const std::string& name) const {
  std::lock_guard<std::mutex> lk(g_registry_mutex);
  auto it = defs_.find(name);
  if (it == defs_.end()) throw unsupported_error("unknown constant " + name);
  return it->second;
}

bool IrrRegistry::known(const std::string& name) const {
  std::lock_guard<std::mutex> lk(g_registry_mutex);
  return defs_.count(name) != 0;
}

Interval IrrRegistry::enclosure(const std::string& name, long prec) const {
  IrrDef def = lookup(name);
  return def.kind == IrrDef::Sqrt ? Interval::sqrt_of(def.arg, prec)
                                  : Interval::log_of(def.arg, prec);
}

double IrrRegistry::approx(const std::string& name) const {
  IrrDef def = lookup(name);
  double a = to_double(def.arg);
  return def.kind == IrrDef::Sqrt ? std::sqrt(a) : std::log(a);
}

void IrrRegistry::clear_for_tests() {
  std::lock_guard<std::mutex> lk(g_registry_mutex);
  defs_.clear();
}

// ---------------------------------------------------------------------------
// ExpCoeff
// ---------------------------------------------------------------------------

ExpCoeff ExpCoeff::i() { return ExpCoeff(Rat(0), Rat(1)); }

ExpCoeff ExpCoeff::irrational(const std::string& name, const Rat& mult) {
  if (!IrrRegistry::instance().known(name))
    throw unsupported_error("constant not declared: " + name);
  ExpCoeff c;
  if (mult != 0) c.irr_[name] = mult;
  return c;
}

bool ExpCoeff::is_int_symbolic() const {
  return is_rational() && denominator(re_) == 1;
}

Rat ExpCoeff::rational() const {
  if (!is_rational()) throw unsupported_error("value is not rational: " + str());
  return re_;
}

Int ExpCoeff::integer() const {
  if (!is_int_symbolic()) throw unsupported_error("value is not an integer: " + str());
  return numerator(re_);
}

ExpCoeff ExpCoeff::real_part() const {
  ExpCoeff r;
  r.re_ = re_;
  r.irr_ = irr_;
  return r;
}

ExpCoeff ExpCoeff::imag_part() const { return ExpCoeff(im_); }

ExpCoeff ExpCoeff::conj() const {
  ExpCoeff r = *this;
  r.im_ = -r.im_;
  return r;
}

void ExpCoeff::prune() {
  for (auto it = irr_.begin(); it != irr_.end();) {
    if (it->second == 0)
      it = irr_.erase(it);
    else
      ++it;
  }
}

ExpCoeff ExpCoeff::operator-() const {
  ExpCoeff r;
  r.re_ = -re_;
  r.im_ = -im_;
  for (auto& [k, v] : irr_) r.irr_[k] = -v;
  return r;
}

ExpCoeff& ExpCoeff::operator+=(const ExpCoeff& o) {
  re_ += o.re_;
  im_ += o.im_;
  for (auto& [k, v] : o.irr_) irr_[k] += v;
  prune();
  return *this;
}

ExpCoeff& ExpCoeff::operator-=(const ExpCoeff& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  for (auto& [k, v] : o.irr_) irr_[k] -= v;
  prune();
  return *this;
}

namespace {
// c1*c2 for named constants; only sqrt*sqrt resolves.
ExpCoeff const_product(const std::string& c1, const Rat& r1, const std::string& c2,
                       const Rat& r2) {
  auto& reg = IrrRegistry::instance();
  const IrrDef& d1 = reg.lookup(c1);
  const IrrDef& d2 = reg.lookup(c2);
  if (c1 == c2) {
    if (d1.kind == IrrDef::Sqrt) return ExpCoeff(r1 * r2 * d1.arg);
    throw unsupported_error("exact product of log constants is outside the scalar field: " +
                            c1);
  }
  if (d1.kind != IrrDef::Sqrt || d2.kind != IrrDef::Sqrt)
    throw unsupported_error("exact product " + c1 + "*" + c2 +
                            " is outside the scalar field");
  Rat pre;
  std::string name = reg.canonical_sqrt(d1.arg * d2.arg, &pre);
  Rat mult = r1 * r2 * pre;
  if (name.empty()) return ExpCoeff(mult);
  return ExpCoeff::irrational(name, mult);
}
}  // namespace

ExpCoeff operator*(const ExpCoeff& a, const ExpCoeff& b) {
  ExpCoeff r;
  // gaussian * gaussian
  r.re_ = a.re_ * b.re_ - a.im_ * b.im_;
  r.im_ = a.re_ * b.im_ + a.im_ * b.re_;
  // gaussian * irr cross terms: only real scaling keeps multipliers rational
  auto scale_irr = [&r](const std::map<std::string, Rat>& m, const Rat& re, const Rat& im) {
    if (m.empty()) return;
    if (im != 0)
      throw unsupported_error("non-real scaling of an irrational part is not representable");
    for (auto& [k, v] : m) r.irr_[k] += v * re;
  };
  scale_irr(b.irr_, a.re_, a.im_);
  scale_irr(a.irr_, b.re_, b.im_);
  // irr * irr
  for (auto& [k1, v1] : a.irr_)
    for (auto& [k2, v2] : b.irr_) r += const_product(k1, v1, k2, v2);
  r.prune();
  return r;
}

ExpCoeff operator*(const Rat& q, const ExpCoeff& a) { return ExpCoeff(q) * a; }

ExpCoeff ExpCoeff::inverse() const {
  if (is_zero()) throw std::domain_error("division by zero ExpCoeff");
  if (irr_.empty()) {
    Rat n = re_ * re_ + im_ * im_;
    return ExpCoeff(re_ / n, -im_ / n);
  }
  // v = A + iB with B rational and A carrying the irrational part
  if (im_ != 0) {
    ExpCoeff A = real_part();
    Rat B = im_;
    // 1/(A+iB) = (A-iB) / (A^2+B^2); A^2 resolves through sqrt products
    ExpCoeff denom = A * A + ExpCoeff(B * B);
    ExpCoeff inv_den = denom.inverse();
    return (conj()) * inv_den;
  }
  if (irr_.size() > 1)
    throw unsupported_error(
        "exact inversion with several irrational constants is not supported: " + str());
  auto& [name, mult] = *irr_.begin();
  const IrrDef& def = IrrRegistry::instance().lookup(name);
  if (def.kind != IrrDef::Sqrt)
    throw unsupported_error("exact inversion involving " + name + " is not supported");
  // (u + m*sqrt(q))^(-1) = (u - m*sqrt(q)) / (u^2 - m^2 q)
  Rat u = re_, m = mult, q = def.arg;
  Rat den = u * u - m * m * q;
  if (den == 0) throw std::domain_error("unexpected exact zero in sqrt conjugation");
  ExpCoeff r;
  r.re_ = u / den;
  r.irr_[name] = -m / den;
  r.prune();
  return r;
}

ExpCoeff operator/(const ExpCoeff& a, const ExpCoeff& b) { return a * b.inverse(); }

int ExpCoeff::key_cmp(const ExpCoeff& o) const {
  if (re_ != o.re_) return re_ < o.re_ ? -1 : 1;
  if (im_ != o.im_) return im_ < o.im_ ? -1 : 1;
  auto i1 = irr_.begin(), i2 = o.irr_.begin();
  for (; i1 != irr_.end() && i2 != o.irr_.end(); ++i1, ++i2) {
    if (i1->first != i2->first) return i1->first < i2->first ? -1 : 1;
    if (i1->second != i2->second) return i1->second < i2->second ? -1 : 1;
  }
  if (i1 != irr_.end()) return 1;
  if (i2 != o.irr_.end()) return -1;
  return 0;
}

std::complex<double> ExpCoeff::approx() const {
  double re = to_double(re_);
  for (auto& [k, v] : irr_) re += to_double(v) * IrrRegistry::instance().approx(k);
  return {re, to_double(im_)};
}

Interval ExpCoeff::real_enclosure(long prec) const {
  Interval acc = Interval::from_rat(re_, prec);
  for (auto& [k, v] : irr_) {
    Interval e = IrrRegistry::instance().enclosure(k, prec);
    e.scale(v);
    acc.add(e);
  }
  return acc;
}

int ExpCoeff::sign_real() const {
  ExpCoeff rp = real_part();
  if (rp.is_zero()) return 0;
  if (rp.irr_.empty()) return rp.re_ < 0 ? -1 : 1;
  for (long prec = 64; prec <= precision_bit_cap(); prec *= 2) {
    int s = rp.real_enclosure(prec).sign();
    if (s != 0) return s;
  }
  throw undecidable_error("sign undecidable at current precision: " + str());
}

int ExpCoeff::cmp_real(const ExpCoeff& a, const ExpCoeff& b) {
  return (a - b).sign_real();
}

std::optional<Int> ExpCoeff::try_integer() const {
  if (im_ != 0) return std::nullopt;
  if (irr_.empty()) {
    if (denominator(re_) == 1) return numerator(re_);
    return std::nullopt;
  }
  for (long prec = 64; prec <= precision_bit_cap(); prec *= 2) {
    Interval e = real_enclosure(prec);
    if (!e.contains_integer()) return std::nullopt;
    // an interval can refute integrality but never certify it for a value
    // with genuine irrational content; keep refining until refuted
  }
  throw undecidable_error("integrality undecidable at current precision: " + str());
}

Int ExpCoeff::floor_real() const {
  ExpCoeff rp = real_part();
  if (rp.irr_.empty()) {
    Int n = numerator(rp.re_), d = denominator(rp.re_);
    Int q = n / d;
    if (q * d > n) q -= 1;  // round toward -inf
    return q;
  }
  for (long prec = 64; prec <= precision_bit_cap(); prec *= 2) {
    if (auto f = rp.real_enclosure(prec).floor_consistent()) return *f;
  }
  throw undecidable_error("floor undecidable at current precision: " + str());
}

std::string ExpCoeff::str() const {
  std::ostringstream os;
  bool lead = true;
  auto emit_rat = [&os, &lead](const Rat& q, const std::string& suffix) {
    if (q == 0) return;
    if (!lead && q > 0) os << "+";
    os << q << suffix;
    lead = false;
  };
  emit_rat(re_, "");
  emit_rat(im_, "i");
  for (auto& [k, v] : irr_) {
    if (!lead && v > 0) os << "+";
    os << v << "*" << k;
    lead = false;
  }
  if (lead) os << "0";
  return os.str();
}

std::string ExpCoeff::json() const {
  std::ostringstream os;
  os << "{\"re_num\":\"" << numerator(re_) << "\",\"re_den\":\"" << denominator(re_)
     << "\",\"im_num\":\"" << numerator(im_) << "\",\"im_den\":\"" << denominator(im_)
     << "\"";
  if (!irr_.empty()) {
    os << ",\"irr\":{";
    bool first = true;
    for (auto& [k, v] : irr_) {
      if (!first) os << ",";
      first = false;
      os << "\"" << k << "\":[\"" << numerator(v) << "\",\"" << denominator(v) << "\"]";
    }
    os << "}";
  }
  os << "}";
  return os.str();
}

}  // namespace pcm
