#pragma once

// Exact scalar arithmetic for exponents and series coefficients: Gaussian
// rationals extended by finitely many named real irrational constants
// (square roots and logarithms of positive rationals), each carrying a
// refinable interval enclosure with arbitrary-precision endpoints.
//
// Equality is symbolic (same rational parts, identical constant maps).
// Order comparisons and integrality queries go through interval refinement
// with a precision-doubling loop capped by MF_PRECISION_BITS; an
// inconclusive query throws undecidable_error instead of guessing.

#include <boost/multiprecision/gmp.hpp>
#include <complex>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include <mpfr.h>

namespace pcm {

using Rat = boost::multiprecision::mpq_rational;
using Int = boost::multiprecision::mpz_int;

double to_double(const Rat& q);

// Error taxonomy. The CLI maps these to exit codes.
struct unsupported_error : public std::runtime_error {
  explicit unsupported_error(const std::string& what) : std::runtime_error(what) {}
};
struct undecidable_error : public std::runtime_error {
  explicit undecidable_error(const std::string& what) : std::runtime_error(what) {}
};
struct verification_error : public std::runtime_error {
  explicit verification_error(const std::string& what) : std::runtime_error(what) {}
};

long precision_bit_cap();  // from MF_PRECISION_BITS, default 8192

// ---------------------------------------------------------------------------
// Arbitrary-precision intervals with outward rounding (MPFR endpoints).
// ---------------------------------------------------------------------------

class Interval {
 public:
  explicit Interval(long prec = 64);
  Interval(const Interval& o);
  Interval(Interval&& o) noexcept;
  Interval& operator=(Interval o);
  ~Interval();

  static Interval from_rat(const Rat& q, long prec);
  static Interval sqrt_of(const Rat& q, long prec);  // q > 0
  static Interval log_of(const Rat& q, long prec);   // q > 0

  void add(const Interval& o);              // *this += o
  void add_rat(const Rat& q);               // *this += q (exactly rounded outward)
  void scale(const Rat& q);                 // *this *= q
  void negate();

  double lo() const;
  double hi() const;
  // sign of the whole interval: -1, +1, or 0 when it straddles zero
  int sign() const;
  // integers contained in [lo, hi]; nullopt when more than one candidate
  // or when the unique candidate cannot be confirmed absent
  bool contains_integer() const;            // any integer inside?
  std::optional<Int> unique_integer() const;  // exactly one integer inside?
  std::optional<Int> floor_consistent() const;  // floor(lo)==floor(hi)?

  long precision() const { return prec_; }

 private:
  mpfr_t lo_, hi_;
  long prec_;
  friend void swap(Interval& a, Interval& b);
};

// ---------------------------------------------------------------------------
// Named irrational constants.
// ---------------------------------------------------------------------------

struct IrrDef {
  enum Kind { Sqrt, Log } kind;
  Rat arg;  // sqrt: positive non-square; log: positive, != 1
  bool operator==(const IrrDef& o) const { return kind == o.kind && arg == o.arg; }
};

// Process-wide registry. Constants declared by the user keep their chosen
// names; constants derived by arithmetic (products of square roots) get a
// canonical "sqrt(p/q)" name so equal derivations collide onto one entry.
class IrrRegistry {
 public:
  static IrrRegistry& instance();

  // Declares `name` as def. Re-declaring with the same definition is a no-op;
  // a conflicting redefinition throws.
  void declare(const std::string& name, const IrrDef& def);
  // Canonical entry for a derived sqrt(q); extracts square factors, and
  // returns nullopt with *rational_value set when q is a perfect square.
  std::string canonical_sqrt(const Rat& q, Rat* rational_prefactor);
  const IrrDef& lookup(const std::string& name) const;
  bool known(const std::string& name) const;

  Interval enclosure(const std::string& name, long prec) const;
  double approx(const std::string& name) const;

  void clear_for_tests();

 private:
  IrrRegistry() = default;
  mutable std::map<std::string, IrrDef> defs_;
};

// ---------------------------------------------------------------------------
// ExpCoeff: gauss + sum of rational multiples of named real constants.
// ---------------------------------------------------------------------------

class ExpCoeff {
 public:
  ExpCoeff() = default;
  ExpCoeff(int v) : re_(v) {}
  ExpCoeff(const Rat& re) : re_(re) {}
  ExpCoeff(const Rat& re, const Rat& im) : re_(re), im_(im) {}
  static ExpCoeff i();
  static ExpCoeff irrational(const std::string& name, const Rat& mult = Rat(1));

  const Rat& re_rat() const { return re_; }
  const Rat& im_rat() const { return im_; }
  const std::map<std::string, Rat>& irr() const { return irr_; }

  bool is_zero() const { return re_ == 0 && im_ == 0 && irr_.empty(); }
  bool is_one() const { return re_ == 1 && im_ == 0 && irr_.empty(); }
  bool is_gaussian() const { return irr_.empty(); }
  bool is_rational() const { return irr_.empty() && im_ == 0; }
  bool is_real() const { return im_ == 0; }
  // symbolic integer test (no interval logic): rational with denominator 1
  bool is_int_symbolic() const;
  Rat rational() const;  // requires is_rational()
  Int integer() const;   // requires is_int_symbolic()

  ExpCoeff real_part() const;
  ExpCoeff imag_part() const;  // exact: irrational constants are real
  ExpCoeff conj() const;

  ExpCoeff operator-() const;
  ExpCoeff& operator+=(const ExpCoeff& o);
  ExpCoeff& operator-=(const ExpCoeff& o);
  friend ExpCoeff operator+(ExpCoeff a, const ExpCoeff& b) { return a += b; }
  friend ExpCoeff operator-(ExpCoeff a, const ExpCoeff& b) { return a -= b; }

  // Multiplication is partial: products of two constants are resolved for
  // square roots (sqrt(p)*sqrt(q) -> sqrt(pq), canonicalized); any product
  // involving a logarithm constant and another irrational, or a non-real
  // scaling of an irrational part, throws unsupported_error.
  friend ExpCoeff operator*(const ExpCoeff& a, const ExpCoeff& b);
  // Division is partial: exact for gaussian divisors and for divisors whose
  // irrational part uses a single square-root constant (conjugation).
  friend ExpCoeff operator/(const ExpCoeff& a, const ExpCoeff& b);
  ExpCoeff inverse() const;

  bool operator==(const ExpCoeff& o) const {
    return re_ == o.re_ && im_ == o.im_ && irr_ == o.irr_;
  }
  bool operator!=(const ExpCoeff& o) const { return !(*this == o); }
  // total order for canonical sorting (not the numeric order)
  int key_cmp(const ExpCoeff& o) const;

  std::complex<double> approx() const;
  Interval real_enclosure(long prec) const;

  // Decided by intervals when irrational parts are present; throws
  // undecidable_error when the bit cap is exhausted.
  int sign_real() const;                       // requires is_real-valued query on real part
  static int cmp_real(const ExpCoeff& a, const ExpCoeff& b);
  // Integer membership of this value as a complex number.
  // Returns the integer when certain, nullopt when certainly not an integer.
  std::optional<Int> try_integer() const;
  Int floor_real() const;                      // floor of the real part

  std::string str() const;
  std::string json() const;  // canonical serialized form

 private:
  Rat re_{0}, im_{0};
  std::map<std::string, Rat> irr_;  // name -> nonzero rational multiplier (real part)
  void prune();
  friend struct std::hash<ExpCoeff>;
};

ExpCoeff operator*(const Rat& q, const ExpCoeff& a);

}  // namespace pcm
