#pragma once

// Oscillatory sums y^r (log y)^nu sum_j c_j y^{i sigma_j} e^{i p_j(y)}:
// equidistribution-style averaged exponential sums, non-vanishing witness
// scans, and the L^1 non-compensation verdict used as the locus zero-test.
// Scans run on an OpenMP kernel with a serial reference kept for testing.

#include <complex>
#include <functional>
#include <vector>

#include "pcm/scalar.hpp"

namespace pcm {

struct OscTerm {
  ExpCoeff c;                   // complex coefficient
  ExpCoeff sigma;               // real: the purely imaginary power y^{i sigma}
  std::vector<ExpCoeff> poly;   // p(y) = poly[0] y + poly[1] y^2 + ... (p(0)=0)
};

struct OscillatorySum {
  std::vector<OscTerm> terms;
  ExpCoeff r;   // envelope exponent (real)
  int nu = 0;   // envelope log power

  // merges terms with identical phases (coefficients summed) and drops zeros
  void canonicalize();
  std::complex<double> eval_E(double y) const;      // sum without the envelope
  double eval_abs(double y) const;                  // |f(y)| with the envelope
};

enum class IntegrabilityVerdict { Integrable, NonIntegrable, ZeroFunction };
std::string verdict_name(IntegrabilityVerdict v);
IntegrabilityVerdict integrability_verdict(OscillatorySum f);

struct WeylPhase {
  double sigma;
  std::vector<double> poly;  // p(e^t) coefficients: poly[0] x + poly[1] x^2 + ...
};

struct WeylTrace {
  std::vector<std::pair<double, double>> trace;  // (T, |average|)
  bool decreasing_trend = false;
  double final_magnitude = 0.0;
};

// averaged exponential sum (1/T) int_1^T e^{2 pi i <h, F(t)>} dt at a ladder
// of T values up to T_max; closed form when all polynomials vanish
WeylTrace weyl_check(const std::vector<WeylPhase>& F, const std::vector<long>& h,
                     double T_max, int ladder_points = 24);

struct WitnessResult {
  bool found = false;
  double y = 0.0;
  double magnitude = 0.0;   // |E(y)| at the witness (max seen on exhaustion)
  long evaluations = 0;
};
WitnessResult witness_search(const OscillatorySum& E, double eps, double y_max,
                             int per_decade = 4096, bool use_omp = true);

struct PairWitnessResult {
  bool found = false;
  double y1 = 0.0, y2 = 0.0;
  double separation = 0.0;
  long evaluations = 0;
};
PairWitnessResult pair_witness_search(const OscillatorySum& E, double delta, double y_max,
                                      int per_decade = 4096, bool use_omp = true);

// scan kernels (parallel + serial reference; identical outputs)
std::vector<double> osc_scan_abs_omp(const OscillatorySum& E, const std::vector<double>& ys);
std::vector<double> osc_scan_abs_serial(const OscillatorySum& E, const std::vector<double>& ys);
std::vector<double> log_ladder(double y_lo, double y_hi, int per_decade);

// numeric partial integral of |f| over [lo, hi] (trapezoid in log y)
double partial_abs_integral(const OscillatorySum& f, double lo, double hi, long panels = 200000);

}  // namespace pcm
