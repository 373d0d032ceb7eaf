#include "pcm/noncomp.hpp"

#include <algorithm>
#include <cmath>
#include <omp.h>

namespace pcm {

void OscillatorySum::canonicalize() {
  std::vector<OscTerm> merged;
  for (auto& t : terms) {
    bool hit = false;
    for (auto& m : merged) {
      if (m.sigma == t.sigma && m.poly == t.poly) {
        m.c += t.c;
        hit = true;
        break;
      }
    }
    if (!hit) merged.push_back(t);
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](const OscTerm& t) { return t.c.is_zero(); }),
               merged.end());
  terms = std::move(merged);
}

std::complex<double> OscillatorySum::eval_E(double y) const {
  std::complex<double> acc(0.0, 0.0);
  double ly = std::log(y);
  for (auto& t : terms) {
    double phase = t.sigma.approx().real() * ly;
    double yp = y;
    for (auto& p : t.poly) {
      phase += p.approx().real() * yp;
      yp *= y;
    }
    acc += t.c.approx() * std::exp(std::complex<double>(0.0, phase));
  }
  return acc;
}

double OscillatorySum::eval_abs(double y) const {
  double env = std::pow(y, r.approx().real()) * std::pow(std::log(y), nu);
  return std::abs(env) * std::abs(eval_E(y));
}

std::string verdict_name(IntegrabilityVerdict v) {
  switch (v) {
    case IntegrabilityVerdict::Integrable:
      return "integrable-on-(b,inf)";
    case IntegrabilityVerdict::NonIntegrable:
      return "non-integrable";
    default:
      return "zero-function";
  }
}

IntegrabilityVerdict integrability_verdict(OscillatorySum f) {
  f.canonicalize();
  if (f.terms.empty()) return IntegrabilityVerdict::ZeroFunction;
  int cmp = ExpCoeff::cmp_real(f.r, ExpCoeff(Rat(-1)));
  if (cmp < 0) return IntegrabilityVerdict::Integrable;
  return IntegrabilityVerdict::NonIntegrable;
}

namespace {

// exact segment integral of e^{2 pi i sigma t} on [t0, t1]
std::complex<double> linear_phase_integral(double sigma, double t0, double t1) {
  if (std::abs(sigma) < 1e-300) return {t1 - t0, 0.0};
  std::complex<double> i2pis(0.0, 2 * M_PI * sigma);
  return (std::exp(i2pis * t1) - std::exp(i2pis * t0)) / i2pis;
}

// adaptive Simpson for the oscillatory remainder cases
std::complex<double> simpson_phase(const std::function<double(double)>& phase, double t0,
                                   double t1, int depth) {
  auto f = [&phase](double t) {
    return std::exp(std::complex<double>(0.0, 2 * M_PI * phase(t)));
  };
  std::complex<double> fa = f(t0), fm = f(0.5 * (t0 + t1)), fb = f(t1);
  std::function<std::complex<double>(double, double, std::complex<double>, std::complex<double>,
                                     std::complex<double>, int)>
      rec = [&](double a, double b, std::complex<double> va, std::complex<double> vm,
                std::complex<double> vb, int dep) -> std::complex<double> {
    double m = 0.5 * (a + b);
    std::complex<double> vl = f(0.5 * (a + m)), vr = f(0.5 * (m + b));
    std::complex<double> whole = (b - a) / 6.0 * (va + 4.0 * vm + vb);
    std::complex<double> left = (m - a) / 6.0 * (va + 4.0 * vl + vm);
    std::complex<double> right = (b - m) / 6.0 * (vm + 4.0 * vr + vb);
    if (dep <= 0 || std::abs(left + right - whole) < 1e-9) return left + right;
    return rec(a, m, va, vl, vm, dep - 1) + rec(m, b, vm, vr, vb, dep - 1);
  };
  return rec(t0, t1, fa, fm, fb, depth);
}

}  // namespace

WeylTrace weyl_check(const std::vector<WeylPhase>& F, const std::vector<long>& h,
                     double T_max, int ladder_points) {
  if (F.size() != h.size()) throw unsupported_error("phase/coefficient arity mismatch");
  bool any = false;
  for (auto hv : h) any = any || hv != 0;
  if (!any) throw unsupported_error("the integer vector h must be nonzero");
  // combined phase <h, F(t)> = sigma t + p(e^t)
  double sigma = 0.0;
  std::vector<double> poly;
  for (size_t k = 0; k < F.size(); ++k) {
    sigma += h[k] * F[k].sigma;
    if (F[k].poly.size() > poly.size()) poly.resize(F[k].poly.size(), 0.0);
    for (size_t j = 0; j < F[k].poly.size(); ++j) poly[j] += h[k] * F[k].poly[j];
  }
  bool poly_zero = true;
  for (double p : poly) poly_zero = poly_zero && std::abs(p) < 1e-300;
  if (poly_zero && std::abs(sigma) < 1e-300)
    throw unsupported_error("constant phase: components must be Q-linearly independent");

  WeylTrace out;
  std::vector<double> Ts;
  for (int k = 1; k <= ladder_points; ++k)
    Ts.push_back(1.0 + (T_max - 1.0) * std::pow(static_cast<double>(k) / ladder_points, 2.0));
  std::complex<double> acc(0.0, 0.0);
  double prevT = 1.0;
  for (double T : Ts) {
    if (poly_zero) {
      acc += linear_phase_integral(sigma, prevT, T);
    } else {
      auto phase = [&](double t) {
        double v = sigma * t, e = std::exp(t), ep = e;
        for (double p : poly) {
          v += p * ep;
          ep *= e;
        }
        return v;
      };
      acc += simpson_phase(phase, prevT, T, 28);
    }
    prevT = T;
    out.trace.emplace_back(T, std::abs(acc) / T);
  }
  out.final_magnitude = out.trace.back().second;
  size_t half = out.trace.size() / 2;
  out.decreasing_trend = out.trace.back().second <= out.trace[half].second + 1e-12;
  return out;
}

std::vector<double> log_ladder(double y_lo, double y_hi, int per_decade) {
  std::vector<double> ys;
  double l0 = std::log10(y_lo), l1 = std::log10(y_hi);
  long n = std::max(1L, static_cast<long>((l1 - l0) * per_decade));
  ys.reserve(n + 1);
  for (long k = 0; k <= n; ++k) ys.push_back(std::pow(10.0, l0 + (l1 - l0) * k / n));
  return ys;
}

std::vector<double> osc_scan_abs_serial(const OscillatorySum& E, const std::vector<double>& ys) {
  std::vector<double> out(ys.size());
  for (size_t k = 0; k < ys.size(); ++k) out[k] = std::abs(E.eval_E(ys[k]));
  return out;
}

std::vector<double> osc_scan_abs_omp(const OscillatorySum& E, const std::vector<double>& ys) {
  std::vector<double> out(ys.size());
  const long n = static_cast<long>(ys.size());
#pragma omp parallel for schedule(static)
  for (long k = 0; k < n; ++k) out[k] = std::abs(E.eval_E(ys[k]));
  return out;
}

WitnessResult witness_search(const OscillatorySum& E, double eps, double y_max,
                             int per_decade, bool use_omp) {
  OscillatorySum C = E;
  C.canonicalize();
  bool has_active = false;
  for (auto& t : C.terms) {
    bool phase_zero = t.sigma.is_zero();
    for (auto& p : t.poly) phase_zero = phase_zero && p.is_zero();
    if (!phase_zero && !t.c.is_zero()) has_active = true;
  }
  if (C.terms.empty() || !has_active)
    throw unsupported_error("witness search needs a term with a nonzero phase");
  auto ys = log_ladder(1.0, y_max, per_decade);
  auto mags = use_omp ? osc_scan_abs_omp(C, ys) : osc_scan_abs_serial(C, ys);
  WitnessResult r;
  r.evaluations = static_cast<long>(ys.size());
  for (size_t k = 0; k < ys.size(); ++k) {
    if (mags[k] > r.magnitude) {
      r.magnitude = mags[k];
      r.y = ys[k];
    }
    if (mags[k] >= eps) {
      r.found = true;
      r.y = ys[k];
      r.magnitude = mags[k];
      return r;
    }
  }
  return r;
}

PairWitnessResult pair_witness_search(const OscillatorySum& E, double delta, double y_max,
                                      int per_decade, bool use_omp) {
  OscillatorySum C = E;
  C.canonicalize();
  PairWitnessResult r;
  if (C.terms.empty()) return r;  // constant zero: exhaustion
  auto ys = log_ladder(1.0, y_max, per_decade);
  r.evaluations = static_cast<long>(ys.size());
  // directional extremes of the value cloud give (almost) its diameter
  const int DIRS = 16;
  std::vector<double> best(DIRS, -1e308);
  std::vector<size_t> arg(DIRS, 0);
  std::vector<std::complex<double>> vals(ys.size());
  const long n = static_cast<long>(ys.size());
  if (use_omp) {
#pragma omp parallel for schedule(static)
    for (long k = 0; k < n; ++k) vals[k] = C.eval_E(ys[k]);
  } else {
    for (long k = 0; k < n; ++k) vals[k] = C.eval_E(ys[k]);
  }
  for (size_t k = 0; k < ys.size(); ++k)
    for (int d = 0; d < DIRS; ++d) {
      double proj = std::real(vals[k] * std::polar(1.0, -2 * M_PI * d / DIRS));
      if (proj > best[d]) {
        best[d] = proj;
        arg[d] = k;
      }
    }
  for (int d1 = 0; d1 < DIRS; ++d1)
    for (int d2 = 0; d2 < DIRS; ++d2) {
      double sep = std::abs(vals[arg[d1]] - vals[arg[d2]]);
      if (sep > r.separation) {
        r.separation = sep;
        r.y1 = ys[arg[d1]];
        r.y2 = ys[arg[d2]];
      }
    }
  r.found = r.separation >= delta;
  return r;
}

double partial_abs_integral(const OscillatorySum& f, double lo, double hi, long panels) {
  // trapezoid in t = log y: int |f| dy = int |f(e^t)| e^t dt
  double t0 = std::log(lo), t1 = std::log(hi);
  double h = (t1 - t0) / panels;
  double acc = 0.0;
#pragma omp parallel for reduction(+ : acc) schedule(static)
  for (long k = 0; k <= panels; ++k) {
    double t = t0 + h * k;
    double w = (k == 0 || k == panels) ? 0.5 : 1.0;
    double y = std::exp(t);
    acc += w * f.eval_abs(y) * y;
  }
  return acc * h;
}

}  // namespace pcm
