#include "pcm/oracle.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <queue>

namespace pcm {

namespace {

struct Interval15 {
  double a, b;
  std::complex<double> k15;
  double err;
};

Interval15 rule(const Integrand& f, double a, double b, long* evals) {
  using K = boost::math::quadrature::gauss_kronrod<double, 15>;
  using G = boost::math::quadrature::gauss<double, 7>;
  const auto& kx = K::abscissa();
  const auto& kw = K::weights();
  const auto& gx = G::abscissa();
  const auto& gw = G::weights();
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  std::complex<double> k15(0.0, 0.0), g7(0.0, 0.0);
  // abscissa()[0] == 0 for both odd-order rules
  std::complex<double> f0 = f(mid);
  k15 += kw[0] * f0;
  for (size_t j = 1; j < kx.size(); ++j) {
    std::complex<double> fp = f(mid + half * kx[j]);
    std::complex<double> fm = f(mid - half * kx[j]);
    k15 += kw[j] * (fp + fm);
  }
  g7 += gw[0] * f0;
  for (size_t j = 1; j < gx.size(); ++j) {
    std::complex<double> fp = f(mid + half * gx[j]);
    std::complex<double> fm = f(mid - half * gx[j]);
    g7 += gw[j] * (fp + fm);
  }
  *evals += static_cast<long>(2 * kx.size() - 1 + 2 * gx.size() - 1);
  k15 *= half;
  g7 *= half;
  double err = std::abs(k15 - g7);
  return {a, b, k15, err};
}

}  // namespace

QuadReport quad_adaptive(const Integrand& f, double a, double b, double abs_tol,
                         long max_intervals) {
  QuadReport rep;
  if (!(b > a)) return rep;
  auto cmp = [](const Interval15& x, const Interval15& y) { return x.err < y.err; };
  std::priority_queue<Interval15, std::vector<Interval15>, decltype(cmp)> q(cmp);
  long evals = 0;
  q.push(rule(f, a, b, &evals));
  double total_err = q.top().err;
  std::complex<double> total = q.top().k15;
  long splits = 0;
  while (total_err > abs_tol && splits < max_intervals) {
    Interval15 worst = q.top();
    q.pop();
    total -= worst.k15;
    total_err -= worst.err;
    double mid = 0.5 * (worst.a + worst.b);
    Interval15 l = rule(f, worst.a, mid, &evals);
    Interval15 r = rule(f, mid, worst.b, &evals);
    total += l.k15 + r.k15;
    total_err += l.err + r.err;
    q.push(l);
    q.push(r);
    ++splits;
  }
  rep.value = total;
  rep.abs_err_est = total_err;
  rep.evaluations = evals;
  return rep;
}

namespace {

// decay exponent estimate of |g| against y^p from samples at the open end
double estimate_decay(const std::function<double(double)>& absg, double y0, bool toward_inf) {
  double y1 = toward_inf ? 4 * y0 : y0 / 4;
  double v0 = absg(toward_inf ? 2 * y0 : y0 / 2);
  double v1 = absg(toward_inf ? 2 * y1 : y1 / 2);
  if (v0 <= 0 || v1 <= 0) return toward_inf ? -1e9 : 1e9;
  double l0 = std::log(toward_inf ? 2 * y0 : y0 / 2);
  double l1 = std::log(toward_inf ? 2 * y1 : y1 / 2);
  return (std::log(v1) - std::log(v0)) / (l1 - l0);
}

QuadReport quad_open_end(const Integrand& f, const std::function<double(double)>& absf,
                         double a, bool toward_inf, double abs_tol) {
  // substitute y = a e^t (toward infinity) or y = a e^{-t} (toward zero)
  QuadReport rep;
  double p = estimate_decay(absf, std::max(a, 1e-6), toward_inf);
  if (toward_inf && !(p < -1.05))
    throw non_integrable_error("integrand decay exponent ~" + std::to_string(p) +
                               " fails the integrability test at infinity");
  if (!toward_inf && !(p > -0.95))
    throw non_integrable_error("integrand growth exponent ~" + std::to_string(p) +
                               " fails the integrability test at zero");
  // pick the substitution horizon from the decay estimate
  double margin = toward_inf ? (-p - 1.0) : (p + 1.0);
  double t_max = 8.0 + std::log(1.0 + 1.0 / abs_tol) / std::max(margin, 0.05);
  Integrand g = [f, a, toward_inf](double t) {
    double y = toward_inf ? a * std::exp(t) : a * std::exp(-t);
    return f(y) * y;  // |dy| = y dt
  };
  rep = quad_adaptive(g, 0.0, t_max, abs_tol * 0.5, 6000);
  // tail bound beyond the horizon from the sampled decay law
  double y_end = toward_inf ? a * std::exp(t_max) : a * std::exp(-t_max);
  double f_end = absf(y_end);
  double tail = f_end * y_end / std::max(margin, 0.05) * 4.0;
  rep.tail_bound = tail;
  rep.abs_err_est += tail;
  return rep;
}

}  // namespace

QuadReport quad_cell(const PreparedGenerator& T, const std::complex<double>& s,
                     const std::map<std::string, double>& x, double rel_tol, int M) {
  EvalCtx base;
  base.s = s;
  std::map<std::string, double> vars = x;
  double tail_acc = 0.0;
  Integrand f = [&T, &vars, s, M, &tail_acc](double y) {
    EvalCtx ctx;
    ctx.s = s;
    vars[T.cell.fibre_var] = y;
    ctx.vars = &vars;
    double tl = 0.0;
    std::complex<double> v = T.eval(ctx, M, &tl);
    tail_acc = std::max(tail_acc, tl);
    return v;
  };
  std::function<double(double)> absf = [&f](double y) { return std::abs(f(y)); };
  EvalCtx xctx;
  xctx.vars = &vars;
  QuadReport rep;
  if (T.cell.unbounded()) {
    double a = T.cell.lower.eval_real(xctx);
    rep = quad_open_end(f, absf, a, true, rel_tol);
  } else if (T.cell.zero_lower()) {
    double b = T.cell.upper.eval_real(xctx);
    rep = quad_open_end(f, absf, b, false, rel_tol);
  } else {
    double a = T.cell.lower.eval_real(xctx);
    double b = T.cell.upper.eval_real(xctx);
    rep = quad_adaptive(f, a, b, rel_tol, 4000);
    rep.tail_bound = tail_acc * (b - a);
    rep.abs_err_est += rep.tail_bound;
  }
  return rep;
}

QuadReport quad_expr_cell(const XExpr& integrand, const Cell1D& cell,
                          const std::complex<double>& s, const std::map<std::string, double>& x,
                          double rel_tol, bool mellin_kernel) {
  std::map<std::string, double> vars = x;
  Integrand f = [&](double y) {
    EvalCtx ctx;
    ctx.s = s;
    vars[cell.fibre_var] = y;
    ctx.vars = &vars;
    std::complex<double> v = integrand.eval(ctx);
    if (mellin_kernel) v *= std::exp((s - 1.0) * std::log(y));
    return v;
  };
  std::function<double(double)> absf = [&f](double y) { return std::abs(f(y)); };
  EvalCtx xctx;
  xctx.vars = &vars;
  if (cell.unbounded()) {
    double a = cell.lower.eval_real(xctx);
    return quad_open_end(f, absf, a, true, rel_tol);
  }
  if (cell.zero_lower()) {
    double b = cell.upper.eval_real(xctx);
    return quad_open_end(f, absf, b, false, rel_tol);
  }
  double a = cell.lower.eval_real(xctx);
  double b = cell.upper.eval_real(xctx);
  return quad_adaptive(f, a, b, rel_tol, 4000);
}

std::complex<double> mero_limit(
    const std::function<std::complex<double>(std::complex<double>)>& H,
    const std::complex<double>& sigma, double r0, int rings, double* err_est, bool* diverged) {
  // The circle average of a Laurent series picks out the constant
  // coefficient, which for a removable singularity is the limit; a genuine
  // pole reveals itself through ring magnitudes growing like r^{-m}.
  const int N = 32;
  std::vector<std::complex<double>> avgs;
  std::vector<double> ring_min;
  for (int k = 0; k < rings; ++k) {
    double r = r0 * std::pow(0.5, k);
    std::complex<double> acc(0.0, 0.0);
    double mn = std::numeric_limits<double>::infinity();
    for (int j = 0; j < N; ++j) {
      double th = 2 * M_PI * (j + 0.5) / N;
      std::complex<double> v = H(sigma + std::polar(r, th));
      acc += v;
      mn = std::min(mn, std::abs(v));
    }
    avgs.push_back(acc / static_cast<double>(N));
    ring_min.push_back(mn);
  }
  if (diverged) {
    int grows = 0;
    for (size_t k = 1; k < ring_min.size(); ++k)
      if (ring_min[k] > 1.7 * ring_min[k - 1] && std::isfinite(ring_min[k - 1])) ++grows;
    *diverged = grows >= rings - 2 && ring_min.back() > 8 * ring_min.front();
  }
  std::complex<double> last = avgs.back();
  std::complex<double> prev = avgs[avgs.size() - 2];
  std::complex<double> extrap = last + (last - prev);  // one Richardson step
  if (err_est) *err_est = std::abs(last - prev);
  return std::abs(last - prev) < 1e-14 ? last : extrap;
}

}  // namespace pcm
