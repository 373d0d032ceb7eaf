#include "pcm/cells.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace pcm {

namespace {

double sampled_min(const XExpr& e, const Cell1D& cell, int count) {
  double mn = std::numeric_limits<double>::infinity();
  auto pts = cell.sample_base(count, 12345u);
  EvalCtx ctx;
  for (auto& p : pts) {
    ctx.vars = &p;
    mn = std::min(mn, e.eval_real(ctx));
  }
  return mn;
}

}  // namespace

void Cell1D::certify() {
  Box box = base_box;
  if (unbounded() || !zero_lower()) {
    // 1 <= a
    if (certify_ge(lower, 1.0, box, false)) {
      cert = CertLevel::Interval;
    } else {
      if (sampled_min(lower, *this, 512) < 1.0 - 1e-12)
        throw certification_error("cell lower bound drops below 1: " + lower.str());
      cert = CertLevel::Sampled;
    }
  }
  if (!unbounded()) {
    XExpr gap = zero_lower() ? upper : upper - lower;
    if (certify_ge(gap, 0.0, box, true)) {
      if (cert != CertLevel::Sampled) cert = CertLevel::Interval;
    } else {
      if (sampled_min(gap, *this, 512) <= 0.0)
        throw certification_error("cell fibre is empty somewhere: " + gap.str());
      cert = CertLevel::Sampled;
    }
  }
}

std::vector<std::map<std::string, double>> Cell1D::sample_base(int count, unsigned seed) const {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<std::map<std::string, double>> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    std::map<std::string, double> p;
    for (auto& [name, iv] : base_box) {
      double t = (count == 1) ? 0.5 : u01(rng);
      p[name] = iv.lo + t * (iv.hi - iv.lo);
    }
    out.push_back(std::move(p));
  }
  return out;
}

double Cell1D::fibre_point(const std::map<std::string, double>& x, double t) const {
  EvalCtx ctx;
  ctx.vars = &x;
  double a = zero_lower() ? 0.0 : lower.eval_real(ctx);
  if (unbounded()) return a + t / (1.0 - t);  // map (0,1) onto (a, inf)
  double b = upper.eval_real(ctx);
  return a + t * (b - a);
}

std::string Cell1D::json() const {
  std::ostringstream os;
  os << "{\"fibre\":\"" << fibre_var << "\",\"lower\":" << lower.json() << ",\"upper\":"
     << (unbounded() ? std::string("\"inf\"") : upper.json()) << ",\"theta\":" << theta.json()
     << ",\"sigma\":" << sigma << ",\"tau\":" << tau << "}";
  return os.str();
}

std::complex<double> PreparedGenerator::eval(const EvalCtx& ctx, int M, double* tail) const {
  double y = ctx.var(cell.fibre_var);
  if (y <= 0) throw std::domain_error("fibre variable must be positive");
  std::complex<double> g(0.0, 0.0);
  for (auto& t : g0) g += coeff_eval({t}, ctx);
  std::complex<double> expo = (ell.approx() * ctx.s + eta.approx()) / static_cast<double>(d);
  std::complex<double> mono = std::exp(expo * std::log(y));
  double lg = std::pow(std::log(y), mu);
  EvalResult pr = phi.eval(ctx, M);
  if (tail) *tail = pr.tail * std::abs(g * mono) * std::abs(lg);
  return g * mono * lg * pr.value;
}

void PreparedGenerator::lift_to(int new_d) {
  if (new_d == d) return;
  if (new_d % d != 0) throw unsupported_error("generator lift must be a multiple of d");
  int f = new_d / d;
  ell = Rat(f) * ell;
  eta = Rat(f) * eta;
  phi = phi.lifted(new_d);
  d = new_d;
}

std::string PreparedGenerator::json(int order) const {
  std::ostringstream os;
  os << "{\"cell\":" << cell.json() << ",\"g0\":" << coeff_json(g0) << ",\"ell\":" << ell.json()
     << ",\"eta\":" << eta.json() << ",\"d\":" << d << ",\"mu\":" << mu << ",\"class\":\""
     << (cls == CKM ? "C^{K,M}" : "C^{P(K),M}") << "\",\"phi\":" << phi.json(order)
     << ",\"poles\":" << poles.json() << "}";
  return os.str();
}

PreparedGenerator pullback(const PreparedGenerator& composed) {
  PreparedGenerator r = composed;
  int sig = r.cell.sigma, tau = r.cell.tau;
  if (tau != 1 && tau != -1) throw unsupported_error("tau must be +-1");
  r.eta += ExpCoeff(Rat(r.d * (tau - 1)));
  ExpCoeff jac(Rat(sig * tau));
  if (!(jac.is_one()))
    for (auto& t : r.g0) t.mero = t.mero.scaled(jac);
  r.cell.theta = XExpr::constant(ExpCoeff(0));
  r.cell.sigma = r.cell.tau = 1;
  return r;
}

double cell_sup(const XExpr& e, const Cell1D& cell, CertLevel* level) {
  double s = certified_abs_sup(e, cell.base_box, 10);
  if (std::isfinite(s)) {
    if (level) *level = CertLevel::Interval;
    return s;
  }
  double mx = 0.0;
  long ok = 0;
  auto pts = cell.sample_base(512, 777u);
  EvalCtx ctx;
  for (auto& p : pts) {
    ctx.vars = &p;
    try {
      mx = std::max(mx, std::abs(e.eval(ctx)));
      ++ok;
    } catch (const std::exception&) {
    }
  }
  if (level) *level = CertLevel::Sampled;
  if (ok == 0) return std::numeric_limits<double>::infinity();
  return mx * (1.0 + 1e-6);
}

RescaledTerm monomial_rescale(const XExpr& c, long ell_j, int d, const Cell1D& cell) {
  RescaledTerm r;
  Rat q(ell_j, d);
  if (ell_j == 0) {
    r.coeff = c;
    r.side = RescaledTerm::NoneSide;
    r.index = 0;
  } else if (ell_j < 0) {
    if (cell.zero_lower())
      throw unsupported_error("negative fibre power on a zero-based cell");
    r.coeff = simplify_product(c * pow(cell.lower, ExpCoeff(q)));
    r.side = RescaledTerm::AoverY;
    r.index = -ell_j;
  } else {
    if (cell.unbounded())
      throw unsupported_error("positive fibre power on an unbounded cell");
    r.coeff = simplify_product(c * pow(cell.upper, ExpCoeff(q)));
    r.side = RescaledTerm::YoverB;
    r.index = ell_j;
  }
  r.sup = cell_sup(r.coeff, cell, &r.cert);
  if (!(r.sup <= 1.0 + 1e-9))
    throw certification_error("rescaled coefficient is not 1-bounded: sup ~ " +
                              std::to_string(r.sup) + " for " + r.coeff.str());
  return r;
}

}  // namespace pcm
