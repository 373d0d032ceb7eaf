#include "pcm/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace pcm {

// ---------------------------------------------------------------------------
// antiderivative (power-log monomials)
// ---------------------------------------------------------------------------

std::vector<AntiderivTerm> antiderivative(int mu, int d) {
  std::vector<AntiderivTerm> out;
  Rat mufact(1);
  for (int k = 2; k <= mu; ++k) mufact *= k;
  for (int i = 0; i <= mu; ++i) {
    Rat ifact(1);
    for (int k = 2; k <= i; ++k) ifact *= k;
    Rat c = mufact / ifact;
    if ((mu - i) % 2) c = -c;
    for (int k = 0; k < mu + 1 - i; ++k) c *= d;
    out.push_back({c, i, mu + 1 - i});
  }
  return out;
}

std::complex<double> antiderivative_eval(const ExpCoeff& ell, const ExpCoeff& gamma, int d,
                                         int mu, const std::complex<double>& s, double y) {
  std::complex<double> w = ell.approx() * s + gamma.approx() + static_cast<double>(d);
  std::complex<double> acc(0.0, 0.0);
  double ly = std::log(y);
  for (auto& t : antiderivative(mu, d)) {
    std::complex<double> term = to_double(t.c) * std::pow(ly, t.log_power) *
                                std::exp(w / static_cast<double>(d) * ly);
    term /= std::pow(w, t.denom_power);
    acc += term;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// HGenerator / MellinResult basics
// ---------------------------------------------------------------------------

std::complex<double> HGenerator::eval(const EvalCtx& ctx, int M, double* err) const {
  std::complex<double> p = coeff_eval({pre}, ctx);
  EvalResult r = series.eval(ctx, M);
  if (err) *err = std::abs(p) * r.tail;
  return p * r.value;
}

std::string HGenerator::json(int order) const {
  std::ostringstream os;
  os << "{\"pre\":" << coeff_json({pre}) << ",\"series\":" << series.json(order) << "}";
  return os.str();
}

std::complex<double> MellinResult::eval(const EvalCtx& ctx, int M, double* err) const {
  std::complex<double> acc(0.0, 0.0);
  double e = 0.0;
  for (auto& h : H) {
    double he = 0.0;
    acc += h.eval(ctx, M, &he);
    e += he;
  }
  if (err) *err = e;
  return acc;
}

std::string MellinResult::json(int order, const Window& w) const {
  std::ostringstream os;
  os << "{\"H\":[";
  for (size_t k = 0; k < H.size(); ++k) {
    if (k) os << ",";
    os << H[k].json(order);
  }
  os << "],\"poles\":" << poles_out.json()
     << ",\"new_lattice_generators\":" << poles_out.lattice_generators_json()
     << ",\"collision\":" << collision.json() << ",\"removable\":[";
  for (size_t k = 0; k < removable.size(); ++k) {
    if (k) os << ",";
    os << "{\"sigma\":" << removable[k].sigma.json() << ",\"note\":\"" << removable[k].note
       << "\"}";
  }
  os << "],\"locus\":" << locus.json(w) << "}";
  return os.str();
}

// ---------------------------------------------------------------------------
// internal machinery
// ---------------------------------------------------------------------------

namespace {

// conservative sup factor for a G0 term over the cell, as a function of s
std::function<double(std::complex<double>)> g0_sup_factor(const CoeffTerm& t,
                                                          const Cell1D& cell) {
  double xsup = t.xfac.is_one() ? 1.0 : cell_sup(t.xfac, cell, nullptr);
  struct PowRange {
    double lo, hi;
    std::complex<double> alpha;
  };
  std::vector<PowRange> ranges;
  for (auto& p : t.spow) {
    double sup = cell_sup(p.base, cell, nullptr);
    double inf_inv = cell_sup(XExpr::one() / p.base, cell, nullptr);
    ranges.push_back({1.0 / std::max(inf_inv, 1e-300), sup, p.alpha.approx()});
  }
  MeroFunction mero = t.mero;
  return [xsup, ranges, mero](std::complex<double> s) {
    double b = xsup * std::abs(mero.eval(s));
    for (auto& r : ranges) {
      double re = (r.alpha * s).real();
      double m = std::max(std::pow(r.hi, re), std::pow(std::max(r.lo, 1e-300), re));
      b *= m;
    }
    return std::isfinite(b) ? b : 1e300;
  };
}

// phi with every G0 term multiplied in (bounds folded via g0_sup_factor)
StrongSeries absorb_g0(const PreparedGenerator& g) {
  StrongSeries acc;
  bool first = true;
  for (auto& t : g.g0) {
    StrongSeries s = g.phi.scaled(t);
    auto fac = g0_sup_factor(t, g.cell);
    auto base_fn = g.phi.bound_fn;
    double base_c = g.phi.bound;
    s.bound_fn = [fac, base_fn, base_c](std::complex<double> z) {
      return fac(z) * (base_fn ? base_fn(z) : base_c);
    };
    s.bound = s.bound_fn(std::complex<double>(1.0, 0.0));
    acc = first ? s : series_add(acc, s);
    first = false;
  }
  if (first) {
    acc = StrongSeries::constant(coeff_zero());
    acc.d = g.d;
  }
  return acc;
}

struct SideFamily {
  bool at_infinity = true;  // stream on (a/y) at an unbounded fibre; else (y/b) at 0
  Cell1D cell;
  XExpr endpoint;  // a or b
  ExpCoeff ell, eta;
  int d = 1, mu = 0;
  StrongSeries stream;  // single-index: at(k,0) for infinity side, at(0,n) for zero side
  PoleSet P;

  GridDatum reduced() const {
    if (at_infinity) return GridDatum{ell, eta, mu};
    return GridDatum{-ell, -eta - ExpCoeff(Rat(2 * d)), mu};
  }
  SeriesCoeff coeff(long k) const { return at_infinity ? stream.at(k, 0) : stream.at(0, k); }
};

SideFamily to_side(const PreparedGenerator& g) {
  SideFamily f;
  f.at_infinity = g.cell.unbounded();
  f.cell = g.cell;
  f.endpoint = f.at_infinity ? g.cell.lower : g.cell.upper;
  f.ell = g.ell;
  f.eta = g.eta;
  f.d = g.d;
  f.mu = g.mu;
  f.stream = absorb_g0(g);
  f.P = g.poles;
  return f;
}

void lift_side(SideFamily& f, int new_d) {
  if (new_d == f.d) return;
  int fac = new_d / f.d;
  f.ell = Rat(fac) * f.ell;
  f.eta = Rat(fac) * f.eta;
  f.stream = f.stream.lifted(new_d);
  f.d = new_d;
}

// regroups families on one cell/side: pairwise distinct (ell, eta, mu) with
// eta-differences off Z when (ell, mu) match
std::vector<SideFamily> regroup_side(std::vector<SideFamily> fams) {
  if (fams.size() <= 1) return fams;
  int d = 1;
  for (auto& f : fams) d = std::lcm(d, f.d);
  for (auto& f : fams) lift_side(f, d);
  std::vector<bool> used(fams.size(), false);
  std::vector<SideFamily> out;
  for (size_t i = 0; i < fams.size(); ++i) {
    if (used[i]) continue;
    std::vector<std::pair<size_t, long>> members{{i, 0}};  // (index, eta offset from i)
    for (size_t j = i + 1; j < fams.size(); ++j) {
      if (used[j]) continue;
      if (!(fams[j].ell == fams[i].ell) || fams[j].mu != fams[i].mu) continue;
      auto diff = (fams[j].eta - fams[i].eta).try_integer();
      if (!diff) continue;
      members.push_back({j, diff->convert_to<long>()});
      used[j] = true;
    }
    used[i] = true;
    if (members.size() == 1) {
      out.push_back(fams[i]);
      continue;
    }
    // representative eta: towards the dominant end (max offset at infinity,
    // min offset at zero) so all shifts land on nonnegative indices
    long ref = members[0].second;
    for (auto& [idx, off] : members)
      ref = fams[i].at_infinity ? std::max(ref, off) : std::min(ref, off);
    SideFamily merged = fams[members[0].first];
    merged.eta = fams[i].eta + ExpCoeff(Rat(ref));
    bool first = true;
    for (auto& [idx, off] : members) {
      long shift = fams[i].at_infinity ? (ref - off) : (off - ref);
      StrongSeries s = fams[idx].stream;
      if (shift != 0) {
        s = s.shifted(fams[i].at_infinity ? shift : 0, fams[i].at_infinity ? 0 : shift);
        CoeffTerm scale;
        ExpCoeff q(Rat(fams[i].at_infinity ? -shift : shift, d));
        scale.xfac = pow(merged.endpoint, q);
        s = s.scaled(scale);
        double es = cell_sup(scale.xfac, merged.cell, nullptr);
        s.bound *= es;
        if (s.bound_fn) {
          auto bf = s.bound_fn;
          s.bound_fn = [bf, es](std::complex<double> z) { return bf(z) * es; };
        }
      }
      merged.stream = first ? s : series_add(merged.stream, s);
      merged.P.merge(fams[idx].P);
      first = false;
    }
    out.push_back(std::move(merged));
  }
  return out;
}

struct Contribution {
  std::vector<HGenerator> H;
  PoleSet new_points, new_lines;
  std::vector<LocusFamily> locus_families;
  std::vector<RemovableEntry> removable;
};

// minimum |eta + d - k| over the integer lattice (ell = 0 denominators)
double min_denom_gap(const ExpCoeff& beta) {
  std::complex<double> v = beta.approx();
  if (std::abs(v.imag()) > 1e-12) return std::abs(v.imag());
  double f = v.real() - std::round(v.real());
  return std::max(std::abs(f), 1e-12);
}

// integrates one side family over its fibre end
Contribution integrate_side(const SideFamily& f) {
  Contribution out;
  bool inf_side = f.at_infinity;
  ExpCoeff ell = f.ell, eta = f.eta;
  int d = f.d, mu = f.mu;
  bool ell_zero = ell.is_zero();

  long kmin = 0;
  std::optional<Int> eta_int;
  if (ell_zero) {
    // skip the terms that never converge at the open end; the boundary
    // integer case is decided symbolically first
    eta_int = eta.try_integer();
    long k0;
    if (eta_int) {
      k0 = inf_side ? eta_int->convert_to<long>() + d : -eta_int->convert_to<long>() - d;
    } else {
      k0 = inf_side ? eta.floor_real().convert_to<long>() + d
                    : (-eta).floor_real().convert_to<long>() - d;
    }
    kmin = std::max(0L, k0 + 1);
  } else {
    if (inf_side) {
      out.new_points.add_lattice(PointLattice{ell, eta + ExpCoeff(Rat(d)), true});
      out.new_lines.add_line(LineFamily{ell, eta + ExpCoeff(Rat(d)), true});
    } else {
      out.new_points.add_lattice(PointLattice{-ell, eta + ExpCoeff(Rat(d)), true});
    }
  }

  double lscale = ell_zero ? 1.0 : std::max(1.0, 1.0 / std::abs(ell.approx()));
  double gap = 1.0;
  if (ell_zero) gap = eta_int ? 1.0 : min_denom_gap(eta + ExpCoeff(Rat(d)));

  for (int i = 0; i <= mu; ++i) {
    auto terms = antiderivative(mu, d);
    Rat c = terms[i].c;  // c_{mu,i}
    int p = mu + 1 - i;
    HGenerator h;
    h.pre.mero = MeroFunction::constant(ExpCoeff(inf_side ? -c : c));
    ExpCoeff mono_exp = Rat(1, d) * (eta + ExpCoeff(Rat(d)));
    h.pre.xfac = pow(f.endpoint, mono_exp);
    if (i > 0) h.pre.xfac = h.pre.xfac * pow(log(f.endpoint), ExpCoeff(Rat(i)));
    if (!ell.is_zero()) h.pre.spow.push_back(ParamPower{f.endpoint, Rat(1, d) * ell});

    ExpCoeff beta0 = eta + ExpCoeff(Rat(d));
    auto mapfn = [inf_side, ell, beta0, p, ell_zero, kmin](long m, long n,
                                                           const SeriesCoeff& cin) {
      long k = inf_side ? m : n;
      if ((inf_side && n != 0) || (!inf_side && m != 0)) return coeff_zero();
      if (k < kmin) return coeff_zero();
      if (cin.empty()) return coeff_zero();
      ExpCoeff shift = inf_side ? ExpCoeff(Rat(-k)) : ExpCoeff(Rat(k));
      if (ell_zero) {
        ExpCoeff den(1);
        ExpCoeff lin = beta0 + shift;
        for (int q = 0; q < p; ++q) den = den * lin;
        return coeff_scale_mero(cin, MeroFunction::constant(den.inverse()));
      }
      return coeff_scale_mero(cin, MeroFunction::linear_inverse(ell, beta0 + shift, p));
    };
    StrongSeries s = f.stream.mapped(mapfn, out.new_points, p);
    s.u_base = XExpr::one();
    s.v_base = XExpr::one();
    double fold = std::pow(ell_zero ? 1.0 / gap : lscale, p);
    s.bound *= fold;
    if (s.bound_fn) {
      auto bf = s.bound_fn;
      s.bound_fn = [bf, fold](std::complex<double> z) { return bf(z) * fold; };
    }
    h.series = s;
    out.H.push_back(std::move(h));
  }

  if (f.stream.finite_max_t >= 0) {
    // a finite stream has finitely many genuine poles: emit those instead of
    // the conservative lattice, and let evaluation range over the rest
    PoleSet exact;
    for (auto& h : out.H)
      for (long k = 0; k <= f.stream.finite_max_t; ++k) {
        SeriesCoeff c = inf_side ? h.series.at(k, 0) : h.series.at(0, k);
        for (auto& term : c)
          for (auto& [root, m2] : term.mero.poles()) exact.add_point(root);
      }
    out.new_points = exact;
    out.new_lines = PoleSet{};
    for (auto& h : out.H) {
      PoleSet sp = f.P;
      sp.merge(exact);
      h.series.poles = sp;
    }
  }

  LocusFamily lf;
  lf.datum = f.reduced();
  lf.stream = f.stream;
  lf.index_on_n = !inf_side;
  out.locus_families.push_back(std::move(lf));
  return out;
}

// integrates one generator over a true bounded fibre (1 <= a < b < inf)
Contribution integrate_true_bounded(const PreparedGenerator& g, int report_radius) {
  Contribution out;
  StrongSeries phi = absorb_g0(g);
  ExpCoeff ell = g.ell, eta = g.eta;
  int d = g.d, mu = g.mu;
  const Cell1D& cell = g.cell;
  XExpr ab = cell.lower / cell.upper;
  bool ell_zero = ell.is_zero();

  std::optional<long> nu0;  // eta + d when ell = 0 and eta integer
  if (ell_zero) {
    auto eint = eta.try_integer();
    if (eint) nu0 = eint->convert_to<long>() + d;
  }

  StrongSeries phi_reg = phi;
  if (nu0) {
    auto [sel, rest] = phi.split([v = *nu0](long m, long n) { return m - n == v; });
    phi_reg = rest;
    // the y^{-1} slice integrates to log-power boundary terms
    HGenerator h;
    h.pre.mero = MeroFunction::constant(ExpCoeff(Rat(1, mu + 1)));
    h.pre.xfac = pow(cell.lower, ExpCoeff(Rat(*nu0, d))) *
                 (pow(log(cell.upper), ExpCoeff(Rat(mu + 1))) -
                  pow(log(cell.lower), ExpCoeff(Rat(mu + 1))));
    // reindex the diagonal onto the n slot
    StrongSeries diag = StrongSeries::from_gen(
        sel.d, false, true, XExpr::one(), ab,
        [sel, v = *nu0](long m, long n) {
          if (m != 0) return coeff_zero();
          return sel.at(n + v, n);
        },
        sel.ratio, sel.bound, sel.maxmult, sel.poles);
    diag.bound_fn = sel.bound_fn;
    h.series = diag;
    out.H.push_back(std::move(h));
  }

  bool exact_mode = phi.finite_max_t >= 0;
  if (!ell_zero && !exact_mode) {
    out.new_points.add_lattice(PointLattice{ell, eta, false});
    for (auto& sig : PoleSet{{}, {PointLattice{ell, eta, false}}, {}}.points_in_disk(
             report_radius)) {
      bool in_P = false;
      try {
        in_P = g.poles.contains(sig);
      } catch (const undecidable_error&) {
        in_P = false;
      }
      if (!in_P) out.removable.push_back({sig, "holomorphic extension exists"});
    }
  }

  double lscale = ell_zero ? 1.0 : std::max(1.0, 1.0 / std::abs(ell.approx()));
  double gap = 1.0;
  if (ell_zero && !nu0) gap = min_denom_gap(eta + ExpCoeff(Rat(d)));

  for (int boundary = 0; boundary < 2; ++boundary) {
    bool upper = boundary == 0;
    XExpr endpoint = upper ? cell.upper : cell.lower;
    for (int i = 0; i <= mu; ++i) {
      auto terms = antiderivative(mu, d);
      Rat c = terms[i].c;
      int p = mu + 1 - i;
      HGenerator h;
      h.pre.mero = MeroFunction::constant(ExpCoeff(upper ? c : -c));
      h.pre.xfac = pow(endpoint, Rat(1, d) * (eta + ExpCoeff(Rat(d))));
      if (i > 0) h.pre.xfac = h.pre.xfac * pow(log(endpoint), ExpCoeff(Rat(i)));
      if (!ell.is_zero()) h.pre.spow.push_back(ParamPower{endpoint, Rat(1, d) * ell});

      ExpCoeff beta0 = eta + ExpCoeff(Rat(d));
      auto mapfn = [ell, beta0, p, ell_zero](long m, long n, const SeriesCoeff& cin) {
        if (cin.empty()) return coeff_zero();
        ExpCoeff shift(Rat(n - m));
        if (ell_zero) {
          ExpCoeff lin = beta0 + shift;
          ExpCoeff den(1);
          for (int q = 0; q < p; ++q) den = den * lin;
          return coeff_scale_mero(cin, MeroFunction::constant(den.inverse()));
        }
        return coeff_scale_mero(cin, MeroFunction::linear_inverse(ell, beta0 + shift, p));
      };
      StrongSeries s = phi_reg.mapped(mapfn, out.new_points, p);
      s.u_base = upper ? ab : XExpr::one();
      s.v_base = upper ? XExpr::one() : ab;
      double fold = std::pow(ell_zero ? 1.0 / gap : lscale, p);
      s.bound *= fold;
      if (s.bound_fn) {
        auto bf = s.bound_fn;
        s.bound_fn = [bf, fold](std::complex<double> z) { return bf(z) * fold; };
      }
      h.series = s;
      out.H.push_back(std::move(h));
    }
  }
  if (exact_mode) {
    PoleSet exact;
    for (auto& h : out.H)
      for (long t = 0; t <= phi.finite_max_t; ++t)
        for (long m = 0; m <= t; ++m) {
          SeriesCoeff c = h.series.at(m, t - m);
          for (auto& term : c)
            for (auto& [root, m2] : term.mero.poles()) exact.add_point(root);
        }
    out.new_points = exact;
    for (auto& h : out.H) {
      PoleSet sp = g.poles;
      sp.merge(exact);
      h.series.poles = sp;
    }
    for (auto& sig : exact.points) {
      bool in_P = false;
      try {
        in_P = g.poles.contains(sig);
      } catch (const undecidable_error&) {
      }
      if (!in_P) out.removable.push_back({sig, "holomorphic extension exists"});
    }
  }
  return out;
}

std::complex<double> sigma_split_value(const PreparedGenerator& g, const ExpCoeff& sigma,
                                       const std::map<std::string, double>& x, int M) {
  // bounded cell at s = sigma with ell*sigma + eta + d = nu0 in Z: the index
  // pairs with m - n = nu0 integrate to log powers, the rest term by term
  StrongSeries phi = absorb_g0(g);
  ExpCoeff v0 = g.ell * sigma + g.eta + ExpCoeff(Rat(g.d));
  auto v0i = v0.try_integer();
  EvalCtx ctx;
  ctx.s = sigma.approx();
  ctx.vars = &x;
  double aval = g.cell.lower.eval_real(ctx);
  double bval = g.cell.upper.eval_real(ctx);
  std::complex<double> acc(0.0, 0.0);
  int d = g.d, mu = g.mu;
  long nu0 = v0i ? v0i->convert_to<long>() : 0;
  auto terms = antiderivative(mu, d);

  for (long t = 0; t <= M; ++t)
    for (long m = 0; m <= t; ++m) {
      long n = t - m;
      SeriesCoeff c = phi.at(m, n);
      if (c.empty()) continue;
      std::complex<double> cv = coeff_eval(c, ctx);
      double mono = std::pow(aval, static_cast<double>(m) / d) *
                    std::pow(bval, -static_cast<double>(n) / d);
      if (v0i && m - n == nu0) {
        double lead =
            (std::pow(std::log(bval), mu + 1) - std::pow(std::log(aval), mu + 1)) / (mu + 1);
        acc += cv * mono * lead;
      } else {
        std::complex<double> w = g.ell.approx() * ctx.s + g.eta.approx() +
                                 static_cast<double>(d - m + n);
        auto F = [&](double yv) {
          std::complex<double> r(0.0, 0.0);
          double ly = std::log(yv);
          for (auto& term : terms)
            r += to_double(term.c) * std::pow(ly, term.log_power) *
                 std::exp(w / static_cast<double>(d) * ly) / std::pow(w, term.denom_power);
          return r;
        };
        acc += cv * mono * (F(bval) - F(aval));
      }
    }
  return acc;
}

}  // namespace

// ---------------------------------------------------------------------------
// public entry points
// ---------------------------------------------------------------------------

std::vector<PreparedGenerator> regroup_puiseux(std::vector<PreparedGenerator> gens) {
  if (gens.empty()) return gens;
  std::vector<SideFamily> fams;
  for (auto& g : gens) fams.push_back(to_side(g));
  fams = regroup_side(std::move(fams));
  std::vector<PreparedGenerator> out;
  for (auto& f : fams) {
    PreparedGenerator g;
    g.cell = f.cell;
    g.g0 = {CoeffTerm{}};
    g.ell = f.ell;
    g.eta = f.eta;
    g.d = f.d;
    g.mu = f.mu;
    g.phi = f.stream;
    g.poles = f.P;
    g.cls = g.ell.is_int_symbolic() ? PreparedGenerator::CKM : PreparedGenerator::CPKM;
    out.push_back(std::move(g));
  }
  return out;
}

MellinResult integrate_1var(const std::vector<PreparedGenerator>& gens, int report_radius) {
  MellinResult res;
  res.inputs = gens;
  std::vector<LocusFamily> families;
  std::vector<RemovableEntry> removable;
  PoleSet new_points, new_lines, P;
  // group open-ended generators per cell; bounded ones integrate one by one
  std::map<std::string, std::vector<SideFamily>> side_groups;
  std::vector<std::string> side_order;
  for (auto& g : gens) {
    P.merge(g.poles);
    if (g.cell.unbounded() || g.cell.zero_lower()) {
      std::string key = g.cell.json();
      if (!side_groups.count(key)) side_order.push_back(key);
      side_groups[key].push_back(to_side(g));
    } else {
      Contribution c = integrate_true_bounded(g, report_radius);
      for (auto& h : c.H) res.H.push_back(std::move(h));
      new_points.merge(c.new_points);
      for (auto& r : c.removable) removable.push_back(r);
    }
  }
  // one grid ramification for every open-ended family
  int grid_d = 1;
  for (auto& key : side_order)
    for (auto& f : side_groups[key]) grid_d = std::lcm(grid_d, f.d);
  std::vector<GridDatum> grid_data;
  PoleSet collision;
  for (auto& key : side_order) {
    for (auto& f : side_groups[key]) lift_side(f, grid_d);
    auto fams = regroup_side(std::move(side_groups[key]));
    std::vector<GridDatum> cell_data;
    for (auto& f : fams) {
      Contribution c = integrate_side(f);
      for (auto& h : c.H) res.H.push_back(std::move(h));
      new_points.merge(c.new_points);
      new_lines.merge(c.new_lines);
      for (auto& lf : c.locus_families) families.push_back(lf);
      cell_data.push_back(f.reduced());
    }
    collision.merge(collision_set(cell_data));
    for (auto& cd : cell_data) grid_data.push_back(cd);
  }
  res.locus.grid.d = grid_d;
  res.locus.grid.data = grid_data;
  res.poles_in = P;
  res.poles_out = P;
  res.poles_out.merge(new_points);
  res.poles_out.merge(new_lines);
  res.poles_out.merge(collision);
  res.collision = collision;
  res.locus.excluded = res.poles_out;
  res.locus.families = families;
  if (!gens.empty()) res.locus.base_samples = gens[0].cell.sample_base(8, 424242u);
  res.removable = removable;
  return res;
}

MellinResult integrate_bounded(const PreparedGenerator& T, int report_radius) {
  if (T.cell.unbounded()) throw unsupported_error("cell has unbounded fibres");
  return integrate_1var({T}, report_radius);
}

MellinResult integrate_unbounded(const std::vector<PreparedGenerator>& gens,
                                 int report_radius) {
  for (auto& g : gens)
    if (!g.cell.unbounded()) throw unsupported_error("cell has bounded fibres");
  return integrate_1var(gens, report_radius);
}

MellinResult mellin_transform(const std::vector<PreparedGenerator>& gens, int report_radius) {
  std::vector<PreparedGenerator> shifted = gens;
  for (auto& g : shifted) {
    g.ell += ExpCoeff(Rat(g.d));
    g.eta -= ExpCoeff(Rat(g.d));
    g.cls = g.ell.is_int_symbolic() ? PreparedGenerator::CKM : PreparedGenerator::CPKM;
  }
  return integrate_1var(shifted, report_radius);
}

MellinResult mellin_transform(const std::vector<std::pair<Cell1D, XExpr>>& pieces,
                              int report_radius) {
  std::vector<PreparedGenerator> gens;
  for (auto& [cell, expr] : pieces) {
    auto prepared = prepare_pattern(expr, cell);
    gens.insert(gens.end(), prepared.begin(), prepared.end());
  }
  return mellin_transform(gens, report_radius);
}

std::complex<double> MellinResult::removable_value(const ExpCoeff& sigma,
                                                   const std::map<std::string, double>& x,
                                                   int M) const {
  std::complex<double> acc(0.0, 0.0);
  EvalCtx ctx;
  ctx.s = sigma.approx();
  ctx.vars = &x;
  for (auto& g : inputs) {
    bool split_here = false;
    if (!g.cell.unbounded() && !g.cell.zero_lower() && !g.ell.is_zero()) {
      ExpCoeff v0 = g.ell * sigma + g.eta + ExpCoeff(Rat(g.d));
      try {
        split_here = v0.try_integer().has_value();
      } catch (const undecidable_error&) {
        split_here = false;
      }
    }
    if (split_here) {
      acc += sigma_split_value(g, sigma, x, M);
    } else {
      MellinResult sub = integrate_1var({g});
      acc += sub.eval(ctx, M);
    }
  }
  return acc;
}

namespace {

// integrates with the G0 prefactors factored out of the fibre integral, so
// dependence on the outer variables survives in the prefactor where the next
// stage can re-prepare it
MellinResult integrate_keeping_g0(const std::vector<PreparedGenerator>& gens) {
  std::vector<PreparedGenerator> stripped;
  std::vector<CoeffTerm> fronts;
  for (auto& g : gens)
    for (auto& t : g.g0) {
      PreparedGenerator one = g;
      one.g0 = {CoeffTerm{}};
      stripped.push_back(std::move(one));
      fronts.push_back(t);
    }
  MellinResult total;
  for (size_t k = 0; k < stripped.size(); ++k) {
    MellinResult part = integrate_1var({stripped[k]});
    for (auto& h : part.H) {
      HGenerator out = h;
      out.pre.mero = out.pre.mero * fronts[k].mero;
      out.pre.xfac = out.pre.xfac * fronts[k].xfac;
      for (auto& p : fronts[k].spow) out.pre.spow.push_back(p);
      total.H.push_back(std::move(out));
    }
    total.poles_in.merge(part.poles_in);
    total.poles_out.merge(part.poles_out);
    total.locus = part.locus;
  }
  return total;
}

}  // namespace

MellinResult integrate_multi(const XExpr& integrand,
                             const std::vector<std::vector<Cell1D>>& stages) {
  if (stages.empty()) throw unsupported_error("no integration stages");
  // innermost stage: prepare the raw integrand
  std::vector<PreparedGenerator> gens;
  for (auto& cell : stages[0]) {
    auto p = prepare_pattern(integrand, cell);
    gens.insert(gens.end(), p.begin(), p.end());
  }
  MellinResult cur = integrate_keeping_g0(gens);
  for (size_t st = 1; st < stages.size(); ++st) {
    const std::string& var = stages[st][0].fibre_var;
    MellinResult next;
    next.poles_in = cur.poles_in;
    PoleSet accum = cur.poles_out;
    std::vector<HGenerator> H;
    for (auto& h : cur.H) {
      // the series part must not depend on the next variable
      for (long t = 0; t <= 8; ++t) {
        SeriesCoeff c = h.series.at(t, 0);
        for (auto& term : c)
          if (term.xfac.depends_on(var))
            throw fragment_escape_error("series coefficient depends on " + var + ": " +
                                        term.xfac.str());
      }
      if (h.series.u_base.depends_on(var) || h.series.v_base.depends_on(var))
        throw fragment_escape_error("series base depends on " + var);
      XExpr expr = h.pre.xfac;
      for (auto& p : h.pre.spow) expr = expr * pow_s(p.base, p.alpha);
      std::vector<PreparedGenerator> stage_gens;
      for (auto& cell : stages[st]) {
        auto p = prepare_pattern(expr, cell);
        for (auto& g : p) {
          for (auto& t : g.g0) t.mero = t.mero * h.pre.mero;
          stage_gens.push_back(std::move(g));
        }
      }
      bool last = st + 1 == stages.size();
      MellinResult stage = last ? integrate_1var(stage_gens)
                                : integrate_keeping_g0(stage_gens);
      accum.merge(stage.poles_out);
      for (auto& sh : stage.H) {
        HGenerator comb = sh;
        comb.series = series_mul(sh.series, h.series);
        H.push_back(std::move(comb));
      }
      next.locus = stage.locus;
    }
    next.H = std::move(H);
    next.poles_out = accum;
    cur = std::move(next);
  }
  return cur;
}

std::vector<AsympTerm> asymptotic_expansion(const std::vector<PreparedGenerator>& gens,
                                            const ExpCoeff& s, int N) {
  std::vector<SideFamily> fams;
  for (auto& g : gens) {
    if (!g.cell.unbounded())
      throw unsupported_error("asymptotic expansion needs an unbounded cell");
    fams.push_back(to_side(g));
  }
  fams = regroup_side(std::move(fams));
  std::vector<GridDatum> data;
  for (auto& f : fams) data.push_back(f.reduced());
  PoleSet coll = collision_set(data);
  bool in_coll = false;
  try {
    in_coll = coll.contains(s);
  } catch (const undecidable_error&) {
    in_coll = false;
  }
  if (in_coll)
    throw undecidable_error("expansion parameter lies in the collision set");

  std::vector<AsympTerm> terms;
  for (size_t fi = 0; fi < fams.size(); ++fi) {
    auto& f = fams[fi];
    std::complex<double> base = (f.ell.approx() * s.approx() + f.eta.approx()) /
                                static_cast<double>(f.d);
    for (long k = 0; k <= N + 4; ++k) {
      SeriesCoeff c = f.coeff(k);
      if (coeff_is_zero(c)) continue;
      if (k > 0) {
        CoeffTerm mono;
        mono.xfac = pow(f.endpoint, ExpCoeff(Rat(k, f.d)));
        c = coeff_scale(c, mono);
      }
      AsympTerm t;
      t.coeff = c;
      t.exponent = base - std::complex<double>(static_cast<double>(k) / f.d, 0.0);
      t.log_power = f.mu;
      t.family = fi;
      t.k = k;
      terms.push_back(std::move(t));
    }
  }
  std::stable_sort(terms.begin(), terms.end(), [](const AsympTerm& a, const AsympTerm& b) {
    if (std::abs(a.exponent.real() - b.exponent.real()) > 1e-12)
      return a.exponent.real() > b.exponent.real();
    return a.log_power > b.log_power;
  });
  if (static_cast<int>(terms.size()) > N) terms.resize(N);
  return terms;
}

}  // namespace pcm
