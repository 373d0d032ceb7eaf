#include "pcm/prepare.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pcm {

namespace {

using Node = XExpr::Node;

struct UnitDesc {
  // unit = 1 + sum_i coeff_i(x) * y^{q_i}, q_i != 0 rational
  std::vector<std::pair<XExpr, Rat>> terms;
  PowExponent e;
};

struct FactorAcc {
  CoeffTerm g0;
  ExpCoeff ell;  // true coefficient of s in the y-exponent
  ExpCoeff eta;  // true constant y-exponent
  int mu = 0;
  std::vector<UnitDesc> units;
};

void flatten_sum(const XExpr& e, const ExpCoeff& sign, std::vector<std::pair<ExpCoeff, XExpr>>& out) {
  const Node* n = e.node();
  if (n->kind == Node::Add) {
    flatten_sum(e.child_a(), sign, out);
    flatten_sum(e.child_b(), sign, out);
  } else if (n->kind == Node::Sub) {
    flatten_sum(e.child_a(), sign, out);
    flatten_sum(e.child_b(), -sign, out);
  } else {
    out.emplace_back(sign, e);
  }
}

void flatten_product(const XExpr& e, bool inverted, std::vector<std::pair<XExpr, bool>>& out) {
  const Node* n = e.node();
  if (n->kind == Node::Mul) {
    flatten_product(e.child_a(), inverted, out);
    flatten_product(e.child_b(), inverted, out);
  } else if (n->kind == Node::Div) {
    flatten_product(e.child_a(), inverted, out);
    flatten_product(e.child_b(), !inverted, out);
  } else {
    out.emplace_back(e, inverted);
  }
}

PowExponent exp_scale(const PowExponent& e, const ExpCoeff& c2) {
  return {e.alpha * c2, e.c * c2};
}

void attach_power(FactorAcc& acc, const XExpr& xonly, const PowExponent& e) {
  if (xonly.is_one()) return;
  if (!e.alpha.is_zero()) acc.g0.spow.push_back(ParamPower{xonly, e.alpha});
  if (!e.c.is_zero()) acc.g0.xfac = acc.g0.xfac * pow(xonly, e.c);
}

// decomposes a unit addend into coeff(x) * y^{q}; throws on anything else
std::pair<XExpr, Rat> addend_monomial(const XExpr& term, const std::string& yvar) {
  std::vector<std::pair<XExpr, bool>> factors;
  flatten_product(term, false, factors);
  XExpr coeff = XExpr::one();
  Rat q(0);
  for (auto& [f, inv] : factors) {
    const Node* n = f.node();
    if (n->kind == Node::SVar)
      throw unsupported_error("s cannot appear inside a unit: " + term.str());
    if (!f.depends_on(yvar)) {
      coeff = inv ? coeff / f : coeff * f;
      continue;
    }
    if (n->kind == Node::Var && n->name == yvar) {
      q += inv ? Rat(-1) : Rat(1);
      continue;
    }
    if (n->kind == Node::Pow && n->a->kind == Node::Var && n->a->name == yvar) {
      if (!n->value.is_rational())
        throw unsupported_error("unit addend needs a rational power of the fibre variable: " +
                                f.str());
      q += inv ? -n->value.rational() : n->value.rational();
      continue;
    }
    throw unsupported_error("unsupported subterm inside a unit: " + f.str());
  }
  return {coeff, q};
}

struct ClassifyCtx {
  const Cell1D* cell;
  std::string yvar;
};

void classify(FactorAcc& acc, const ClassifyCtx& cc, const XExpr& f, PowExponent outer);

// Add-node base raised to `outer`: pivot extraction + unit descriptor
void classify_sum_base(FactorAcc& acc, const ClassifyCtx& cc, const XExpr& f,
                       const PowExponent& outer) {
  std::vector<std::pair<ExpCoeff, XExpr>> addends;
  flatten_sum(f, ExpCoeff(1), addends);
  std::vector<std::pair<XExpr, Rat>> monos;  // coeff, q
  for (auto& [sg, term] : addends) {
    auto [coeff, q] = addend_monomial(term, cc.yvar);
    XExpr signed_coeff = sg.is_one() ? coeff : XExpr::constant(sg) * coeff;
    bool merged = false;
    for (auto& [c0, q0] : monos)
      if (q0 == q) {
        c0 = c0 + signed_coeff;
        merged = true;
        break;
      }
    if (!merged) monos.emplace_back(signed_coeff, q);
  }
  // pivot: the dominant monomial on the cell (largest q as y -> inf,
  // smallest q on cells reaching 0, the y-free term on bounded fibres)
  size_t pivot = 0;
  for (size_t k = 1; k < monos.size(); ++k) {
    bool better;
    if (cc.cell->unbounded())
      better = monos[k].second > monos[pivot].second;
    else if (cc.cell->zero_lower())
      better = monos[k].second < monos[pivot].second;
    else
      better = abs(monos[k].second) < abs(monos[pivot].second);
    if (better) pivot = k;
  }
  XExpr cp = monos[pivot].first;
  Rat qp = monos[pivot].second;
  attach_power(acc, cp, outer);
  acc.ell += outer.alpha * ExpCoeff(qp);
  acc.eta += outer.c * ExpCoeff(qp);
  UnitDesc u;
  u.e = outer;
  for (size_t k = 0; k < monos.size(); ++k) {
    if (k == pivot) continue;
    u.terms.emplace_back(monos[k].first / cp, monos[k].second - qp);
  }
  if (!u.terms.empty()) acc.units.push_back(std::move(u));
}

// s itself as a factor: a polynomial coefficient in G0
bool contains_svar(const XExpr& e) {
  const Node* n = e.node();
  if (n->kind == Node::SVar) return true;
  if (n->a && contains_svar(XExpr(e).child_a())) return true;
  if (n->b && contains_svar(XExpr(e).child_b())) return true;
  return false;
}

void classify(FactorAcc& acc, const ClassifyCtx& cc, const XExpr& f, PowExponent outer) {
  const Node* n = f.node();
  if (n->kind == Node::SVar) {
    if (!outer.alpha.is_zero() || !outer.c.is_int_symbolic() || outer.c.integer() < 0)
      throw unsupported_error("the parameter s admits nonnegative integer powers only: " +
                              f.str());
    long p = static_cast<long>(outer.c.integer());
    MeroFunction sp = MeroFunction::one();
    for (long k = 0; k < p; ++k) sp = sp * MeroFunction::var_s();
    acc.g0.mero = acc.g0.mero * sp;
    return;
  }
  if (!f.depends_on(cc.yvar) && !contains_svar(f)) {
    attach_power(acc, f, outer);
    return;
  }
  switch (n->kind) {
    case Node::Var:  // the fibre variable itself
      acc.ell += outer.alpha;
      acc.eta += outer.c;
      return;
    case Node::Pow:
      classify(acc, cc, f.child_a(), exp_scale(outer, n->value));
      return;
    case Node::PowS: {
      if (!outer.alpha.is_zero())
        throw unsupported_error("exponent quadratic in s: " + f.str());
      PowExponent inner{n->value * outer.c, ExpCoeff(0)};
      classify(acc, cc, f.child_a(), inner);
      return;
    }
    case Node::Mul:
    case Node::Div: {
      std::vector<std::pair<XExpr, bool>> factors;
      flatten_product(f, false, factors);
      for (auto& [g, inv] : factors) {
        PowExponent e = inv ? PowExponent{-outer.alpha, -outer.c} : outer;
        classify(acc, cc, g, e);
      }
      return;
    }
    case Node::Log: {
      XExpr arg = f.child_a();
      if (arg.node()->kind == Node::Var && arg.node()->name == cc.yvar) {
        if (!outer.alpha.is_zero() || !outer.c.is_int_symbolic() || outer.c.integer() < 0)
          throw unsupported_error("log of the fibre variable needs a nonnegative integer power: " +
                                  f.str());
        acc.mu += static_cast<int>(outer.c.integer());
        return;
      }
      throw unsupported_error("unsupported logarithm of a fibre-dependent argument: " + f.str());
    }
    case Node::Add:
    case Node::Sub:
      classify_sum_base(acc, cc, f, outer);
      return;
    default:
      throw unsupported_error("unsupported pattern: " + f.str());
  }
}

StrongSeries build_unit_series(const UnitDesc& u, const Cell1D& cell, int d) {
  XExpr ubase = cell.zero_lower() ? XExpr::one() : cell.lower / XExpr::variable(cell.fibre_var);
  XExpr vbase = cell.unbounded() ? XExpr::one() : XExpr::variable(cell.fibre_var) / cell.upper;
  std::vector<std::tuple<long, long, SeriesCoeff>> entries;
  entries.emplace_back(0, 0, coeff_one());
  bool has_m = false, has_n = false;
  double dev = 0.0;
  long max_t = 0;
  std::vector<double> sups;
  std::vector<long> levels;
  for (auto& [c, q] : u.terms) {
    Rat scaled = q * d;
    if (denominator(scaled) != 1)
      throw unsupported_error("fibre power incompatible with the ramification");
    long lj = numerator(scaled).convert_to<long>();
    RescaledTerm rt = monomial_rescale(c, lj, d, cell);
    long m = 0, n = 0;
    if (rt.side == RescaledTerm::AoverY) {
      m = rt.index;
      has_m = true;
    } else if (rt.side == RescaledTerm::YoverB) {
      n = rt.index;
      has_n = true;
    }
    entries.emplace_back(m, n, coeff_of(MeroFunction::one(), rt.coeff));
    dev += rt.sup;
    sups.push_back(rt.sup);
    levels.push_back(m + n);
    max_t = std::max(max_t, m + n);
  }
  // contract: sup_i <= C * rho^{t_i} with rho = 2/3
  double C = 1.0;
  for (size_t k = 0; k < sups.size(); ++k)
    C = std::max(C, sups[k] * std::pow(1.5, static_cast<double>(levels[k])));
  StrongSeries U = StrongSeries::finite(d, has_m, has_n, ubase, vbase, std::move(entries),
                                        Rat(2, 3), C);
  U.dev_bound = dev;
  return U;
}

}  // namespace

std::vector<PreparedGenerator> prepare_pattern(const XExpr& expr, const Cell1D& cell) {
  std::vector<std::pair<ExpCoeff, XExpr>> addends;
  flatten_sum(expr, ExpCoeff(1), addends);
  std::vector<PreparedGenerator> out;
  for (auto& [sign, term] : addends) {
    ClassifyCtx cc{&cell, cell.fibre_var};
    FactorAcc acc;
    acc.g0.mero = MeroFunction::constant(sign);
    classify(acc, cc, term, PowExponent{ExpCoeff(0), ExpCoeff(1)});

    // ramification: all rational fibre exponents over one denominator
    Int den = denominator(acc.eta.re_rat());
    den = lcm(den, denominator(acc.ell.re_rat()));
    for (auto& u : acc.units)
      for (auto& [c, q] : u.terms) den = lcm(den, denominator(q));
    int d = den.convert_to<int>();

    PreparedGenerator g;
    g.cell = cell;
    g.d = d;
    g.mu = acc.mu;
    g.ell = Rat(d) * acc.ell;
    g.eta = Rat(d) * acc.eta;
    g.g0 = {acc.g0};
    g.phi = StrongSeries::constant_one();
    g.phi.d = d;
    bool first = true;
    for (auto& u : acc.units) {
      StrongSeries s = unit_power(build_unit_series(u, cell, d), u.e);
      g.phi = first ? s : series_mul(g.phi, s);
      first = false;
    }
    if (first) {
      g.phi = StrongSeries::constant_one();
      g.phi.d = d;
      XExpr yv = XExpr::variable(cell.fibre_var);
      g.phi.u_base = cell.zero_lower() ? XExpr::one() : cell.lower / yv;
      g.phi.v_base = cell.unbounded() ? XExpr::one() : yv / cell.upper;
    }
    g.cls = g.ell.is_int_symbolic() ? PreparedGenerator::CKM : PreparedGenerator::CPKM;
    g.poles = g.phi.poles;
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace pcm
