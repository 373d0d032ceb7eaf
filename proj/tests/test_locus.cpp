#include <cmath>

#include "doctest.h"
#include "pcm/integrate.hpp"
#include "pcm/oracle.hpp"

using namespace pcm;

namespace {

Cell1D cell_over(XExpr lower, XExpr upper) {
  Cell1D c;
  c.base_vars = {"x"};
  c.base_box = {{"x", {0.0, 1.0}}};
  c.lower = std::move(lower);
  c.upper = std::move(upper);
  c.certify();
  return c;
}

XExpr ax() { return XExpr::one() + XExpr::variable("x") / XExpr::constant(2L); }
XExpr bx() { return XExpr::constant(2L) + XExpr::variable("x"); }

// the combined integrand of the strip example: Mellin kernel times the
// geometric piece on (0,a) plus the binomial piece on (a,inf)
MellinResult strip_example() {
  XExpr y = XExpr::variable("y");
  Cell1D zc = cell_over(XExpr::constant(0L), ax());
  Cell1D uc = cell_over(ax(), XExpr::infinity());
  XExpr f = ax() * bx() / (ax() * bx() - y) * pow_s(y, ExpCoeff(1)) * pow(y, ExpCoeff(-1));
  XExpr g = pow_s(y, ExpCoeff(1)) * pow(y, ExpCoeff(-2)) *
            pow_s(XExpr::one() + ax() / (bx() * y), ExpCoeff(1));
  auto gens = prepare_pattern(f, zc);
  auto g2 = prepare_pattern(g, uc);
  gens.insert(gens.end(), g2.begin(), g2.end());
  return integrate_1var(gens);
}

}  // namespace

TEST_CASE("a cell with all strip indices zero carries no conditions") {
  MellinResult r = strip_example();
  auto conds = r.locus.conditions_at({0.5, 0.1});
  CHECK(conds.empty());
}

TEST_CASE("the strip example integrates exactly on 0 < Re s < 1") {
  MellinResult r = strip_example();
  // grid lines at Re(s) = 0 and Re(s) = 1 bound the open strip
  auto segs = grid_segments(r.locus.grid, Window{-0.5, 1.5, -1, 1});
  std::vector<double> xs;
  for (auto& sg : segs) xs.push_back(sg[0]);
  std::sort(xs.begin(), xs.end());
  REQUIRE(xs.size() == 2);
  CHECK(xs[0] == doctest::Approx(0.0));
  CHECK(xs[1] == doctest::Approx(1.0));

  // inside the strip: integrable (no conditions); to the right: the leading
  // coefficient condition is provably nonzero, so the locus is empty there
  auto inside = r.locus.conditions_at({0.5, 0.0});
  CHECK(inside.empty());
  auto right = r.locus.conditions_at({1.5, 0.0});
  REQUIRE(!right.empty());
  bool some_nonzero = false;
  for (auto& c : right) some_nonzero |= c.verdict == Verdict::ProvedNonzero;
  CHECK(some_nonzero);
  auto left = r.locus.conditions_at({-0.5, 0.0});
  REQUIRE(!left.empty());
  some_nonzero = false;
  for (auto& c : left) some_nonzero |= c.verdict == Verdict::ProvedNonzero;
  CHECK(some_nonzero);
}

TEST_CASE("divergence beyond the strip shows up in partial quadratures") {
  // at s = 1.5 the fibre integral diverges at infinity: growing partials
  XExpr y = XExpr::variable("y");
  XExpr g = pow_s(y, ExpCoeff(1)) * pow(y, ExpCoeff(-2)) *
            pow_s(XExpr::one() + ax() / (bx() * y), ExpCoeff(1));
  Cell1D uc = cell_over(ax(), XExpr::infinity());
  auto gens = prepare_pattern(g, uc);
  std::map<std::string, double> vars{{"x", 0.5}};
  std::complex<double> s{1.5, 0.0};
  double prev = 0.0;
  for (double top : {1e2, 1e4, 1e6}) {
    vars["y"] = 0;  // placeholder slot
    auto f = [&](double yv) {
      std::map<std::string, double> v = vars;
      v["y"] = yv;
      EvalCtx ctx{s, &v};
      return std::complex<double>(std::abs(gens[0].eval(ctx, 40)), 0.0);
    };
    QuadReport q = quad_adaptive(f, 1.25, top, 1e-8);
    CHECK(q.value.real() > prev);
    prev = q.value.real();
  }
  CHECK(prev > 10.0);
}

TEST_CASE("a vanishing leading coefficient extends the locus one strip") {
  // two binomial-type generators engineered so the k = 0 coefficients cancel
  XExpr y = XExpr::variable("y");
  Cell1D uc = cell_over(ax(), XExpr::infinity());
  XExpr g1 = pow_s(y, ExpCoeff(1)) * pow(y, ExpCoeff(-2)) *
             pow_s(XExpr::one() + ax() / (bx() * y), ExpCoeff(1));
  XExpr g2 = pow_s(y, ExpCoeff(1)) * pow(y, ExpCoeff(-2));
  auto gens = prepare_pattern(g1 - g2, uc);
  MellinResult r = integrate_1var(gens);
  // on the strip 1 < Re s < 2 the only condition is h_0 = xi_0 - 1 = 0
  auto conds = r.locus.conditions_at({1.5, 0.0});
  REQUIRE(!conds.empty());
  for (auto& c : conds) CHECK(c.verdict == Verdict::ProvedZero);
  // the integral over the strip indeed converges: quadrature stays bounded
  std::map<std::string, double> vars{{"x", 0.5}};
  std::complex<double> s{1.5, 0.0};
  auto f = [&](double yv) {
    std::map<std::string, double> v = vars;
    v["y"] = yv;
    EvalCtx ctx{s, &v};
    XExpr expr = g1 - g2;
    return expr.eval(ctx);
  };
  QuadReport lo = quad_adaptive(f, 1.25, 1e3, 1e-9);
  QuadReport hi = quad_adaptive(f, 1.25, 1e6, 1e-9);
  CHECK(std::abs(hi.value - lo.value) < 0.05 * (1.0 + std::abs(lo.value)));
  // while one strip further right the next condition fails
  auto conds2 = r.locus.conditions_at({2.5, 0.0});
  bool some_nonzero = false;
  for (auto& c : conds2) some_nonzero |= c.verdict == Verdict::ProvedNonzero;
  CHECK(some_nonzero);
}

TEST_CASE("locus reports enumerate cells with verdicts") {
  MellinResult r = strip_example();
  auto reports = r.locus.report(Window{-1.5, 2.5, -1, 1});
  bool saw_clean_strip = false, saw_blocked_strip = false;
  for (auto& rep : reports) {
    if (rep.cell.dim != 2) continue;
    if (rep.conditions.empty() && rep.sample.real() > 0 && rep.sample.real() < 1)
      saw_clean_strip = true;
    if (!rep.locus_nonempty_here()) saw_blocked_strip = true;
  }
  CHECK(saw_clean_strip);
  CHECK(saw_blocked_strip);
}
