#pragma once

// Closed-form parametric integration of prepared generators in the fibre
// variable: antiderivatives of power-log monomials, bounded- and
// unbounded-fibre integration with exact pole bookkeeping, Puiseux-data
// regrouping, the parametric Mellin transform, iterated integration, and
// asymptotic expansions at infinity.

#include "pcm/cells.hpp"
#include "pcm/locus.hpp"
#include "pcm/prepare.hpp"

namespace pcm {

struct fragment_escape_error : public std::runtime_error {
  explicit fragment_escape_error(const std::string& w) : std::runtime_error(w) {}
};

// Lemma-style antiderivative data: int y^{(ls+g)/d} (log y)^mu dy =
// sum_i c_{mu,i} (log y)^i y^{(ls+g+d)/d} / (ls+g+d)^{mu+1-i},
// c_{mu,i} = (-1)^{mu-i} mu!/i! d^{mu+1-i}.
struct AntiderivTerm {
  Rat c;
  int log_power;    // i
  int denom_power;  // mu+1-i
};
std::vector<AntiderivTerm> antiderivative(int mu, int d);
std::complex<double> antiderivative_eval(const ExpCoeff& ell, const ExpCoeff& gamma, int d,
                                         int mu, const std::complex<double>& s, double y);

struct HGenerator {
  CoeffTerm pre;        // mero(s) * xfac(x) * parametric powers
  StrongSeries series;  // x-level strong series; value = pre * sum(series)
  std::complex<double> eval(const EvalCtx& ctx, int M, double* err = nullptr) const;
  std::string json(int order) const;
};

struct RemovableEntry {
  ExpCoeff sigma;
  std::string note;
};

struct MellinResult {
  std::vector<HGenerator> H;
  PoleSet poles_in;    // P
  PoleSet poles_out;   // P' (points, lattices, and pole lines)
  PoleSet collision;   // P'' (included in poles_out as well)
  IntegrationLocus locus;
  std::vector<RemovableEntry> removable;       // within the reporting window
  std::vector<PreparedGenerator> inputs;       // provenance (sigma-splits, oracle)

  std::complex<double> eval(const EvalCtx& ctx, int M, double* err = nullptr) const;
  // value of the holomorphic extension at a removable singularity sigma
  std::complex<double> removable_value(const ExpCoeff& sigma,
                                       const std::map<std::string, double>& x, int M) const;
  std::string json(int order, const Window& w) const;
};

MellinResult integrate_bounded(const PreparedGenerator& T, int report_radius = 8);
// finite sum of prepared generators on one unbounded cell
MellinResult integrate_unbounded(const std::vector<PreparedGenerator>& gens,
                                 int report_radius = 8);
MellinResult integrate_1var(const std::vector<PreparedGenerator>& gens, int report_radius = 8);

// multiplies by the Mellin kernel y^{s-1} ((ell,eta) += (d,-d)) and integrates
MellinResult mellin_transform(const std::vector<PreparedGenerator>& gens,
                              int report_radius = 8);
MellinResult mellin_transform(const std::vector<std::pair<Cell1D, XExpr>>& pieces,
                              int report_radius = 8);

// iterated integration, innermost variable first; each intermediate result
// must re-enter the pattern fragment on the next variable
MellinResult integrate_multi(const XExpr& integrand,
                             const std::vector<std::vector<Cell1D>>& stages);

// Puiseux regrouping on one unbounded cell: pairwise distinct families with
// non-integer eta differences when (ell, mu) coincide
std::vector<PreparedGenerator> regroup_puiseux(std::vector<PreparedGenerator> gens);

struct AsympTerm {
  SeriesCoeff coeff;
  std::complex<double> exponent;  // a + ib at the given s
  int log_power;
  size_t family;
  long k;
};
std::vector<AsympTerm> asymptotic_expansion(const std::vector<PreparedGenerator>& gens,
                                            const ExpCoeff& s, int N);

}  // namespace pcm
