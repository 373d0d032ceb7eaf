#pragma once

// Independent numerical verification: adaptive Gauss-Kronrod quadrature of
// generators and raw integrands over cells (with explicit truncation tails on
// open fibres) and circle-average limits at removable singularities. The
// quadrature path never consults the closed-form integration engine.

#include <functional>

#include "pcm/cells.hpp"

namespace pcm {

struct QuadReport {
  std::complex<double> value{0.0, 0.0};
  double abs_err_est = 0.0;
  long evaluations = 0;
  double tail_bound = 0.0;
};

struct non_integrable_error : public std::runtime_error {
  explicit non_integrable_error(const std::string& w) : std::runtime_error(w) {}
};

using Integrand = std::function<std::complex<double>(double)>;

// adaptive bisection with the embedded G7/K15 pair; complex integrands ride
// as two real integrations sharing the subdivision
QuadReport quad_adaptive(const Integrand& f, double a, double b, double abs_tol,
                         long max_intervals = 4000);

// quadrature of a prepared generator over its cell at fixed (s, x)
QuadReport quad_cell(const PreparedGenerator& T, const std::complex<double>& s,
                     const std::map<std::string, double>& x, double rel_tol, int M = 60);

// quadrature of a raw integrand expression over a cell at fixed (s, x);
// optional extra Mellin kernel y^{s-1}; decay exponents for the open ends are
// estimated from samples (reported inside abs_err_est)
QuadReport quad_expr_cell(const XExpr& integrand, const Cell1D& cell,
                          const std::complex<double>& s, const std::map<std::string, double>& x,
                          double rel_tol, bool mellin_kernel);

// circle-average limit of a meromorphic evaluator at sigma; divergence is
// reported through *diverged (a genuine pole upstream)
std::complex<double> mero_limit(const std::function<std::complex<double>(std::complex<double>)>& H,
                                const std::complex<double>& sigma, double r0, int rings,
                                double* err_est, bool* diverged);

}  // namespace pcm
