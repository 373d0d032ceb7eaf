#pragma once

// Non-accumulating grids: the partition of the s-plane by the lines
// Re(ell_i s + eta_i) + d = j - 1 (j in N), their cells, inradius bounds,
// and the collision set where two Puiseux data produce colliding exponents.

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "pcm/poleset.hpp"

namespace pcm {

struct GridDatum {
  ExpCoeff ell, eta;
  int mu = 0;
};

struct Window {
  double re_lo = -4, re_hi = 4, im_lo = -4, im_hi = 4;
};

struct Grid {
  std::vector<GridDatum> data;
  int d = 1;

  bool empty() const { return data.empty(); }
  bool vertical() const;  // all ell real
  // t_i(s) = Re(ell_i s + eta_i) + d as an affine map of (Re s, Im s)
  std::array<double, 3> line_coeffs(size_t i) const;  // {A, B, C}: t = A*u + B*v + C
  double t_value(size_t i, const std::complex<double>& s) const;
  // family classification: Xi_{i,j,star}; star true means the boundary line
  std::pair<long, bool> classify(size_t i, const std::complex<double>& s,
                                 double tol = 1e-9) const;

  std::string json() const;
};

struct GCell {
  std::vector<long> j;
  std::vector<bool> on_line;  // star_Sigma(i) == '-'
  int dim = 2;                // 2 open, 1 segment/line, 0 point
  std::vector<std::array<double, 2>> polygon;  // cell clipped to the window (dim 2)
  double area = 0.0;
  double inradius = 0.0;  // Chebyshev radius of the unclipped cell (capped)
  std::string key() const;
  bool contains(const Grid& g, const std::complex<double>& s, double tol = 1e-9) const;
  std::string json() const;
};

std::vector<GCell> enumerate_gcells(const Grid& g, const Window& w);
// lower bound for the inradius of open cells meeting the window
double epsilon_gap(const Grid& g, const Window& w);
// boundary lines crossing the window, as segments (for CSV emission)
std::vector<std::array<double, 4>> grid_segments(const Grid& g, const Window& w);

PoleSet collision_set(const std::vector<GridDatum>& data);

// convex polygon helpers (shared with tests)
double polygon_area(const std::vector<std::array<double, 2>>& poly);
std::vector<std::array<double, 2>> clip_halfplane(const std::vector<std::array<double, 2>>& poly,
                                                  double A, double B, double C);
// clip {A*u + B*v + C >= 0}; polygon vertices counter-clockwise

}  // namespace pcm
