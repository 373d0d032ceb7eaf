#include "pcm/grids.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace pcm {

bool Grid::vertical() const {
  for (auto& g : data)
    if (!g.ell.is_real() || g.ell.is_zero()) {
      if (g.ell.is_zero()) continue;
      return false;
    }
  return true;
}

std::array<double, 3> Grid::line_coeffs(size_t i) const {
  // Re(ell (u+iv) + eta) + d = Re(ell) u - Im(ell) v + Re(eta) + d
  std::complex<double> l = data[i].ell.approx();
  std::complex<double> e = data[i].eta.approx();
  return {l.real(), -l.imag(), e.real() + d};
}

double Grid::t_value(size_t i, const std::complex<double>& s) const {
  auto c = line_coeffs(i);
  return c[0] * s.real() + c[1] * s.imag() + c[2];
}

std::pair<long, bool> Grid::classify(size_t i, const std::complex<double>& s, double tol) const {
  double t = t_value(i, s);
  if (t < -tol) return {0, false};
  double fl = std::floor(t + tol);
  bool on = std::abs(t - std::round(t)) <= tol;
  if (on) {
    long j = static_cast<long>(std::llround(t)) + 1;
    if (j < 1) return {0, false};  // t ~ negative integer below 0 handled above
    return {j, true};
  }
  return {static_cast<long>(fl) + 1, false};
}

std::string Grid::json() const {
  std::ostringstream os;
  os << "{\"d\":" << d << ",\"data\":[";
  for (size_t i = 0; i < data.size(); ++i) {
    if (i) os << ",";
    os << "{\"ell\":" << data[i].ell.json() << ",\"eta\":" << data[i].eta.json()
       << ",\"mu\":" << data[i].mu << "}";
  }
  os << "],\"vertical\":" << (vertical() ? "true" : "false") << "}";
  return os.str();
}

std::string GCell::key() const {
  std::ostringstream os;
  for (size_t i = 0; i < j.size(); ++i) os << j[i] << (on_line[i] ? "-" : "o") << ";";
  return os.str();
}

bool GCell::contains(const Grid& g, const std::complex<double>& s, double tol) const {
  for (size_t i = 0; i < j.size(); ++i) {
    auto [jj, on] = g.classify(i, s, tol);
    if (jj != j[i] || on != on_line[i]) return false;
  }
  return true;
}

std::string GCell::json() const {
  std::ostringstream os;
  os << "{\"j\":[";
  for (size_t i = 0; i < j.size(); ++i) {
    if (i) os << ",";
    os << j[i];
  }
  os << "],\"star\":[";
  for (size_t i = 0; i < on_line.size(); ++i) {
    if (i) os << ",";
    os << "\"" << (on_line[i] ? "-" : "o") << "\"";
  }
  os << "],\"dim\":" << dim << ",\"area\":" << area << ",\"inradius\":" << inradius << "}";
  return os.str();
}

double polygon_area(const std::vector<std::array<double, 2>>& poly) {
  double a = 0.0;
  for (size_t k = 0; k < poly.size(); ++k) {
    auto& p = poly[k];
    auto& q = poly[(k + 1) % poly.size()];
    a += p[0] * q[1] - q[0] * p[1];
  }
  return 0.5 * std::abs(a);
}

std::vector<std::array<double, 2>> clip_halfplane(const std::vector<std::array<double, 2>>& poly,
                                                  double A, double B, double C) {
  std::vector<std::array<double, 2>> out;
  size_t n = poly.size();
  for (size_t k = 0; k < n; ++k) {
    auto& p = poly[k];
    auto& q = poly[(k + 1) % n];
    double fp = A * p[0] + B * p[1] + C;
    double fq = A * q[0] + B * q[1] + C;
    if (fp >= 0) out.push_back(p);
    if ((fp >= 0) != (fq >= 0)) {
      double t = fp / (fp - fq);
      out.push_back({p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])});
    }
  }
  return out;
}

namespace {

struct LineRef {
  size_t family;
  long j;           // boundary of Xi_{family, j, -}: t = j - 1
  double A, B, C0;  // A u + B v + C0 = 0
};

std::vector<LineRef> window_lines(const Grid& g, const Window& w, double margin) {
  std::vector<LineRef> lines;
  for (size_t i = 0; i < g.data.size(); ++i) {
    auto c = g.line_coeffs(i);
    if (std::abs(c[0]) < 1e-15 && std::abs(c[1]) < 1e-15) continue;  // ell == 0
    // range of t over the window
    double t1 = c[0] * w.re_lo + c[1] * w.im_lo + c[2];
    double t2 = c[0] * w.re_lo + c[1] * w.im_hi + c[2];
    double t3 = c[0] * w.re_hi + c[1] * w.im_lo + c[2];
    double t4 = c[0] * w.re_hi + c[1] * w.im_hi + c[2];
    double tmin = std::min({t1, t2, t3, t4}) - margin;
    double tmax = std::max({t1, t2, t3, t4}) + margin;
    long jlo = std::max(1L, static_cast<long>(std::ceil(tmin + 1)));
    long jhi = static_cast<long>(std::floor(tmax + 1));
    for (long j = jlo; j <= jhi; ++j)
      lines.push_back({i, j, c[0], c[1], c[2] - (j - 1)});
  }
  return lines;
}

std::vector<std::array<double, 2>> window_poly(const Window& w) {
  return {{w.re_lo, w.im_lo}, {w.re_hi, w.im_lo}, {w.re_hi, w.im_hi}, {w.re_lo, w.im_hi}};
}

// Chebyshev radius of the halfplane intersection, bisected, capped by `cap`
double chebyshev_radius(const std::vector<std::array<double, 3>>& planes, const Window& w,
                        double cap) {
  auto feasible = [&](double r) {
    Window big = w;
    double grow = cap * 2;
    big.re_lo -= grow;
    big.re_hi += grow;
    big.im_lo -= grow;
    big.im_hi += grow;
    auto poly = window_poly(big);
    for (auto& p : planes) {
      double norm = std::hypot(p[0], p[1]);
      poly = clip_halfplane(poly, p[0], p[1], p[2] - r * norm);
      if (poly.size() < 3) return false;
    }
    return true;
  };
  double lo = 0.0, hi = cap;
  if (!feasible(0.0)) return 0.0;
  for (int it = 0; it < 60; ++it) {
    double mid = 0.5 * (lo + hi);
    if (feasible(mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace

std::vector<GCell> enumerate_gcells(const Grid& g, const Window& w) {
  size_t N = g.data.size();
  std::vector<GCell> out;
  std::set<std::string> seen;

  auto classify_point = [&](const std::complex<double>& s, double tol) {
    GCell c;
    c.j.resize(N);
    c.on_line.resize(N);
    c.dim = 2;
    for (size_t i = 0; i < N; ++i) {
      auto [jj, on] = g.classify(i, s, tol);
      c.j[i] = jj;
      c.on_line[i] = on;
      // an ell = 0 family puts the whole plane into one Xi set; only genuine
      // lines cut the dimension down
      auto lc = g.line_coeffs(i);
      bool genuine_line = std::abs(lc[0]) > 1e-15 || std::abs(lc[1]) > 1e-15;
      if (on && genuine_line) c.dim -= 1;
    }
    c.dim = std::max(c.dim, 0);
    return c;
  };

  auto lines = window_lines(g, w, 0.5);
  // candidate probe points: window corners/centre, line-line intersections,
  // line-window crossings, all nudged in 8 directions
  std::vector<std::complex<double>> pts;
  pts.push_back({0.5 * (w.re_lo + w.re_hi), 0.5 * (w.im_lo + w.im_hi)});
  for (double u : {w.re_lo, w.re_hi})
    for (double v : {w.im_lo, w.im_hi}) pts.push_back({u, v});
  std::vector<std::complex<double>> online_pts;
  const double edges[4][4] = {
      {w.re_lo, w.im_lo, 0.0, w.im_hi - w.im_lo},               // left
      {w.re_hi, w.im_lo, 0.0, w.im_hi - w.im_lo},               // right
      {w.re_lo, w.im_lo, w.re_hi - w.re_lo, 0.0},               // bottom
      {w.re_lo, w.im_hi, w.re_hi - w.re_lo, 0.0},               // top
  };
  for (size_t a = 0; a < lines.size(); ++a) {
    auto& la = lines[a];
    // crossings with the window rectangle edges
    for (auto& e : edges) {
      double denom = la.A * e[2] + la.B * e[3];
      if (std::abs(denom) < 1e-14) continue;
      double t = -(la.A * e[0] + la.B * e[1] + la.C0) / denom;
      if (t >= 0 && t <= 1) online_pts.push_back({e[0] + t * e[2], e[1] + t * e[3]});
    }
    for (size_t b = a + 1; b < lines.size(); ++b) {
      auto& lb = lines[b];
      double det = la.A * lb.B - lb.A * la.B;
      if (std::abs(det) < 1e-14) continue;
      double u = (-la.C0 * lb.B + lb.C0 * la.B) / det;
      double v = (-la.A * lb.C0 + lb.A * la.C0) / det;
      if (u >= w.re_lo - 1e-9 && u <= w.re_hi + 1e-9 && v >= w.im_lo - 1e-9 &&
          v <= w.im_hi + 1e-9)
        online_pts.push_back({u, v});
    }
  }
  // midpoints along each line between consecutive special points
  for (auto& l : lines) {
    std::vector<std::pair<double, std::complex<double>>> onl;
    for (auto& p : online_pts)
      if (std::abs(l.A * p.real() + l.B * p.imag() + l.C0) < 1e-9) {
        double param = -l.B * p.real() + l.A * p.imag();
        onl.push_back({param, p});
      }
    std::sort(onl.begin(), onl.end(),
              [](auto& x, auto& y) { return x.first < y.first; });
    for (size_t k = 0; k + 1 < onl.size(); ++k)
      online_pts.push_back(0.5 * (onl[k].second + onl[k + 1].second));
  }
  pts.insert(pts.end(), online_pts.begin(), online_pts.end());

  double eps = 1e-5 * std::max(w.re_hi - w.re_lo, w.im_hi - w.im_lo);
  std::vector<std::complex<double>> probes;
  for (auto& p : pts) {
    probes.push_back(p);
    for (int k = 0; k < 8; ++k) {
      double ang = k * M_PI / 4;
      probes.push_back(p + std::polar(eps, ang));
    }
  }

  for (auto& p : probes) {
    if (p.real() < w.re_lo - 1e-12 || p.real() > w.re_hi + 1e-12 ||
        p.imag() < w.im_lo - 1e-12 || p.imag() > w.im_hi + 1e-12)
      continue;
    GCell c = classify_point(p, 0.2 * eps);
    if (seen.count(c.key())) continue;
    seen.insert(c.key());
    if (c.dim == 2) {
      // geometric description: halfplanes bounding Xi_{i, j, o}
      std::vector<std::array<double, 3>> planes;
      for (size_t i = 0; i < N; ++i) {
        auto lc = g.line_coeffs(i);
        if (std::abs(lc[0]) < 1e-15 && std::abs(lc[1]) < 1e-15) continue;
        if (c.j[i] == 0) {
          planes.push_back({-lc[0], -lc[1], -lc[2]});  // t <= 0
        } else {
          planes.push_back({lc[0], lc[1], lc[2] - (c.j[i] - 1)});  // t >= j-1
          planes.push_back({-lc[0], -lc[1], -(lc[2] - c.j[i])});   // t <= j
        }
      }
      auto poly = window_poly(w);
      for (auto& pl : planes) {
        poly = clip_halfplane(poly, pl[0], pl[1], pl[2]);
        if (poly.size() < 3) break;
      }
      if (poly.size() < 3) continue;  // numerical sliver
      c.polygon = poly;
      c.area = polygon_area(poly);
      double cap = 4 * std::max(w.re_hi - w.re_lo, w.im_hi - w.im_lo) + 8;
      c.inradius = chebyshev_radius(planes, w, cap);
    }
    out.push_back(std::move(c));
  }
  return out;
}

double epsilon_gap(const Grid& g, const Window& w) {
  auto cells = enumerate_gcells(g, w);
  double eps = std::numeric_limits<double>::infinity();
  for (auto& c : cells)
    if (c.dim == 2) eps = std::min(eps, c.inradius);
  if (!std::isfinite(eps)) return 0.0;
  return eps * (1.0 - 1e-9);
}

std::vector<std::array<double, 4>> grid_segments(const Grid& g, const Window& w) {
  std::vector<std::array<double, 4>> segs;
  for (auto& l : window_lines(g, w, 0.0)) {
    std::vector<std::array<double, 2>> hits;
    auto try_edge = [&](double x0, double y0, double dx, double dy) {
      double denom = l.A * dx + l.B * dy;
      if (std::abs(denom) < 1e-14) return;
      double t = -(l.A * x0 + l.B * y0 + l.C0) / denom;
      if (t >= -1e-12 && t <= 1 + 1e-12) hits.push_back({x0 + t * dx, y0 + t * dy});
    };
    try_edge(w.re_lo, w.im_lo, w.re_hi - w.re_lo, 0);
    try_edge(w.re_lo, w.im_hi, w.re_hi - w.re_lo, 0);
    try_edge(w.re_lo, w.im_lo, 0, w.im_hi - w.im_lo);
    try_edge(w.re_hi, w.im_lo, 0, w.im_hi - w.im_lo);
    if (hits.size() >= 2)
      segs.push_back({hits[0][0], hits[0][1], hits[1][0], hits[1][1]});
  }
  return segs;
}

PoleSet collision_set(const std::vector<GridDatum>& data) {
  PoleSet p;
  for (size_t i = 0; i < data.size(); ++i)
    for (size_t j = i + 1; j < data.size(); ++j) {
      if (data[i].mu != data[j].mu) continue;
      ExpCoeff dl = data[i].ell - data[j].ell;
      if (dl.is_zero()) continue;
      p.add_lattice(PointLattice{dl, data[i].eta - data[j].eta, false});
    }
  return p;
}

}  // namespace pcm
