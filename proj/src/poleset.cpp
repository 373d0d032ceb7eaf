#include "pcm/poleset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace pcm {

bool PointLattice::contains(const ExpCoeff& s) const {
  ExpCoeff v = ell * s + beta;
  auto n = v.try_integer();
  if (!n) return false;
  return nat_index ? *n >= 0 : true;
}

ExpCoeff PointLattice::member(const Int& nu) const {
  return (ExpCoeff(Rat(nu)) - beta) / ell;
}

std::string PointLattice::json() const {
  std::ostringstream os;
  os << "{\"ell\":" << ell.json() << ",\"beta\":" << beta.json() << ",\"index\":\""
     << (nat_index ? "N" : "Z") << "\"}";
  return os.str();
}

bool LineFamily::contains(const ExpCoeff& s) const {
  ExpCoeff v = (ell * s + beta).real_part();
  auto n = v.try_integer();
  if (!n) return false;
  return nat_index ? *n >= 0 : true;
}

std::string LineFamily::json() const {
  std::ostringstream os;
  os << "{\"ell\":" << ell.json() << ",\"beta\":" << beta.json() << ",\"index\":\""
     << (nat_index ? "N" : "Z") << "\",\"kind\":\"re\"}";
  return os.str();
}

void PoleSet::add_point(const ExpCoeff& p) {
  points.push_back(p);
  dedupe();
}

void PoleSet::add_lattice(PointLattice l) {
  lattices.push_back(std::move(l));
  dedupe();
}

void PoleSet::add_line(LineFamily l) {
  lines.push_back(std::move(l));
  dedupe();
}

void PoleSet::merge(const PoleSet& o) {
  points.insert(points.end(), o.points.begin(), o.points.end());
  lattices.insert(lattices.end(), o.lattices.begin(), o.lattices.end());
  lines.insert(lines.end(), o.lines.begin(), o.lines.end());
  dedupe();
}

void PoleSet::dedupe() {
  auto keyless = [](const ExpCoeff& a, const ExpCoeff& b) { return a.key_cmp(b) < 0; };
  std::sort(points.begin(), points.end(), keyless);
  points.erase(std::unique(points.begin(), points.end()), points.end());
  auto lat_key = [](const PointLattice& a, const PointLattice& b) {
    int c = a.ell.key_cmp(b.ell);
    if (c) return c < 0;
    c = a.beta.key_cmp(b.beta);
    if (c) return c < 0;
    return a.nat_index < b.nat_index;
  };
  std::sort(lattices.begin(), lattices.end(), lat_key);
  lattices.erase(std::unique(lattices.begin(), lattices.end(),
                             [](const PointLattice& a, const PointLattice& b) {
                               return a.ell == b.ell && a.beta == b.beta &&
                                      a.nat_index == b.nat_index;
                             }),
                 lattices.end());
  auto line_key = [](const LineFamily& a, const LineFamily& b) {
    int c = a.ell.key_cmp(b.ell);
    if (c) return c < 0;
    c = a.beta.key_cmp(b.beta);
    if (c) return c < 0;
    return a.nat_index < b.nat_index;
  };
  std::sort(lines.begin(), lines.end(), line_key);
  lines.erase(std::unique(lines.begin(), lines.end(),
                          [](const LineFamily& a, const LineFamily& b) {
                            return a.ell == b.ell && a.beta == b.beta &&
                                   a.nat_index == b.nat_index;
                          }),
              lines.end());
}

bool PoleSet::contains(const ExpCoeff& s) const {
  for (auto& p : points)
    if (p == s) return true;
  for (auto& l : lattices)
    if (l.contains(s)) return true;
  for (auto& l : lines)
    if (l.contains(s)) return true;
  return false;
}

double PoleSet::distance(const std::complex<double>& s) const {
  double d = std::numeric_limits<double>::infinity();
  for (auto& p : points) d = std::min(d, std::abs(s - p.approx()));
  for (auto& l : lattices) {
    // distance to the nearest lattice member: solve ell*s + beta ~ nu
    std::complex<double> v = l.ell.approx() * s + l.beta.approx();
    double nu = std::round(v.real());
    if (l.nat_index && nu < 0) nu = 0;
    std::complex<double> root = (std::complex<double>(nu, 0.0) - l.beta.approx()) / l.ell.approx();
    d = std::min(d, std::abs(s - root));
  }
  for (auto& l : lines) {
    std::complex<double> v = l.ell.approx() * s + l.beta.approx();
    double nu = std::round(v.real());
    if (l.nat_index && nu < 0) nu = 0;
    // |Re(ell s + beta) - nu| / |ell| bounds the geometric distance to the line
    d = std::min(d, std::abs(v.real() - nu) / std::abs(l.ell.approx()));
  }
  return d;
}

std::vector<ExpCoeff> PoleSet::points_in_disk(double radius) const {
  std::vector<ExpCoeff> out = points;
  for (auto& l : lattices) {
    // |(nu - beta)/ell| <= radius  =>  |nu| <= radius*|ell| + |beta|
    double bound = radius * std::abs(l.ell.approx()) + std::abs(l.beta.approx()) + 1;
    long lo = l.nat_index ? 0 : static_cast<long>(-bound);
    for (long nu = lo; nu <= static_cast<long>(bound); ++nu) {
      ExpCoeff m = l.member(Int(nu));
      if (std::abs(m.approx()) <= radius + 1e-12) out.push_back(m);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const ExpCoeff& a, const ExpCoeff& b) { return a.key_cmp(b) < 0; });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string PoleSet::json() const {
  std::ostringstream os;
  os << "{\"points\":[";
  for (size_t k = 0; k < points.size(); ++k) {
    if (k) os << ",";
    os << points[k].json();
  }
  os << "],\"lattices\":[";
  for (size_t k = 0; k < lattices.size(); ++k) {
    if (k) os << ",";
    os << lattices[k].json();
  }
  os << "],\"lines\":[";
  for (size_t k = 0; k < lines.size(); ++k) {
    if (k) os << ",";
    os << lines[k].json();
  }
  os << "]}";
  return os.str();
}

std::string PoleSet::lattice_generators_json() const {
  // {(nu - beta)/ell} = -beta/ell + (1/ell)*index
  std::ostringstream os;
  os << "[";
  bool first = true;
  for (auto& l : lattices) {
    if (!first) os << ",";
    first = false;
    ExpCoeff offset = (-l.beta) / l.ell;
    ExpCoeff step = ExpCoeff(1) / l.ell;
    os << "{\"offset\":" << offset.json() << ",\"step\":" << step.json()
       << ",\"index\":\"" << (l.nat_index ? "N" : "Z") << "\"}";
  }
  os << "]";
  return os.str();
}

bool PoleSet::operator==(const PoleSet& o) const {
  if (points.size() != o.points.size() || lattices.size() != o.lattices.size() ||
      lines.size() != o.lines.size())
    return false;
  for (size_t k = 0; k < points.size(); ++k)
    if (!(points[k] == o.points[k])) return false;
  for (size_t k = 0; k < lattices.size(); ++k)
    if (!(lattices[k].ell == o.lattices[k].ell && lattices[k].beta == o.lattices[k].beta &&
          lattices[k].nat_index == o.lattices[k].nat_index))
      return false;
  for (size_t k = 0; k < lines.size(); ++k)
    if (!(lines[k].ell == o.lines[k].ell && lines[k].beta == o.lines[k].beta &&
          lines[k].nat_index == o.lines[k].nat_index))
      return false;
  return true;
}

}  // namespace pcm
