#pragma once

// Pole bookkeeping: finite point sets, affine point lattices
// {(nu - beta)/ell : nu in Z or N}, and line families {s : Re(ell*s + beta)
// in Z or N}. Bounded-fibre integration creates point lattices; unbounded
// fibres create line families whose sharp sublattice (where denominators
// actually vanish) is kept alongside for lattice-generator reporting.

#include <complex>
#include <string>
#include <vector>

#include "pcm/scalar.hpp"

namespace pcm {

struct PointLattice {
  ExpCoeff ell;   // != 0
  ExpCoeff beta;
  bool nat_index = false;  // true: nu in N, false: nu in Z
  bool contains(const ExpCoeff& s) const;  // may throw undecidable_error
  ExpCoeff member(const Int& nu) const;    // (nu - beta)/ell
  std::string json() const;
};

struct LineFamily {
  ExpCoeff ell;
  ExpCoeff beta;
  bool nat_index = false;
  bool contains(const ExpCoeff& s) const;
  std::string json() const;
};

class PoleSet {
 public:
  std::vector<ExpCoeff> points;
  std::vector<PointLattice> lattices;
  std::vector<LineFamily> lines;

  bool empty() const { return points.empty() && lattices.empty() && lines.empty(); }
  void add_point(const ExpCoeff& p);
  void add_lattice(PointLattice l);
  void add_line(LineFamily l);
  void merge(const PoleSet& o);

  bool contains(const ExpCoeff& s) const;
  // distance from s to the nearest represented pole point / line (numeric);
  // +inf when the set is empty
  double distance(const std::complex<double>& s) const;

  // members of the point part within |s| <= radius (for reporting)
  std::vector<ExpCoeff> points_in_disk(double radius) const;

  std::string json() const;
  // explicit Z-lattice generator description of the point part beyond
  // `base`: one entry (offset, step, index kind) per lattice
  std::string lattice_generators_json() const;

  bool operator==(const PoleSet& o) const;

 private:
  void dedupe();
};

}  // namespace pcm
