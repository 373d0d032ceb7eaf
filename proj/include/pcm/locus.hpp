#pragma once

// Integration-locus descriptions over a non-accumulating grid: per G-cell, the
// conjunction of coefficient-vanishing conditions, each carrying a
// three-valued verdict. Verdicts are decided by structural zeroness, by
// sampling, and for leading oscillatory blocks by the witness scan; an
// "unknown" verdict never suppresses the symbolic description.

#include "pcm/grids.hpp"
#include "pcm/series.hpp"

namespace pcm {

enum class Verdict { ProvedZero, ProvedNonzero, Unknown };
std::string verdict_str(Verdict v);

struct LocusFamily {
  GridDatum datum;        // reduced data feeding the grid
  StrongSeries stream;    // condition coefficients g_k = stream.at(k) (single index)
  bool index_on_n = false;  // stream indexed on the n slot instead of m
  SeriesCoeff cond(long k) const { return index_on_n ? stream.at(0, k) : stream.at(k, 0); }
};

struct LocusCondition {
  size_t family;
  long k;
  SeriesCoeff g;
  Verdict verdict = Verdict::Unknown;
  double max_abs = 0.0;  // largest |g| seen while sampling
};

struct LocusCellReport {
  GCell cell;
  std::complex<double> sample{0., 0.};
  std::vector<LocusCondition> conditions;
  bool locus_nonempty_here() const {
    for (auto& c : conditions)
      if (c.verdict == Verdict::ProvedNonzero) return false;
    return true;
  }
};

class IntegrationLocus {
 public:
  Grid grid;
  PoleSet excluded;  // P'
  std::vector<LocusFamily> families;
  std::vector<std::map<std::string, double>> base_samples;

  // conditions attached to the cell containing s (k < j_Sigma(family))
  std::vector<LocusCondition> conditions_at(const std::complex<double>& s) const;
  std::vector<LocusCellReport> report(const Window& w) const;
  std::string json(const Window& w) const;

 private:
  void judge(LocusCondition& c, const std::complex<double>& s) const;
  friend struct LocusJudgeAccess;
};

}  // namespace pcm
