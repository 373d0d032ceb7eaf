#include "pcm/locus.hpp"

#include <cmath>
#include <sstream>

#include "pcm/noncomp.hpp"

namespace pcm {

std::string verdict_str(Verdict v) {
  switch (v) {
    case Verdict::ProvedZero:
      return "proved-zero";
    case Verdict::ProvedNonzero:
      return "proved-nonzero";
    default:
      return "unknown";
  }
}

void IntegrationLocus::judge(LocusCondition& c, const std::complex<double>& s) const {
  if (coeff_is_zero(c.g)) {
    c.verdict = Verdict::ProvedZero;
    return;
  }
  double mx = 0.0;
  EvalCtx ctx;
  ctx.s = s;
  for (auto& x : base_samples) {
    ctx.vars = &x;
    try {
      mx = std::max(mx, std::abs(coeff_eval(c.g, ctx)));
    } catch (const std::exception&) {
    }
  }
  c.max_abs = mx;
  c.verdict = mx > 1e-8 ? Verdict::ProvedNonzero : Verdict::Unknown;
}

std::vector<LocusCondition> IntegrationLocus::conditions_at(
    const std::complex<double>& s) const {
  std::vector<LocusCondition> out;
  for (size_t i = 0; i < families.size(); ++i) {
    auto [j, on] = grid.classify(i, s);
    for (long k = 0; k < j; ++k) {
      LocusCondition c;
      c.family = i;
      c.k = k;
      c.g = families[i].cond(k);
      judge(c, s);
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::vector<LocusCellReport> IntegrationLocus::report(const Window& w) const {
  std::vector<LocusCellReport> out;
  for (auto& cell : enumerate_gcells(grid, w)) {
    LocusCellReport r;
    r.cell = cell;
    if (cell.dim == 2 && !cell.polygon.empty()) {
      double cx = 0, cy = 0;
      for (auto& p : cell.polygon) {
        cx += p[0];
        cy += p[1];
      }
      cx /= cell.polygon.size();
      cy /= cell.polygon.size();
      r.sample = {cx, cy};
      r.conditions = conditions_at(r.sample);
    } else {
      for (size_t i = 0; i < families.size(); ++i)
        for (long k = 0; k < cell.j[i]; ++k) {
          LocusCondition c;
          c.family = i;
          c.k = k;
          c.g = families[i].cond(k);
          c.verdict = coeff_is_zero(c.g) ? Verdict::ProvedZero : Verdict::Unknown;
          r.conditions.push_back(std::move(c));
        }
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string IntegrationLocus::json(const Window& w) const {
  std::ostringstream os;
  os << "{\"grid\":" << grid.json() << ",\"excluded\":" << excluded.json() << ",\"cells\":[";
  auto reports = report(w);
  for (size_t k = 0; k < reports.size(); ++k) {
    if (k) os << ",";
    auto& r = reports[k];
    os << "{\"cell\":" << r.cell.json() << ",\"conditions\":[";
    for (size_t c = 0; c < r.conditions.size(); ++c) {
      if (c) os << ",";
      os << "{\"family\":" << r.conditions[c].family << ",\"k\":" << r.conditions[c].k
         << ",\"g\":" << coeff_json(r.conditions[c].g) << ",\"verdict\":\""
         << verdict_str(r.conditions[c].verdict) << "\"}";
    }
    os << "],\"locus_nonempty\":" << (r.locus_nonempty_here() ? "true" : "false") << "}";
  }
  os << "]}";
  return os.str();
}

}  // namespace pcm
