#include "pcm/runner.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include "pcm/integrate.hpp"
#include "pcm/noncomp.hpp"
#include "pcm/oracle.hpp"

namespace pcm {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string fmt(const std::complex<double>& v) {
  return "[" + fmt(v.real()) + "," + fmt(v.imag()) + "]";
}

std::vector<std::pair<Cell1D, XExpr>> build_pieces(const Script& s) {
  std::vector<std::pair<Cell1D, XExpr>> out;
  for (auto& p : s.command.pieces) {
    Cell1D cell = build_cell(s, p.cell);
    ConvertEnv env{&s, cell.base_vars};
    env.vars.push_back(cell.fibre_var);
    out.emplace_back(cell, to_xexpr(p.expr, env));
  }
  return out;
}

std::vector<PreparedGenerator> prepare_all(
    const std::vector<std::pair<Cell1D, XExpr>>& pieces) {
  std::vector<PreparedGenerator> gens;
  for (auto& [cell, expr] : pieces) {
    auto p = prepare_pattern(expr, cell);
    gens.insert(gens.end(), p.begin(), p.end());
  }
  return gens;
}

std::complex<double> parse_at(const std::string& at, std::complex<double> dflt) {
  if (at.empty()) return dflt;
  double re = 0, im = 0;
  size_t comma = at.find(',');
  re = std::stod(at.substr(0, comma));
  if (comma != std::string::npos) im = std::stod(at.substr(comma + 1));
  return {re, im};
}

// sample s points inside the open locus, away from the excluded poles
std::vector<std::complex<double>> locus_sample_points(const MellinResult& res,
                                                      const Window& w, int want) {
  std::vector<std::complex<double>> out;
  for (auto& rep : res.locus.report(w)) {
    if (rep.cell.dim != 2) continue;
    bool clean = true;
    for (auto& c : rep.conditions)
      if (c.verdict != Verdict::ProvedZero) clean = false;
    if (!clean) continue;
    std::complex<double> s = rep.sample;
    if (res.poles_out.distance(s) < 0.2) {
      bool placed = false;
      for (int k = 0; k < 8 && !placed; ++k) {
        std::complex<double> cand = s + std::polar(0.3, k * M_PI / 4);
        if (res.poles_out.distance(cand) >= 0.2) {
          s = cand;
          placed = true;
        }
      }
    }
    out.push_back(s);
    if (static_cast<int>(out.size()) >= want) break;
  }
  if (out.empty() && res.locus.grid.empty()) {
    // integrable everywhere: any point off the poles serves
    std::complex<double> s(0.7, 0.23);
    while (res.poles_out.distance(s) < 0.2) s += std::complex<double>(0.31, 0.11);
    out.push_back(s);
  }
  return out;
}

RunOutput cmd_verify(const Script& script, const RunOptions& opt) {
  auto pieces = build_pieces(script);
  auto gens = prepare_all(pieces);
  MellinResult res = integrate_1var(gens);
  auto spts = locus_sample_points(res, opt.window, opt.samples);
  if (spts.empty())
    return {"{\"status\":\"no-open-locus\",\"max_rel_err\":null}", 4};
  double max_rel = 0.0;
  std::ostringstream rows;
  rows << "[";
  bool first = true;
  int used = 0;
  for (auto& s : spts) {
    // a couple of base points per s sample
    auto xs = pieces[0].first.sample_base(2, opt.seed);
    for (auto& x : xs) {
      EvalCtx ctx;
      ctx.s = s;
      ctx.vars = &x;
      std::complex<double> sym;
      double serr = 0.0;
      try {
        sym = res.eval(ctx, opt.order, &serr);
      } catch (const pole_proximity_error&) {
        continue;
      }
      std::complex<double> num(0.0, 0.0);
      double qerr = 0.0;
      for (auto& [cell, expr] : pieces) {
        QuadReport q = quad_expr_cell(expr, cell, s, x, opt.tol * 1e-3, false);
        num += q.value;
        qerr += q.abs_err_est;
      }
      double rel = std::abs(sym - num) / (1.0 + std::abs(num));
      max_rel = std::max(max_rel, rel);
      if (!first) rows << ",";
      first = false;
      rows << "{\"s\":" << fmt(s) << ",\"symbolic\":" << fmt(sym) << ",\"quad\":" << fmt(num)
           << ",\"rel_err\":" << fmt(rel) << "}";
      ++used;
    }
  }
  rows << "]";
  bool ok = used > 0 && max_rel <= opt.tol;
  std::ostringstream os;
  os << "{\"status\":\"" << (ok ? "ok" : "mismatch") << "\",\"max_rel_err\":" << fmt(max_rel)
     << ",\"samples\":" << rows.str() << "}";
  return {os.str(), ok ? 0 : 4};
}

RunOutput cmd_noncomp(const Script& script, const RunOptions& opt) {
  const Command& c = script.command;
  ConvertEnv env{&script, {}};
  auto get_num = [&](const std::string& key, double dflt) {
    auto it = c.kv.find(key);
    if (it == c.kv.end()) return dflt;
    return to_scalar(it->second, env).approx().real();
  };
  std::ostringstream os;
  if (c.var == "verdict" || c.var == "witness" || c.var == "pair") {
    OscillatorySum E;
    auto it = c.kv_pairs.find("terms");
    if (it == c.kv_pairs.end()) throw unsupported_error("terms=[(c,sigma),...] required");
    for (auto& [a, b] : it->second) {
      OscTerm t;
      t.c = to_scalar(a, env);
      t.sigma = b ? to_scalar(b, env) : ExpCoeff(0);
      E.terms.push_back(std::move(t));
    }
    if (c.kv.count("r")) E.r = to_scalar(c.kv.at("r"), env);
    E.nu = static_cast<int>(get_num("nu", 0));
    if (c.var == "verdict") {
      auto v = integrability_verdict(E);
      os << "{\"verdict\":\"" << verdict_name(v) << "\"}";
      return {os.str(), 0};
    }
    if (c.var == "witness") {
      double eps = get_num("eps", 0.0);
      if (eps == 0.0) {
        double csum = 0.0;
        for (auto& t : E.terms) csum += std::abs(t.c.approx());
        eps = 0.1 * csum;  // heuristic default: no constructive bound exists
      }
      auto r = witness_search(E, eps, get_num("ymax", 1e4),
                              static_cast<int>(get_num("per_decade", 4096)));
      os << "{\"found\":" << (r.found ? "true" : "false") << ",\"witness\":" << fmt(r.y)
         << ",\"magnitude\":" << fmt(r.magnitude) << ",\"evaluations\":" << r.evaluations
         << "}";
      return {os.str(), 0};
    }
    auto r = pair_witness_search(E, get_num("delta", 0.5), get_num("ymax", 1e4),
                                 static_cast<int>(get_num("per_decade", 4096)));
    os << "{\"found\":" << (r.found ? "true" : "false") << ",\"y1\":" << fmt(r.y1)
       << ",\"y2\":" << fmt(r.y2) << ",\"separation\":" << fmt(r.separation) << "}";
    return {os.str(), 0};
  }
  if (c.var == "weyl") {
    std::vector<WeylPhase> F;
    auto it = c.kv_pairs.find("sigmas");
    if (it == c.kv_pairs.end()) throw unsupported_error("sigmas=[...] required");
    for (auto& [a, b] : it->second) {
      (void)b;
      F.push_back(WeylPhase{to_scalar(a, env).approx().real(), {}});
    }
    std::vector<long> h;
    auto ith = c.kv_pairs.find("h");
    if (ith == c.kv_pairs.end()) throw unsupported_error("h=[...] required");
    for (auto& [a, b] : ith->second) {
      (void)b;
      h.push_back(static_cast<long>(to_scalar(a, env).approx().real()));
    }
    auto r = weyl_check(F, h, get_num("tmax", 1e4));
    os << "{\"final\":" << fmt(r.final_magnitude)
       << ",\"decreasing\":" << (r.decreasing_trend ? "true" : "false") << ",\"trace\":[";
    for (size_t k = 0; k < r.trace.size(); ++k) {
      if (k) os << ",";
      os << "[" << fmt(r.trace[k].first) << "," << fmt(r.trace[k].second) << "]";
    }
    os << "]}";
    return {os.str(), 0};
  }
  throw unsupported_error("unknown noncomp sub-command " + c.var);
}

}  // namespace

RunOutput run_script(const Script& script, const RunOptions& opt) {
  const std::string& kind = script.command.kind;
  std::ostringstream os;
  if (kind == "noncomp") return cmd_noncomp(script, opt);
  if (kind == "prepare") {
    auto pieces = build_pieces(script);
    os << "[";
    bool first = true;
    for (auto& [cell, expr] : pieces) {
      for (auto& g : prepare_pattern(expr, cell)) {
        if (!first) os << ",";
        first = false;
        os << g.json(std::min(opt.order, 12));
      }
    }
    os << "]";
    return {os.str(), 0};
  }
  if (kind == "verify") return cmd_verify(script, opt);

  auto pieces = build_pieces(script);
  if (kind == "asymp") {
    auto gens = prepare_all(pieces);
    std::complex<double> at = parse_at(opt.at, {0.5, 0.0});
    ExpCoeff s_exact(Rat(static_cast<long>(std::lround(at.real() * 4096)), 4096),
                     Rat(static_cast<long>(std::lround(at.imag() * 4096)), 4096));
    auto terms = asymptotic_expansion(gens, s_exact, opt.terms);
    os << "[";
    for (size_t k = 0; k < terms.size(); ++k) {
      if (k) os << ",";
      os << "{\"exponent\":" << fmt(terms[k].exponent) << ",\"log_power\":"
         << terms[k].log_power << ",\"coeff\":" << coeff_json(terms[k].coeff) << "}";
    }
    os << "]";
    return {os.str(), 0};
  }

  MellinResult res;
  if (kind == "mellin") {
    res = mellin_transform(pieces);
  } else {
    res = integrate_1var(prepare_all(pieces));
  }
  if (kind == "poles") {
    os << "{\"poles\":" << res.poles_out.json()
       << ",\"new_lattice_generators\":" << res.poles_out.lattice_generators_json() << "}";
    return {os.str(), 0};
  }
  if (kind == "locus") {
    os << res.locus.json(opt.window);
    return {os.str(), 0};
  }
  if (kind == "grid") {
    if (opt.csv) {
      std::ostringstream csv;
      csv << "x1,y1,x2,y2\n";
      for (auto& seg : grid_segments(res.locus.grid, opt.window))
        csv << fmt(seg[0]) << "," << fmt(seg[1]) << "," << fmt(seg[2]) << "," << fmt(seg[3])
            << "\n";
      return {csv.str(), 0};
    }
    os << "{\"grid\":" << res.locus.grid.json() << ",\"cells\":[";
    auto cells = enumerate_gcells(res.locus.grid, opt.window);
    for (size_t k = 0; k < cells.size(); ++k) {
      if (k) os << ",";
      os << cells[k].json();
    }
    os << "],\"epsilon\":" << fmt(epsilon_gap(res.locus.grid, opt.window)) << "}";
    return {os.str(), 0};
  }
  // integrate / mellin
  os << res.json(std::min(opt.order, 12), opt.window);
  return {os.str(), 0};
}

RunOutput run_script_text(const std::string& text, const RunOptions& opt) {
  try {
    Script s = parse_script(text);
    return run_script(s, opt);
  } catch (const parse_error& e) {
    return {std::string("{\"error\":\"parse\",\"message\":\"") + e.what() + "\"}", 1};
  } catch (const unsupported_error& e) {
    return {std::string("{\"error\":\"unsupported-pattern\",\"message\":\"") + e.what() +
                "\"}",
            2};
  } catch (const certification_error& e) {
    return {std::string("{\"error\":\"unsupported-pattern\",\"message\":\"") + e.what() +
                "\"}",
            2};
  } catch (const unit_certification_error& e) {
    return {std::string("{\"error\":\"unsupported-pattern\",\"message\":\"") + e.what() +
                "\"}",
            2};
  } catch (const undecidable_error& e) {
    return {std::string("{\"error\":\"undecidable-comparison\",\"message\":\"") + e.what() +
                "\"}",
            3};
  } catch (const verification_error& e) {
    return {std::string("{\"error\":\"verification\",\"message\":\"") + e.what() + "\"}", 4};
  } catch (const std::exception& e) {
    return {std::string("{\"error\":\"internal\",\"message\":\"") + e.what() + "\"}", 1};
  }
}

}  // namespace pcm
