// Command-line front end: reads a script from a file (or stdin with "-"),
// runs its command, prints JSON or CSV to stdout.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pcm/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"symbolic-numeric parametric Mellin integrator"};
  std::string script_path;
  pcm::RunOptions opt;
  std::string window_spec;
  bool json_flag = false;
  app.add_option("script", script_path, "script file, or - for stdin")->required();
  app.add_option("--order", opt.order, "series truncation order (default 60)");
  app.add_option("--tol", opt.tol, "verification tolerance (default 1e-6)");
  app.add_option("--window", window_spec, "re_lo,re_hi,im_lo,im_hi for grid/locus output");
  app.add_option("--seed", opt.seed, "seed for sampling scans");
  app.add_option("--at", opt.at, "evaluation point re,im (asymp)");
  app.add_option("--terms", opt.terms, "asymptotic term count");
  app.add_option("--samples", opt.samples, "verification sample count");
  app.add_flag("--json", json_flag, "JSON output (default)");
  app.add_flag("--csv", opt.csv, "CSV output where supported");
  CLI11_PARSE(app, argc, argv);

  if (!window_spec.empty()) {
    double v[4];
    if (std::sscanf(window_spec.c_str(), "%lf,%lf,%lf,%lf", &v[0], &v[1], &v[2], &v[3]) != 4) {
      std::cerr << "bad --window\n";
      return 1;
    }
    opt.window = pcm::Window{v[0], v[1], v[2], v[3]};
  }

  std::string text;
  if (script_path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  } else {
    std::ifstream in(script_path);
    if (!in) {
      std::cerr << "cannot open " << script_path << "\n";
      return 1;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }

  pcm::RunOutput out = pcm::run_script_text(text, opt);
  std::cout << out.text << "\n";
  return out.code;
}
