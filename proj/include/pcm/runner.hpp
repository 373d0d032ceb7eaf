#pragma once

// Executes a parsed script: wires cells and expressions into the preparation
// and integration pipeline and renders deterministic JSON (or CSV). Exit
// codes: 0 success, 1 parse/usage, 2 unsupported pattern, 3 undecidable
// comparison, 4 verification mismatch.

#include <string>

#include "pcm/grids.hpp"
#include "pcm/script.hpp"

namespace pcm {

struct RunOptions {
  int order = 60;         // series truncation
  double tol = 1e-6;      // verification tolerance
  Window window;          // grid/locus reporting window
  unsigned seed = 1;      // scan seed
  bool csv = false;
  std::string at;         // "re,im" evaluation point for asymp
  int terms = 6;          // asymp term count
  int samples = 5;        // verify sample count
};

struct RunOutput {
  std::string text;
  int code = 0;
};

RunOutput run_script_text(const std::string& text, const RunOptions& opt);
RunOutput run_script(const Script& script, const RunOptions& opt);

}  // namespace pcm
