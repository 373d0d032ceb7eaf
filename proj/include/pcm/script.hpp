#pragma once

// The CLI mini-language: constant declarations with certified enclosures,
// base-variable boxes, named functions, cells, and one command. PEG-style
// recursive descent with longest-match powers; parse errors carry line and
// column.

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "pcm/cells.hpp"

namespace pcm {

struct parse_error : public std::runtime_error {
  int line, col;
  parse_error(const std::string& msg, int line_, int col_)
      : std::runtime_error(msg + " at line " + std::to_string(line_) + ", column " +
                           std::to_string(col_)),
        line(line_),
        col(col_) {}
};

struct SNode {
  enum Kind { Num, Ident, Call, Bin, Neg } kind = Num;
  Rat num;
  std::string name;          // Ident/Call
  char op = 0;               // Bin: + - * / ^
  std::vector<std::shared_ptr<SNode>> args;
  int line = 0, col = 0;
};
using SNodePtr = std::shared_ptr<SNode>;

struct ConstDecl {
  std::string name;
  IrrDef def;
};

struct CellDecl {
  std::string name;
  std::string var;
  SNodePtr lower, upper;  // nullptr upper = inf; lower num 0 = zero-based
  SNodePtr theta;         // optional
  int sigma = 1, tau = 1;
};

struct Piece {
  SNodePtr expr;
  std::string cell;
};

struct Command {
  std::string kind;                       // prepare|integrate|mellin|poles|locus|grid|asymp|verify|noncomp
  std::string var;                        // integration variable / noncomp sub-kind
  std::vector<Piece> pieces;
  std::map<std::string, SNodePtr> kv;     // noncomp arguments
  std::map<std::string, std::vector<std::pair<SNodePtr, SNodePtr>>> kv_pairs;  // tuple lists
};

struct Script {
  std::vector<ConstDecl> consts;
  std::map<std::string, std::pair<double, double>> base_boxes;  // declaration boxes
  std::vector<std::string> base_order;
  std::map<std::string, std::pair<std::string, SNodePtr>> funcs;  // name -> (param, body)
  std::map<std::string, CellDecl> cells;
  std::vector<std::string> cell_order;
  Command command;
};

Script parse_script(const std::string& text);
std::string print_script(const Script& s);
std::string print_expr(const SNodePtr& e);

// surface-to-engine conversion (consts must already be declared)
struct ConvertEnv {
  const Script* script;
  std::vector<std::string> vars;  // base vars + the fibre variable
};
XExpr to_xexpr(const SNodePtr& e, const ConvertEnv& env);
ExpCoeff to_scalar(const SNodePtr& e, const ConvertEnv& env);  // constant expressions
Cell1D build_cell(const Script& s, const std::string& cell_name);

}  // namespace pcm
