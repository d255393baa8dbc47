#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tclab/consistency.hpp"
#include "tclab/lm_measures.hpp"
#include "tclab/prob_space.hpp"
#include "tclab/update_rules.hpp"

namespace tclab::cli {

/// Parsed scenario-tree document:
///   {"outcomes": [...], "probs": [...], "partitions": [[[indices]...]...],
///    "variables": {name: [values]}, "processes": {name: [[row]...]},
///    "benchmarks": {name: [variable names]}}
/// Values are numbers or the strings "inf" / "-inf".
struct TreeDocument {
  SpacePtr space;
  std::map<std::string, RandomVariable> variables;
  std::map<std::string, AdaptedProcess> processes;
  std::map<std::string, std::vector<std::string>> benchmarks;
};

/// Throws SchemaError naming the JSON path, AdaptednessError naming the process
/// and row, or the space validation errors.
TreeDocument parse_tree(std::string_view text);
TreeDocument load_tree(const std::string& path);

/// The S4 fixture with variable m1 = (1,3,2,5) and process V1 paying (2,-1,4,-3) at T.
std::string s4_document();

/// cexp, dglr, draroc:<alpha>, raroc-family:<alpha>:<x>, esssup. Throws UnknownIdentifier.
LMMeasure parse_measure(std::string_view id);
/// essinf, esssup, expectation, discounted:<alpha>, weak-process:<dir>,
/// semiweak:<dir>, benchmark:<set>:<measure>. Benchmark sets come from the
/// document; "zero" is always available.
UpdateRule parse_rule(std::string_view id, const TreeDocument& doc, Direction direction);
Direction parse_direction(std::string_view text);
Scope parse_scope(std::string_view text);

struct SessionConfig {
  std::string tree;
  double eps = 1e-9;
  double bisection_tol = 1e-8;
  std::uint64_t seed = 1;
  std::size_t samples = 200;
  std::string format = "json";
  bool serial = false;
};

/// Runs one command (args exclude the program name). JSON on `out`,
/// diagnostics on `err`. Exit code 0 = holds / ok, 2 = violated, 1 = error.
/// TCLAB_SEED, when set, overrides the seed.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tclab::cli
