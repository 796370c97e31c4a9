#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "haarint/integrand.hpp"
#include "haarint/log_value.hpp"
#include "haarint/rng.hpp"

namespace haarint::cli {

/// Parsed and validated invocation; echoed into every report so a run
/// can be reproduced from its output alone.
struct RunConfig {
  std::string command;
  int n = 0;
  int q = 1;
  double beta = 0.0;
  std::string y_spec;  // scalar literal or @path to a matrix file
  std::size_t samples = 0;
  RngStream stream;
  double tol = 0.0;  // gate override when > 0
  std::string format = "json";
  std::string out;
  std::string suite;
  std::string pattern;
  std::string integrand = "one";
  std::string mode = "exact";
  double q_min = 1.0;
  double q_bar = 0.0;
  int grid = 200;
};

struct CommandResult {
  nlohmann::json report;
  std::string csv;  // sweep table; empty for json-only commands
  bool pass = true;
};

nlohmann::json log_value_json(const LogValue& v);

/// "i,j;i,j|k,l;k,l", 1-based entries; plain factors left of '|',
/// conjugated right.
MomentPattern parse_pattern(const std::string& text);

CommandResult cmd_moment(const RunConfig& cfg);
CommandResult cmd_exact(const RunConfig& cfg);
CommandResult cmd_saddle_linear(const RunConfig& cfg);
CommandResult cmd_saddle_quartic(const RunConfig& cfg);
CommandResult cmd_sweep_h(const RunConfig& cfg);
CommandResult cmd_compare(const RunConfig& cfg);

const std::vector<std::string>& suite_names();

/// Exit codes: 0 all gates pass, 1 gate failure, 2 usage error.
int run_cli(int argc, const char* const* argv);

}  // namespace haarint::cli
