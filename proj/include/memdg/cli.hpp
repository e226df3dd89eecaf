#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace memdg {

struct RunConfig {
  std::string experiment;  // convergence | advection | custom
  int degree = 1;
  int levels = 5;
  double dt = 5e-4;
  double t_final = 1.0;
  double sigma = 10.0;
  double theta = 0.5;
  std::string interface_mode = "explicit";  // explicit | implicit
  std::string out_dir = "out";
  std::string solver = "lu";  // lu | gmres
  int threads = 1;
  std::vector<int> nx = {16};
  std::string init = "l2";  // l2 | elliptic
  double elliptic_lambda = 1.0;
  std::string config_file;  // custom experiment
  bool dump_system = false;

  std::uint64_t hash() const;
};

struct ParsedCli {
  RunConfig config;
  bool help = false;
  std::string help_text;
};

/// Parses the flag list (without argv[0]); throws UsageError on bad input.
ParsedCli parse_cli(const std::vector<std::string>& args);

std::string usage_text();

/// Full driver used by the executable. Returns the process exit code:
/// 0 success, 1 runtime failure, 2 usage error.
int run_main(int argc, char** argv);

}  // namespace memdg
