#pragma once

// Command-line front end. parse_args turns argv into a JobConfig; run executes
// one, writing JSON artifacts (atomically) and tab-separated tables. Exit codes:
// 0 success, 2 validation, 3 precision, 4 hypothesis violation, 5 internal
// residual failure.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ramforge/json_io.hpp"

namespace ramforge {

inline constexpr std::uint64_t kDefaultSeed = 20240607;

struct JobConfig {
  std::string command;     // "lt", "ram", "herbrand", "criterion", "lift", "ring"
  std::string subcommand;  // "build", "profile", ...
  int p = 2, f = 1, e = 1;
  int N = 16;  // pi-adic precision (target for solvers)
  int T = 6;   // total-degree truncation of the group law
  int D = 32;  // x-degree truncation
  std::vector<std::string> alpha;   // O_K elements as integer literals
  std::vector<std::string> inputs;  // --series / --filtration / --input files
  std::string oracle, u_file, zeta, mu;
  int nmax = 2, n = 1, l = 1, d = 1, level = 1, target = 8;
  long q = 2;
  int r = 2, lmax = 4;
  long i0 = 0, i1 = 0;
  bool closed_form = false;
  std::string outdir = ".";
  std::uint64_t seed = kDefaultSeed;

  bool operator==(const JobConfig&) const = default;
};

Json to_json(const JobConfig& c);
JobConfig job_from_json(const Json& j, const std::string& path = "$");

/// Throws Error(InvalidArgument) on a malformed command line. --config FILE
/// loads a JobConfig document instead of reading options.
JobConfig parse_args(const std::vector<std::string>& args);

int run(const JobConfig& cfg, std::ostream& out, std::ostream& err);

/// parse_args + run; every failure becomes a message on err and an exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ramforge
