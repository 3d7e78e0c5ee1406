#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "polyfold/io.hpp"
#include "polyfold/polygon_folding.hpp"

namespace polyfold::cli {

struct RunConfig {
  std::string subcommand;
  int n = 0;
  std::optional<ScalarMode> mode;
  std::optional<std::uint64_t> seed;
  std::vector<int> subset;
  std::filesystem::path out;

  std::filesystem::path polygon;
  std::filesystem::path factorization;
  std::filesystem::path bundle;
  std::filesystem::path slack;
  std::filesystem::path t;
  std::filesystem::path u;

  std::optional<std::string> grid_bound;
  std::optional<std::uint64_t> faces;
  std::optional<long> rank;

  std::size_t full_check_cap = kFullVerificationCap;
  std::size_t sample_entries = kSampledEntries;
  std::size_t csv_cap = std::size_t{1} << 20;  // entries per CSV file
  std::size_t projection_cap = 64;             // n-gon size for the per-facet LPs
  std::size_t max_points = kRecoveryPointCap;
  std::optional<double> tolerance;             // float checks only; never tightens
};

struct RunResult {
  int exit_code = 0;  // 0 all checks pass, 1 a check failed, 2 error
  Json summary;
};

// Throws Error(parse_error) on bad arguments; --help yields nullopt after
// printing usage to `out`.
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out);

// Never throws; errors become {"status":"error","kind":...} with exit 2.
RunResult run(const RunConfig& config);

}  // namespace polyfold::cli
