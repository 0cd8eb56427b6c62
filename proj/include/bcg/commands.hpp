#pragma once

// Report-producing commands behind the bcglab CLI. Every command is
// deterministic given its options, which are embedded in the report.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bcg/hyperbolic.hpp"
#include "bcg/report.hpp"
#include "bcg/second_variation.hpp"

namespace bcg {

struct CommandOutput {
  RunReport report;
  /// Main table first; further tables carry a file suffix.
  std::vector<std::pair<std::string, CsvTable>> tables;
};

struct JfuncOptions {
  double a_max = 2.0;
  double b_max = 2.0;
  int points = 21;
  int grid_n = 16;
};
CommandOutput cmd_jfunc_h2xh2(const JfuncOptions& opt);

struct Sl3Options {
  std::vector<double> deltas = {0.0, 2e-2, 1e-2, 1e-3, 1e-4};
  std::uint64_t seed = 3;
};
CommandOutput cmd_sl3(const Sl3Options& opt);

struct Sl4Options {
  std::string atoms_path;
  std::vector<int> which = {1, 2, 3};
  SecondVariationOptions sv;
  double g_range = 3.14159265358979323846;
  int g_points = 41;
};
CommandOutput cmd_sl4(const Sl4Options& opt);

struct BcgOptions {
  std::vector<double> s_list = {1.2, 1.5, 2.0};
  std::vector<double> s_trend = {2.0, 1.5, 1.2, 1.05};
  int sample_points = 20;
  double max_radius = 0.6;
  double tol = 1e-8;
  double h_fd = 1e-4;
  std::uint64_t seed = 11;
  SigmaOptions sigma;
};
CommandOutput cmd_bcg(const BcgOptions& opt);

/// Deterministic sample points with |y| <= max_radius.
std::vector<DiskPoint> disk_samples(int count, double max_radius, std::uint64_t seed);

struct SelftestOptions {
  std::string atoms_path;
  bool printed_b = false;
  int mc_samples = 100000;
  std::uint64_t seed = 20240607;
};
/// The invariant suite; one check per property.
CommandOutput cmd_selftest(const SelftestOptions& opt);

/// Default location of the shipped atom table.
std::string default_atoms_path();

}  // namespace bcg
