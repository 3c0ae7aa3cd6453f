#pragma once

#include "shiftgeom/criteria.hpp"
#include "shiftgeom/disk_calculus.hpp"
#include "shiftgeom/io.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace shiftgeom {

enum class Command { curvature, criteria, toeplitz, counterexample };

std::optional<Command> parse_command(const std::string& name);
std::string_view to_string(Command c);

struct RunConfig {
  Command command = Command::curvature;
  std::filesystem::path frame;          // curvature, criteria
  std::filesystem::path symbol;         // toeplitz
  std::filesystem::path second_symbol;  // toeplitz, optional partner for multiplicativity
  GridParams grid;
  std::size_t truncation = kDefaultTruncation;
  Thresholds thresholds;
  int carleson_depth = 8;
  int probe_stride = 4;
  std::filesystem::path output_dir = ".";
  std::vector<cplx> points{cplx(0.0, 0.0), cplx(0.3, 0.0), cplx(0.5, 0.2)};
  bool heatmap = true;
  int order = 32;                  // Toeplitz section order
  cplx lambda{0.5, 0.0};           // Toeplitz kernel-action point
  double epsilon = 0.1;            // counterexample
  int spike_count = 2;
  std::size_t length = 0;          // 0: smallest length holding every spike
  std::vector<double> radii{0.0, 0.5, 0.9, 0.99, 0.999};
};

/// Reads a config document. Relative paths resolve against `base_dir`.
/// Unknown keys and out-of-range values raise data errors naming the key.
RunConfig parse_run_config(const Json& doc, const std::filesystem::path& base_dir);

/// Checks ranges after command-line overrides are applied.
void validate(const RunConfig& config);

/// Runs one command and returns the report written to report.json.
Json run(const RunConfig& config);

/// Entry point: exit 0 on success, 2 on validation failure, 3 on numerical failure.
int cli_main(int argc, char** argv);

}  // namespace shiftgeom
