#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ridgeprox/approx.hpp"
#include "ridgeprox/geometry.hpp"

namespace ridgeprox::cli {

using Json = nlohmann::ordered_json;

struct CommonOptions {
  std::string input;
  bool exact = false;
  std::optional<double> abs_tol;
  std::optional<double> rel_tol;
  std::string out;
  std::string csv;
  std::size_t max_closed_points = 12;
  std::uint64_t seed = 0;
  // Directions for CSV input, comma separated.
  std::string dir1;
  std::string dir2;
};

struct InputDocument {
  PointSet points;
  std::optional<ScalarField> field;
  std::uint64_t digest = 0;
};

/// Parses the JSON point-set document. Unknown keys are rejected; numbers may
/// be JSON numbers or strings holding a decimal or "p/q".
InputDocument parse_document(std::string_view text, const CommonOptions& common);

/// CSV points: optional header naming the columns, with "f" and "label"
/// columns treated specially; directions come from common.dir1 / dir2.
InputDocument parse_points_csv(std::string_view text, const CommonOptions& common);

/// Reads common.input, picking the CSV loader for a .csv extension.
InputDocument load_input(const CommonOptions& common);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

/// Shortest round-trip decimal; "inf", "-inf" and "nan" for non-finite values.
std::string format_double(double value);
/// JSON number, or the format_double string when not finite.
Json json_number(double value);

struct Output {
  Json report;
  std::string csv;  // empty when the command has no series
};

struct FitArgs {
  std::string method = "lp";
  std::size_t max_rounds = 1000;
  double stop_tol = 1e-12;
};

struct CheckArgs {
  std::string criterion;
  std::size_t threshold = 4;
  std::vector<double> deltas;
  double shrink = 0.5;
  std::size_t max_steps = 20;
  std::vector<std::size_t> probes;
  std::string fields;  // JSON file with a list of fields for thm22
  std::size_t samples = 20;
};

struct ReproArgs {
  std::string case_name;
  std::size_t n = 21;
  std::string series = "harmonic";
  std::size_t k = 10;
  std::size_t extra_grid = 0;
  std::string set = "c";
  std::size_t density = 9;
  std::vector<double> deltas;
  std::vector<std::string> probe;  // one point, forced into the sample
  std::string ball_dir1;
  std::string ball_dir2;
};

Output cmd_analyze(const CommonOptions& common);
Output cmd_fit(const CommonOptions& common, const FitArgs& args);
Output cmd_check(const CommonOptions& common, const CheckArgs& args);
Output cmd_repro(const CommonOptions& common, const ReproArgs& args);

/// Full command line entry point. Returns the process exit status.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace ridgeprox::cli
