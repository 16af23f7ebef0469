#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "mz/errors.hpp"
#include "mz/generators.hpp"
#include "mz/truncation.hpp"

namespace mz {

inline constexpr int kExitOk = 0;
inline constexpr int kExitSchema = 2;
inline constexpr int kExitDivergence = 3;
inline constexpr int kExitInvariant = 4;

/// Schema violations and missing input files in an experiment config.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct RunOutcome {
  int exit_code = kExitOk;
  std::string message;
  nlohmann::ordered_json report;
};

Grid grid_from_json(const nlohmann::json& j);
Box box_from_json(const nlohmann::json& j, int dim);
/// {"kind": "constant", "body": {...}} or
/// {"kind": "ball_affine_radius", "center": [...], "radius0": r0, "slope": [...]}
/// (ball about `center` with radius r0 + slope . x).
std::function<ConvexBody(std::span<const double>)> k_map_from_json(const nlohmann::json& j, int dim);
GeneratorSpec generator_from_json(const nlohmann::json& j, const Grid& grid, const HomogeneousOperator& op,
                                  const ConvexBody& K, double M);
WholeSpaceOptions whole_space_options_from_json(const nlohmann::json& config);

/// Runs every j of the configured sequence. Relative input paths resolve
/// against base_dir. Never throws: failures map to the exit-code contract.
RunOutcome run_config(const nlohmann::json& config, const std::string& base_dir = ".",
                      const std::optional<std::string>& out_dir = std::nullopt);
RunOutcome run_config_file(const std::string& path, const std::optional<std::string>& out_dir = std::nullopt);

/// Report with wall-clock fields removed, for determinism comparisons.
nlohmann::ordered_json strip_timing(nlohmann::ordered_json report);

}  // namespace mz
