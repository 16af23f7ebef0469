#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mz/convex_geom.hpp"
#include "mz/grid.hpp"
#include "mz/operator.hpp"
#include "mz/truncation.hpp"

namespace mz {

enum class Family { kSpikeTrain, kOscillation, kShearLayer };

std::string family_name(Family f);
/// Throws InvalidArgument for unknown names.
Family family_from_name(const std::string& name);

/// Synthetic u_j = a_j b on a zero background. For spike_train and
/// shear_layer the amplitude a_j is calibrated so that the measured lambda_j
/// equals lambda0 * ratio^j; oscillation is a laminate of period
/// period0 * 2^-j whose window ramp is the declared bad set.
struct GeneratorSpec {
  Family family = Family::kSpikeTrain;
  Grid grid;
  HomogeneousOperator op;
  ConvexBody K;
  double M = 1.0;  // ||D^l u_j|| <= M |K|
  double lambda0 = 1e-3;
  double ratio = 0.5;
  double width = 0.1;
  int spikes = 1;
  std::vector<double> direction;  // per output of u, normalised; default e_0
  std::optional<Box> support;     // default: grid box shrunk by a quarter
  double period0 = 0.25;          // oscillation
  double slope = 1.0;             // oscillation slope
  std::uint64_t seed = 1;
};

struct Generated {
  GridField u;
  double amplitude = 0.0;
  double lambda_target = 0.0;  // 0 when the family has no amplitude law
  double lambda_measured = 0.0;
  double dl = 0.0;             // measured ||D^l u||
  std::vector<std::uint8_t> bad_set;  // oscillation only
};

/// Deterministic in (spec, j). Throws InvalidArgument when lambda_j cannot
/// be reached within the derivative bound.
Generated generate_sequence(const GeneratorSpec& spec, int j);

/// Centres used by spike_train (seeded, independent of j).
std::vector<std::vector<double>> spike_centres(const GeneratorSpec& spec);

}  // namespace mz
