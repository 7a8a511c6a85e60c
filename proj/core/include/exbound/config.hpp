#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "exbound/approx.hpp"
#include "exbound/bounds_conforming.hpp"
#include "exbound/problem.hpp"

namespace exbound {

struct LadderEntry {
  int n_radial = 0;
  int n_angular = 0;

  bool operator==(const LadderEntry&) const = default;
};

/// One experiment definition, read from a JSON document.
///
/// Required keys: "geometry" ("ball" or "cube"), "radius", "ladder" (array of
/// {"n_radial", "n_angular"} objects). Everything else has a default. Unknown
/// keys anywhere in the document are rejected.
struct RunConfig {
  Obstacle geometry = Obstacle::Ball;
  double radius = 5.0;
  std::vector<LadderEntry> ladder;
  int degree = 1;  // degree of the truncated approximation
  double boundary_value = 1.0;
  Alg1Options solver;
  MajorantConfig majorant;
  std::vector<double> thetas{0.5, 1.0, 2.0};
  std::vector<double> deltas{0.0, 0.01, 0.1};
  std::uint64_t seed = 20240607;
  std::string output_dir = "out";
};

// Throws ConfigError with a message naming the offending key.
RunConfig parse_config(std::string_view json_text);
RunConfig load_config(const std::string& path);

std::string_view to_string(Obstacle obstacle);

}  // namespace exbound
