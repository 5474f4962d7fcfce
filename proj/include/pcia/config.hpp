#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "pcia/evaluate.hpp"

namespace pcia {

/// Invalid or inconsistent configuration input (CLI exit code 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Stage2Config {
  double eps = 1e-10;
  int max_iters = 5000;
};

struct ExperimentConfig {
  std::string model;  // symmetric | geometric | unequal | fully_connected | demo_fivepair
  int k = 0;
  Index nt = 0;
  Index nr = 0;
  // symmetric
  int l = 0;
  int e1 = 0;
  int e2 = 0;
  // geometric
  double area_km = 0;
  double l_km = 0;
  double s_km = 0;

  std::vector<int> d_max;      // length k (scalars broadcast at parse time)
  std::vector<double> snr_db;  // evaluation grid, strictly increasing
  int drops = 1;
  std::uint64_t seed = 0;
  std::vector<Scheme> schemes;
  double dof_lo_db = 40.0;
  double dof_hi_db = 60.0;
  Stage2Config stage2;
};

/// Parses .toml (flat keys plus [stage2]) or .json by file extension and
/// validates. Throws ConfigError.
ExperimentConfig load_config(const std::string& path);

/// Parse from already-loaded text; format is "toml" or "json".
ExperimentConfig parse_config(const std::string& text, const std::string& format);

void validate_config(const ExperimentConfig& cfg);

/// Stable 16-hex-digit hash of the normalized configuration; invariant under
/// key reordering in the source file.
std::string config_hash(const ExperimentConfig& cfg);

/// Channel drop for the given index, seeded from cfg.seed.
NetworkInstance generate_instance(const ExperimentConfig& cfg, int drop);

}  // namespace pcia
