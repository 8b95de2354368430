#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hgeo/models.hpp"

namespace hgeo {

/// Everything a command needs. Read from an INI file with sections
/// [model] [protocol] [grids] [noise] [filter] [output]; command-line
/// flags are applied on top.
struct RunConfig {
  // [model]: name plus any numeric model constant (x, t_c, Delta_L, ...)
  std::string model = "landau_zener";
  std::map<std::string, double> constants;
  int state_index = 0;
  double z0 = 10.0;  // symmetric boundaries [-z0, z0] unless lambda0/lambda1 are set
  std::optional<double> lambda0, lambda1;

  // [protocol]
  std::optional<double> alpha, beta, n_plus;
  int samples = 1024;

  // [grids]; grids are "lo:hi:count" or comma lists
  std::vector<double> t_f;  // explicit grid, otherwise linspace(tf_min, tf_max, tf_points)
  double tf_min = 0.0;
  double tf_max = 10.0;
  int tf_points = 50;
  std::vector<double> alpha_grid, beta_grid, n_plus_grid, f_c_grid;

  // [noise]
  std::optional<double> t2;
  double sigma_x = 0.1;
  double sigma_z = 0.0;
  int mc_samples = 200;
  std::uint64_t seed = 1;
  double f_min = 1e-3;
  double f_max = 1e2;

  // [filter]
  int filter_order = 3;
  double f_c = 1.0;

  // [output]
  std::string out_dir = "out";
  std::string format = "csv";
  int threads = 0;  // 0: HGEO_NUM_THREADS or the OpenMP default
};

/// "lo:hi:count" (inclusive linspace) or "a,b,c". Throws ConfigError/InvalidValue.
std::vector<double> parse_grid(const std::string& text);

RunConfig parse_config(const std::string& ini_text);
RunConfig load_config(const std::filesystem::path& path);

/// Stable text form of every field; hashed into artifact names.
std::string canonical_text(const RunConfig& c);

/// Validates grids and enumerations. Throws ConfigError.
void validate(const RunConfig& c);

ParametricModel config_model(const RunConfig& c);
std::pair<double, double> config_boundaries(const RunConfig& c);
std::vector<double> config_tf_grid(const RunConfig& c);
/// (alpha, beta) from the protocol section; n_plus maps onto the LZ family.
std::pair<double, double> config_protocol(const RunConfig& c);

}  // namespace hgeo
