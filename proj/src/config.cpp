#include "hgeo/config.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "hgeo/error.hpp"
#include "hgeo/io.hpp"
#include "hgeo/numerics.hpp"
#include "hgeo/synthesis.hpp"

namespace hgeo {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  const auto e = s.find_last_not_of(" \t\r\n");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw_config("InvalidValue", key + ": expected a number, got '" + raw + "'");
  return v;
}

long to_int(const std::string& key, const std::string& raw) {
  const double v = to_double(key, raw);
  if (v != std::floor(v)) throw_config("InvalidValue", key + ": expected an integer, got '" + raw + "'");
  return static_cast<long>(v);
}

std::string grid_text(const std::vector<double>& g) {
  std::string s;
  for (std::size_t i = 0; i < g.size(); ++i) s += (i ? "," : "") + format_number(g[i]);
  return s;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) return {};
  if (t.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::istringstream in(t);
    std::string p;
    while (std::getline(in, p, ':')) parts.push_back(p);
    if (parts.size() != 3) throw_config("InvalidValue", "range grids are lo:hi:count, got '" + text + "'");
    const long n = to_int("grid count", parts[2]);
    if (n < 1) throw_config("EmptyGrid", "grid '" + text + "' has no points");
    return linspace(to_double("grid", parts[0]), to_double("grid", parts[1]), static_cast<std::size_t>(n));
  }
  std::vector<double> out;
  std::istringstream in(t);
  std::string p;
  while (std::getline(in, p, ',')) out.push_back(to_double("grid", p));
  return out;
}

RunConfig parse_config(const std::string& ini_text) {
  boost::property_tree::ptree tree;
  std::istringstream in(ini_text);
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw_config("ParseError", e.what());
  }
  RunConfig c;
  static const std::set<std::string> sections = {"model", "protocol", "grids", "noise", "filter", "output"};
  for (const auto& [section, body] : tree) {
    if (!sections.count(section)) throw_config("UnknownKey", "unknown section [" + section + "]");
    for (const auto& [key, node] : body) {
      const std::string v = node.get_value<std::string>();
      const std::string full = section + "." + key;
      if (section == "model") {
        if (key == "name") c.model = trim(v);
        else if (key == "state_index") c.state_index = static_cast<int>(to_int(full, v));
        else if (key == "z0") c.z0 = to_double(full, v);
        else if (key == "lambda0") c.lambda0 = to_double(full, v);
        else if (key == "lambda1") c.lambda1 = to_double(full, v);
        else c.constants[key] = to_double(full, v);
      } else if (section == "protocol") {
        if (key == "alpha") c.alpha = to_double(full, v);
        else if (key == "beta") c.beta = to_double(full, v);
        else if (key == "n_plus") c.n_plus = to_double(full, v);
        else if (key == "samples") c.samples = static_cast<int>(to_int(full, v));
        else throw_config("UnknownKey", "unknown key " + full);
      } else if (section == "grids") {
        if (key == "tf") c.t_f = parse_grid(v);
        else if (key == "tf_min") c.tf_min = to_double(full, v);
        else if (key == "tf_max") c.tf_max = to_double(full, v);
        else if (key == "tf_points") c.tf_points = static_cast<int>(to_int(full, v));
        else if (key == "alpha") c.alpha_grid = parse_grid(v);
        else if (key == "beta") c.beta_grid = parse_grid(v);
        else if (key == "n_plus") c.n_plus_grid = parse_grid(v);
        else if (key == "f_c") c.f_c_grid = parse_grid(v);
        else throw_config("UnknownKey", "unknown key " + full);
      } else if (section == "noise") {
        if (key == "t2") c.t2 = to_double(full, v);
        else if (key == "sigma_x") c.sigma_x = to_double(full, v);
        else if (key == "sigma_z") c.sigma_z = to_double(full, v);
        else if (key == "samples") c.mc_samples = static_cast<int>(to_int(full, v));
        else if (key == "seed") c.seed = static_cast<std::uint64_t>(to_int(full, v));
        else if (key == "f_min") c.f_min = to_double(full, v);
        else if (key == "f_max") c.f_max = to_double(full, v);
        else throw_config("UnknownKey", "unknown key " + full);
      } else if (section == "filter") {
        if (key == "order") c.filter_order = static_cast<int>(to_int(full, v));
        else if (key == "f_c") c.f_c = to_double(full, v);
        else throw_config("UnknownKey", "unknown key " + full);
      } else {
        if (key == "dir") c.out_dir = trim(v);
        else if (key == "format") c.format = trim(v);
        else if (key == "threads") c.threads = static_cast<int>(to_int(full, v));
        else throw_config("UnknownKey", "unknown key " + full);
      }
    }
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) { return parse_config(read_text(path)); }

std::string canonical_text(const RunConfig& c) {
  std::ostringstream s;
  auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string("-"); };
  s << "model=" << c.model << "\n";
  for (const auto& [k, v] : c.constants) s << "const." << k << "=" << format_number(v) << "\n";
  s << "state_index=" << c.state_index << "\nz0=" << format_number(c.z0) << "\nlambda0=" << opt(c.lambda0)
    << "\nlambda1=" << opt(c.lambda1) << "\nalpha=" << opt(c.alpha) << "\nbeta=" << opt(c.beta)
    << "\nn_plus=" << opt(c.n_plus) << "\nsamples=" << c.samples << "\ntf=" << grid_text(c.t_f)
    << "\ntf_min=" << format_number(c.tf_min) << "\ntf_max=" << format_number(c.tf_max)
    << "\ntf_points=" << c.tf_points << "\nalpha_grid=" << grid_text(c.alpha_grid)
    << "\nbeta_grid=" << grid_text(c.beta_grid) << "\nn_plus_grid=" << grid_text(c.n_plus_grid)
    << "\nf_c_grid=" << grid_text(c.f_c_grid) << "\nt2=" << opt(c.t2) << "\nsigma_x=" << format_number(c.sigma_x)
    << "\nsigma_z=" << format_number(c.sigma_z) << "\nmc_samples=" << c.mc_samples << "\nseed=" << c.seed
    << "\nf_min=" << format_number(c.f_min) << "\nf_max=" << format_number(c.f_max)
    << "\nfilter_order=" << c.filter_order << "\nf_c=" << format_number(c.f_c) << "\nformat=" << c.format << "\n";
  return s.str();
}

void validate(const RunConfig& c) {
  if (c.format != "csv" && c.format != "json") throw_config("InvalidValue", "format must be csv or json");
  if (c.samples < 2) throw_config("InvalidValue", "protocol.samples must be at least 2");
  if (c.t_f.empty() && c.tf_points < 1) throw_config("EmptyGrid", "t_f grid is empty");
  if (c.t2 && !(*c.t2 > 0.0)) throw_config("InvalidT2", "T2 must be positive");
  if (c.mc_samples < 1) throw_config("InvalidValue", "noise.samples must be positive");
  if (c.filter_order < 1 || !(c.f_c > 0.0)) throw_config("InvalidFilter", "filter needs order >= 1 and f_c > 0");
  if (c.threads < 0) throw_config("InvalidValue", "output.threads must be non-negative");
}

ParametricModel config_model(const RunConfig& c) {
  auto constants = c.constants;
  // the two-level families default to x = 1 (energies in units of x)
  if ((c.model == "landau_zener" || c.model == "rescaled_lz" || c.model == "periodic_lz") && !constants.count("x"))
    constants["x"] = 1.0;
  return build_model(c.model, constants);
}

std::pair<double, double> config_boundaries(const RunConfig& c) {
  if (c.lambda0 && c.lambda1) return {*c.lambda0, *c.lambda1};
  if (c.lambda0 || c.lambda1) throw_config("MissingKey", "set both lambda0 and lambda1 or neither");
  if (c.model == "rescaled_lz" || c.model == "qubit_sphere") return {0.0, std::numbers::pi};
  return {-c.z0, c.z0};
}

std::vector<double> config_tf_grid(const RunConfig& c) {
  if (!c.t_f.empty()) return c.t_f;
  if (c.tf_points < 1) throw_config("EmptyGrid", "t_f grid is empty");
  return linspace(c.tf_min, c.tf_max, static_cast<std::size_t>(c.tf_points));
}

std::pair<double, double> config_protocol(const RunConfig& c) {
  if (c.alpha && c.beta) return {*c.alpha, *c.beta};
  if (c.alpha || c.beta) throw_config("MissingKey", "set both alpha and beta, or n_plus");
  if (c.n_plus) {
    const auto m = lz_family_member(*c.n_plus);
    return {m.alpha, m.beta};
  }
  throw_config("MissingKey", "protocol needs alpha and beta, or n_plus");
}

}  // namespace hgeo
