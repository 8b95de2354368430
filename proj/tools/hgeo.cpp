// hgeo: command-line front end. Each subcommand fronts one library module
// and writes one artifact named <command>-<model>-<hash>.<csv|json>.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hgeo/adiabatic.hpp"
#include "hgeo/basis.hpp"
#include "hgeo/config.hpp"
#include "hgeo/dynamics.hpp"
#include "hgeo/error.hpp"
#include "hgeo/hypergeometry.hpp"
#include "hgeo/io.hpp"
#include "hgeo/noise.hpp"
#include "hgeo/runtime.hpp"
#include "hgeo/signal.hpp"
#include "hgeo/synthesis.hpp"

using namespace hgeo;
using nlohmann::json;

namespace {

// Flags shared by every subcommand. Unset flags leave the config file value.
struct Flags {
  std::string config_path;
  std::optional<std::string> model;
  std::vector<std::string> constants;  // key=value
  std::optional<double> x, z0, lambda0, lambda1, alpha, beta, n_plus, t2, sigma_x, sigma_z, f_c, f_min, f_max;
  std::optional<int> state, samples, tf_points, mc_samples, order, threads;
  std::optional<std::string> tf, alpha_grid, beta_grid, n_plus_grid, f_c_grid, out, format;
  std::optional<double> tf_min, tf_max;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config_path, "INI file with [model] [protocol] [grids] [noise] [filter] [output]");
  app->add_option("--model", f.model, "built-in model name");
  app->add_option("--const", f.constants, "model constant key=value (repeatable)");
  app->add_option("--x", f.x, "tunnelling x (two-level models)");
  app->add_option("--state", f.state, "driven level index");
  app->add_option("--z0", f.z0, "symmetric boundaries [-z0, z0]");
  app->add_option("--lambda0", f.lambda0, "initial control value");
  app->add_option("--lambda1", f.lambda1, "final control value");
  app->add_option("--alpha", f.alpha);
  app->add_option("--beta", f.beta);
  app->add_option("--n-plus", f.n_plus, "Landau-Zener family member (alpha, beta chosen canonically)");
  app->add_option("--samples", f.samples, "pulse samples on [0, 1]");
  app->add_option("--tf", f.tf, "t_f grid, lo:hi:count or a,b,c");
  app->add_option("--tf-min", f.tf_min);
  app->add_option("--tf-max", f.tf_max);
  app->add_option("--tf-points", f.tf_points);
  app->add_option("--alpha-grid", f.alpha_grid);
  app->add_option("--beta-grid", f.beta_grid);
  app->add_option("--n-plus-grid", f.n_plus_grid);
  app->add_option("--fc-grid", f.f_c_grid);
  app->add_option("--t2", f.t2, "dephasing time (enables Lindblad evolution)");
  app->add_option("--sigma-x", f.sigma_x);
  app->add_option("--sigma-z", f.sigma_z);
  app->add_option("--mc-samples", f.mc_samples);
  app->add_option("--seed", f.seed);
  app->add_option("--f-min", f.f_min);
  app->add_option("--f-max", f.f_max);
  app->add_option("--order", f.order, "Butterworth order");
  app->add_option("--fc", f.f_c, "Butterworth cutoff");
  app->add_option("--out", f.out, "output directory");
  app->add_option("--format", f.format, "csv or json");
  app->add_option("--threads", f.threads, "worker threads (0: HGEO_NUM_THREADS / OpenMP default)");
}

RunConfig resolve(const Flags& f) {
  RunConfig c = f.config_path.empty() ? RunConfig{} : load_config(f.config_path);
  if (f.model) c.model = *f.model;
  for (const auto& kv : f.constants) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw_config("InvalidValue", "--const expects key=value, got '" + kv + "'");
    try {
      c.constants[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    } catch (const std::exception&) {
      throw_config("InvalidValue", "--const value is not a number: '" + kv + "'");
    }
  }
  if (f.x) c.constants["x"] = *f.x;
  if (f.state) c.state_index = *f.state;
  if (f.z0) c.z0 = *f.z0;
  if (f.lambda0) c.lambda0 = f.lambda0;
  if (f.lambda1) c.lambda1 = f.lambda1;
  if (f.n_plus) {
    c.n_plus = f.n_plus;
    if (!f.alpha && !f.beta) c.alpha = c.beta = std::nullopt;
  }
  if (f.alpha) c.alpha = f.alpha;
  if (f.beta) c.beta = f.beta;
  if (f.samples) c.samples = *f.samples;
  if (f.tf) c.t_f = parse_grid(*f.tf);
  if (f.tf && c.t_f.empty()) throw_config("EmptyGrid", "t_f grid is empty");
  if (f.tf_min) c.tf_min = *f.tf_min;
  if (f.tf_max) c.tf_max = *f.tf_max;
  if (f.tf_points) c.tf_points = *f.tf_points;
  if (f.alpha_grid) c.alpha_grid = parse_grid(*f.alpha_grid);
  if (f.beta_grid) c.beta_grid = parse_grid(*f.beta_grid);
  if (f.n_plus_grid) c.n_plus_grid = parse_grid(*f.n_plus_grid);
  if (f.f_c_grid) c.f_c_grid = parse_grid(*f.f_c_grid);
  if (f.t2) c.t2 = f.t2;
  if (f.sigma_x) c.sigma_x = *f.sigma_x;
  if (f.sigma_z) c.sigma_z = *f.sigma_z;
  if (f.mc_samples) c.mc_samples = *f.mc_samples;
  if (f.seed) c.seed = *f.seed;
  if (f.f_min) c.f_min = *f.f_min;
  if (f.f_max) c.f_max = *f.f_max;
  if (f.order) c.filter_order = *f.order;
  if (f.f_c) c.f_c = *f.f_c;
  if (f.out) c.out_dir = *f.out;
  if (f.format) c.format = *f.format;
  if (f.threads) c.threads = *f.threads;
  validate(c);
  if (c.threads > 0) setenv("HGEO_NUM_THREADS", std::to_string(c.threads).c_str(), 1);
  return c;
}

PulseProfile make_pulse(const RunConfig& c) {
  const ParametricModel model = config_model(c);
  const auto [l0, l1] = config_boundaries(c);
  if (c.n_plus && !std::isfinite(*c.n_plus) && !c.alpha) return pi_pulse(model, c.state_index, l0, l1, c.samples);
  const auto [a, b] = config_protocol(c);
  PulseProfile p = synthesize_pulse(model, a, b, c.state_index, l0, l1, c.samples);
  if (c.n_plus && model.name == "landau_zener" && !c.alpha) p.label = lz_family_member(*c.n_plus).label;
  return p;
}

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// Writes the artifact and prints the one-line summary.
int finish(const std::string& command, const RunConfig& c, const std::string& extra, const CsvTable& csv,
           const json& doc, const std::string& summary) {
  const std::string stem = artifact_stem(command, c.model, command + "\n" + canonical_text(c) + extra);
  const auto path = write_artifact(c.out_dir, stem, csv, doc, c.format);
  std::cout << command << ": " << summary << " -> " << path.string() << "\n";
  return 0;
}

json table_json(const CsvTable& t) {
  json j;
  json meta = json::object();
  for (const auto& [k, v] : t.meta) meta[k] = v;
  j["meta"] = meta;
  j["columns"] = t.columns;
  json rows = json::array();
  for (const auto& r : t.rows) {
    json row = json::array();
    for (double v : r) row.push_back(num(v));
    rows.push_back(row);
  }
  j["rows"] = rows;
  return j;
}

int cmd_synthesize(const RunConfig& c) {
  const PulseProfile p = make_pulse(c);
  const CsvTable t = pulse_table(p);
  return finish("synthesize", c, "", t, pulse_json(p),
                p.label + " alpha=" + format_number(p.alpha) + " beta=" + format_number(p.beta) +
                    " delta=" + format_number(p.delta));
}

int cmd_evolve(const RunConfig& c) {
  const PulseProfile p = make_pulse(c);
  const auto grid = config_tf_grid(c);
  const SweepResult s = sweep_tf(p, grid, c.t2, Exec::Parallel);
  CsvTable t;
  t.add_meta("model", c.model);
  t.add_meta("label", p.label);
  t.add_meta("alpha", p.alpha);
  t.add_meta("beta", p.beta);
  t.add_meta("t2", c.t2 ? format_number(*c.t2) : "none");
  t.add_meta("t_opt", s.t_opt);
  t.add_meta("min_infidelity", s.min_infidelity);
  if (p.kind == PulseKind::Geodesic) {
    const AdiabaticReport rep = adiabatic_report(p);
    t.add_meta("a_tilde_0", rep.a_tilde_0);
    t.add_meta("t_adiab", rep.t_adiab);
    std::string res;
    for (double r : rep.pairs.front().resonances) res += (res.empty() ? "" : ";") + format_number(r);
    t.add_meta("resonances", res);
  }
  t.columns = {"t_f", "infidelity"};
  for (std::size_t i = 0; i < grid.size(); ++i) t.rows.push_back({grid[i], s.infidelity[i]});
  return finish("evolve", c, "", t, table_json(t),
                p.label + " min_infidelity=" + format_number(s.min_infidelity) + " t_opt=" + format_number(s.t_opt));
}

int cmd_sweep(const RunConfig& c) {
  const ParametricModel model = config_model(c);
  const auto [l0, l1] = config_boundaries(c);
  const auto grid = config_tf_grid(c);
  const auto ag = c.alpha_grid.empty() ? linspace(-5, 5, 11) : c.alpha_grid;
  const auto bg = c.beta_grid.empty() ? linspace(-5, 5, 11) : c.beta_grid;
  std::vector<std::pair<double, double>> ab;
  for (double a : ag)
    for (double b : bg) ab.emplace_back(a, b);
  std::vector<MapEntry> rows(ab.size());
  std::vector<std::string> failures(ab.size());
  for_each_index(Exec::Parallel, ab.size(), [&](std::size_t i) {
    const auto [a, b] = ab[i];
    try {
      const PulseProfile p = synthesize_pulse(model, a, b, c.state_index, l0, l1, c.samples);
      const SweepResult s = sweep_tf(p, grid, c.t2, Exec::Serial);
      rows[i] = {a, b, s.min_infidelity, s.t_opt};
    } catch (const Error& e) {
      // singular metrics leave a hole in the map instead of aborting it
      rows[i] = {a, b, std::nan(""), std::nan("")};
      failures[i] = e.name();
    }
  });
  CsvTable t;
  t.add_meta("model", c.model);
  t.add_meta("state_index", std::to_string(c.state_index));
  t.add_meta("lambda0", l0);
  t.add_meta("lambda1", l1);
  t.add_meta("t2", c.t2 ? format_number(*c.t2) : "none");
  t.add_meta("tf_points", std::to_string(grid.size()));
  int failed = 0;
  for (const auto& f : failures) failed += !f.empty();
  t.add_meta("failed_pairs", std::to_string(failed));
  t.columns = {"alpha", "beta", "min_infidelity", "t_opt"};
  for (const auto& r : rows) t.rows.push_back({r.alpha, r.beta, r.min_infidelity, r.t_opt});
  return finish("sweep", c, "", t, table_json(t),
                std::to_string(ab.size()) + " pairs, " + std::to_string(failed) + " singular");
}

int cmd_noise(const RunConfig& c, double t_final, bool robustness) {
  const PulseProfile p = make_pulse(c);
  NoiseSpec spec;
  spec.sigma_x = c.sigma_x;
  spec.sigma_z = c.sigma_z;
  spec.samples = c.mc_samples;
  spec.seed = c.seed;
  const McResult mc = quasistatic_mc(p, t_final, spec, c.t2, Exec::Parallel);
  json doc;
  doc["model"] = c.model;
  doc["label"] = p.label;
  doc["t_f"] = t_final;
  doc["seed"] = mc.seed;
  doc["samples"] = mc.samples;
  doc["mean"] = mc.mean;
  doc["stderr"] = mc.stderr_;
  doc["sigma_x"] = c.sigma_x;
  doc["sigma_z"] = c.sigma_z;
  CsvTable t;
  t.add_meta("model", c.model);
  t.add_meta("label", p.label);
  t.add_meta("t_f", t_final);
  t.add_meta("seed", std::to_string(mc.seed));
  t.add_meta("mean", mc.mean);
  t.add_meta("stderr", mc.stderr_);
  t.columns = {"sample", "infidelity"};
  for (std::size_t i = 0; i < mc.infidelity.size(); ++i)
    t.rows.push_back({static_cast<double>(i), mc.infidelity[i]});
  if (robustness && p.kind == PulseKind::Geodesic) {
    // C along the pulse, closed form for two levels, finite differences otherwise
    json rob = json::array();
    for (std::size_t i = 0; i < p.tau.size(); i += std::max<std::size_t>(1, p.tau.size() / 64)) {
      const double lam = p.lambda[i];
      json e;
      e["tau"] = p.tau[i];
      e["lambda"] = lam;
      if (p.model.dim == 2) {
        const Robustness r = robustness_constraint(p.model, p.alpha, p.beta, lam);
        e["h"] = num(r.h);
        e["g"] = num(r.g);
        e["c"] = num(r.c);
      } else {
        e["c_fd"] = num(robustness_fd(p.model, p.alpha, p.beta, lam, p.state_index));
      }
      rob.push_back(e);
    }
    doc["robustness"] = rob;
  }
  return finish("noise", c, "t=" + format_number(t_final) + (robustness ? " rob" : ""), t, doc,
                p.label + " mean=" + format_number(mc.mean) + " stderr=" + format_number(mc.stderr_));
}

int cmd_filterfn(const RunConfig& c, double t_final, int steps, double amp_x, double amp_z) {
  const PulseProfile p = make_pulse(c);
  const auto freq = log_frequency_grid(c.f_min, c.f_max);
  const FilterReport rep = filter_functions(p, t_final, freq, steps, Exec::Parallel);
  const Susceptibility s = susceptibility(rep, Eigen::Vector3d(amp_x, 0.0, amp_z), c.f_min, c.f_max);
  CsvTable t;
  t.add_meta("model", c.model);
  t.add_meta("label", p.label);
  t.add_meta("t_f", t_final);
  t.add_meta("chi_x", s.axis(0));
  t.add_meta("chi_y", s.axis(1));
  t.add_meta("chi_z", s.axis(2));
  t.columns = {"f", "F_x", "F_y", "F_z"};
  for (std::size_t i = 0; i < rep.freq.size(); ++i)
    t.rows.push_back({rep.freq[i], rep.f[i](0), rep.f[i](1), rep.f[i](2)});
  return finish("filterfn", c,
                "t=" + format_number(t_final) + " steps=" + std::to_string(steps) + " ax=" + format_number(amp_x) +
                    " az=" + format_number(amp_z),
                t, table_json(t), p.label + " chi_total=" + format_number(s.total));
}

int cmd_basis(const RunConfig& c, double threshold, const std::string& target_file, bool split) {
  const double x = c.constants.count("x") ? c.constants.at("x") : 1.0;
  const auto np = c.n_plus_grid.empty() ? linspace(-5, 5, 21) : c.n_plus_grid;
  const BasisSet raw = build_basis(np, x, c.z0, kBasisGrid, Exec::Parallel);
  const BasisSet b = prune(raw, threshold);
  std::vector<double> target(b.tau.size());
  std::string target_name = "cubic";
  if (target_file.empty()) {
    for (std::size_t i = 0; i < b.tau.size(); ++i) {
      const double s = b.tau[i];
      target[i] = -10 + 100 * s - 240 * s * s + 160 * s * s * s;
    }
  } else {
    const CsvTable in = parse_csv(read_text(target_file));
    const ParametricModel model = config_model(c);
    target = sample_on_grid(pulse_from_table(in, model), b.tau);
    target_name = target_file;
  }
  const Expansion e = split ? expand_split(b, target) : expand(b, target);
  double l1 = 0.0;
  {
    std::vector<double> a(target.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(target[i]);
    l1 = quad::trapezoid(b.tau, a);
  }
  CsvTable t;
  t.add_meta("members", std::to_string(b.size()));
  t.add_meta("kept", std::to_string(b.kept.size()));
  t.add_meta("svd_rank", std::to_string(svd_rank(b.gram, threshold)));
  t.add_meta("condition", b.condition);
  t.add_meta("target", target_name);
  t.add_meta("split", split ? "true" : "false");
  t.add_meta("error", e.error);
  t.add_meta("relative_error", e.error / l1);
  t.columns = {"tau", "target", "reconstruction"};
  for (std::size_t i = 0; i < b.tau.size(); ++i) t.rows.push_back({b.tau[i], target[i], e.reconstruction[i]});
  json doc = table_json(t);
  json kept = json::array();
  for (int k : b.kept) kept.push_back(b.labels[static_cast<std::size_t>(k)]);
  doc["kept_labels"] = kept;
  doc["coefficients"] = std::vector<double>(e.coefficients.data(), e.coefficients.data() + e.coefficients.size());
  if (split)
    doc["coefficients2"] =
        std::vector<double>(e.coefficients2.data(), e.coefficients2.data() + e.coefficients2.size());
  return finish("basis", c,
                "thr=" + format_number(threshold) + " target=" + target_name + (split ? " split" : ""), t, doc,
                std::to_string(b.kept.size()) + "/" + std::to_string(b.size()) +
                    " kept, E/|g|=" + format_number(e.error / l1));
}

int cmd_feasibility(const RunConfig& c, double t_final, bool map) {
  const double x = c.constants.count("x") ? c.constants.at("x") : 1.0;
  const auto np = c.n_plus_grid.empty() ? linspace(-4, 6, 21) : c.n_plus_grid;
  CsvTable t;
  t.add_meta("model", "landau_zener");
  t.add_meta("x", x);
  t.add_meta("z0", c.z0);
  if (map) {
    const auto fc = c.f_c_grid.empty() ? std::vector<double>{c.f_c} : c.f_c_grid;
    const auto grid = config_tf_grid(c);
    const auto rows =
        filtered_fidelity_map(x, c.z0, np, fc, grid, c.t2, c.filter_order, c.samples, Exec::Parallel);
    t.add_meta("t2", c.t2 ? format_number(*c.t2) : "none");
    t.add_meta("order", std::to_string(c.filter_order));
    t.columns = {"n_plus", "f_c", "min_infidelity", "t_opt"};
    for (const auto& r : rows) t.rows.push_back({r.n_plus, r.f_c, r.min_infidelity, r.t_opt});
    return finish("feasibility", c, "map", t, table_json(t), std::to_string(rows.size()) + " map points");
  }
  const auto pulses = lz_pulse_family(np, x, c.z0, c.samples, Exec::Parallel);
  t.add_meta("t_f", t_final);
  t.columns = {"n_plus", "slew_numeric", "slew_analytic", "f_max"};
  std::vector<std::vector<double>> rows(pulses.size());
  for_each_index(Exec::Parallel, pulses.size(), [&](std::size_t i) {
    const SlewRate s = slew_rate(pulses[i], t_final);
    const BandwidthResult bw = bandwidth(pulses[i], t_final);
    rows[i] = {np[i], s.numeric, s.analytic, bw.f_max};
  });
  t.rows = rows;
  return finish("feasibility", c, "t=" + format_number(t_final), t, table_json(t),
                std::to_string(rows.size()) + " pulses");
}

int cmd_geometry(const RunConfig& c, bool mesh) {
  const auto [a, b] = config_protocol(c);
  if (mesh) {
    const auto windows = embedding_windows(b);
    if (windows.empty()) throw_numerics("EmbeddingUndefined", "no theta range admits an embedding");
    // widest window, trimmed slightly off its ends
    auto best = windows.front();
    for (const auto& w : windows)
      if (w.second - w.first > best.second - best.first) best = w;
    const double pad = 1e-3 * (best.second - best.first);
    const auto pts = embedding(a, b, linspace(best.first + pad, best.second - pad, 101));
    CsvTable t;
    t.add_meta("alpha", a);
    t.add_meta("beta", b);
    t.columns = {"theta", "phi", "x", "y", "z"};
    for (const auto& p : pts) t.rows.push_back({p.theta, p.phi, p.x, p.y, p.z});
    return finish("geometry", c, "mesh", t, table_json(t), std::to_string(pts.size()) + " mesh points");
  }
  const GeometryReport g = geometry_report(a, b);
  CsvTable t;
  t.columns = {"alpha", "beta", "length_theta", "length_phi_equator", "volume", "qsl_ratio", "chern_re", "chern_im",
               "euler"};
  t.rows.push_back({g.alpha, g.beta, g.length_theta, g.length_phi_equator, g.volume, g.qsl_ratio, g.chern_like.real(),
                    g.chern_like.imag(), g.euler_characteristic});
  json doc;
  doc["alpha"] = g.alpha;
  doc["beta"] = g.beta;
  doc["length_theta"] = num(g.length_theta);
  doc["length_phi_equator"] = num(g.length_phi_equator);
  doc["volume"] = num(g.volume);
  doc["qsl_ratio"] = num(g.qsl_ratio);
  doc["chern_like"] = {num(g.chern_like.real()), num(g.chern_like.imag())};
  doc["euler_characteristic"] = num(g.euler_characteristic);
  return finish("geometry", c, "", t, doc, "volume=" + format_number(g.volume));
}

int cmd_bench(const RunConfig& c, int warmup, int reps, const std::string& scans) {
  // validate before spending time on anything
  if (warmup < 1) throw_config("InvalidValue", "benchmark warmup must be at least 1");
  if (reps < 5) throw_config("InvalidValue", "benchmark repetitions must be at least 5");
  std::vector<RuntimePoint> all;
  CsvTable t;
  if (scans.find("ab") != std::string::npos) {
    const auto pts = bench_alpha_beta({{0, 4}, {1, 3}, {2, 2}, {3, 1}, {4, 0}, {0, 2}, {2, 0}, {1, 1}}, warmup, reps,
                                      c.samples);
    all.insert(all.end(), pts.begin(), pts.end());
  }
  if (scans.find("anti") != std::string::npos) {
    const auto pts = bench_anticrossings({1, 2, 3, 4, 6, 8}, warmup, reps, 0.2, c.samples);
    const LinearFit fit = runtime_fit(pts);
    t.add_meta("anticrossing_slope", fit.slope);
    t.add_meta("anticrossing_intercept", fit.intercept);
    t.add_meta("anticrossing_r2", fit.r_squared);
    std::cout << "bench: run time = " << format_number(fit.intercept) << " + " << format_number(fit.slope)
              << " * anticrossings (R^2 = " << format_number(fit.r_squared) << ")\n";
    all.insert(all.end(), pts.begin(), pts.end());
  }
  if (scans.find("dim") != std::string::npos) {
    const auto pts = bench_dimension({2, 3, 4, 6, 8}, {2, 4, 8}, warmup, reps, c.samples);
    all.insert(all.end(), pts.begin(), pts.end());
  }
  t.add_meta("warmup", std::to_string(warmup));
  t.add_meta("repetitions", std::to_string(reps));
  t.columns = {"scan", "x", "alpha", "beta", "k_max", "median_s", "q1_s", "q3_s"};
  const std::map<std::string, double> scan_id = {{"alpha_beta", 0}, {"anticrossings", 1}, {"dimension", 2}};
  for (const auto& p : all) {
    t.rows.push_back({scan_id.at(p.scan), p.x, p.alpha, p.beta, static_cast<double>(p.k_max), p.stats.median,
                      p.stats.q1, p.stats.q3});
    std::cout << "  " << p.scan << " x=" << format_number(p.x) << " (" << format_number(p.alpha) << ","
              << format_number(p.beta) << ") k=" << p.k_max << ": " << p.stats.median * 1e3 << " ms +- "
              << p.stats.iqr() * 1e3 << " (IQR)\n";
  }
  t.add_meta("scan_ids", "0=alpha_beta,1=anticrossings,2=dimension");
  // timings differ run to run; the name hashes the configuration only
  return finish("bench", c, scans + " w=" + std::to_string(warmup) + " r=" + std::to_string(reps), t, table_json(t),
                std::to_string(all.size()) + " timings");
}

int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Config:
      return 2;
    case ErrorCategory::Model:
      return 3;
    case ErrorCategory::Numerics:
      return 4;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hypergeometric pulse design toolkit"};
  app.require_subcommand(1);
  Flags flags;
  double t_final = 5.0;
  int steps = 4096;
  double amp_x = 1.0, amp_z = 1.0;
  double threshold = 1e-10;
  std::string target;
  bool split = false, map = false, mesh = false, robustness = false;
  int warmup = 1, reps = 5;
  std::string scans = "ab,anti,dim";

  auto* syn = app.add_subcommand("synthesize", "hyper-geodesic pulse -> pulse table");
  auto* evo = app.add_subcommand("evolve", "infidelity of one pulse over the t_f grid");
  auto* swp = app.add_subcommand("sweep", "minimum infidelity over an (alpha, beta) grid");
  auto* noi = app.add_subcommand("noise", "quasistatic Monte Carlo at one t_f");
  auto* ffn = app.add_subcommand("filterfn", "filter functions F_x, F_y, F_z");
  auto* bas = app.add_subcommand("basis", "Landau-Zener basis, pruning and expansion of a target");
  auto* fea = app.add_subcommand("feasibility", "slew rate and bandwidth, or the filtered fidelity map");
  auto* geo = app.add_subcommand("geometry", "hyper-Bloch sphere lengths, volume and invariants");
  auto* ben = app.add_subcommand("bench", "synthesis run-time scans");
  for (auto* s : {syn, evo, swp, noi, ffn, bas, fea, geo, ben}) add_common(s, flags);
  for (auto* s : {noi, ffn, fea}) s->add_option("--time", t_final, "pulse duration t_f");
  noi->add_flag("--robustness", robustness, "add the fluctuation constraint along the pulse");
  ffn->add_option("--steps", steps, "propagator samples");
  ffn->add_option("--amp-x", amp_x, "1/f amplitude on the x axis");
  ffn->add_option("--amp-z", amp_z, "1/f amplitude on the z axis");
  bas->add_option("--threshold", threshold, "pruning threshold on |R_ii|");
  bas->add_option("--target", target, "pulse table to expand (default: cubic test polynomial)");
  bas->add_flag("--split", split, "separate coefficients for the two halves");
  fea->add_flag("--map", map, "filtered fidelity map over n_plus and f_c");
  geo->add_flag("--mesh", mesh, "embedding surface instead of the invariants");
  ben->add_option("--warmup", warmup, "untimed runs per point (>= 1)");
  ben->add_option("--repetitions", reps, "timed runs per point (>= 5)");
  ben->add_option("--scans", scans, "comma list of ab, anti, dim");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    RunConfig c = resolve(flags);
    if (syn->parsed()) return cmd_synthesize(c);
    if (evo->parsed()) return cmd_evolve(c);
    if (swp->parsed()) return cmd_sweep(c);
    if (noi->parsed()) return cmd_noise(c, t_final, robustness);
    if (ffn->parsed()) return cmd_filterfn(c, t_final, steps, amp_x, amp_z);
    if (bas->parsed()) return cmd_basis(c, threshold, target, split);
    if (fea->parsed()) return cmd_feasibility(c, t_final, map);
    if (geo->parsed()) {
      if (!c.alpha && !c.beta && !c.n_plus) c.alpha = c.beta = 2.0;
      c.model = "qubit_sphere";
      return cmd_geometry(c, mesh);
    }
    if (ben->parsed()) return cmd_bench(c, warmup, reps, scans);
  } catch (const Error& e) {
    std::string msg = e.what();
    if (msg.rfind(e.name() + ": ", 0) == 0) msg.erase(0, e.name().size() + 2);
    std::cerr << "error category=" << to_string(e.category()) << " name=" << e.name() << ": " << msg << "\n";
    return exit_code(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error category=InternalError: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
