#include "hgeo/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hgeo/error.hpp"

namespace hgeo {

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string artifact_stem(const std::string& command, const std::string& model, std::string_view content) {
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a(content)));
  return command + "-" + model + "-" + hex;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, r.ptr};
}

std::string CsvTable::meta_value(const std::string& key) const {
  for (const auto& [k, v] : meta)
    if (k == key) return v;
  return {};
}

std::string to_csv(const CsvTable& t) {
  std::string out;
  for (const auto& [k, v] : t.meta) out += "# " + k + "=" + v + "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_number(row[i]);
    }
    out += '\n';
  }
  return out;
}

namespace {

double parse_double(const std::string& s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw_config("ParseError", "not a number: '" + s + "'");
  return v;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

}  // namespace

CsvTable parse_csv(std::string_view text) {
  CsvTable t;
  std::istringstream in{std::string(text)};
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto body = trim(line.substr(1));
      const auto eq = body.find('=');
      if (eq != std::string::npos) t.meta.emplace_back(trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
      continue;
    }
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(trim(cell));
    if (!header) {
      t.columns = cells;
      header = true;
      continue;
    }
    if (cells.size() != t.columns.size()) throw_config("ParseError", "row width differs from the header");
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_double(c));
    t.rows.push_back(std::move(row));
  }
  if (!header) throw_config("ParseError", "csv has no header line");
  return t;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_config("OutputNotWritable", "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw_config("OutputNotWritable", "failed writing " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_config("FileNotFound", "cannot open " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

CsvTable pulse_table(const PulseProfile& p) {
  CsvTable t;
  t.add_meta("model", p.model.name);
  for (const auto& [k, v] : p.model.fixed) t.add_meta("const." + k, v);
  t.add_meta("kind", to_string(p.kind));
  t.add_meta("label", p.label);
  t.add_meta("alpha", p.alpha);
  t.add_meta("beta", p.beta);
  t.add_meta("n_plus", p.n_plus);
  t.add_meta("delta", p.delta);
  t.add_meta("lambda0", p.lambda0);
  t.add_meta("lambda1", p.lambda1);
  t.add_meta("state_index", std::to_string(p.state_index));
  t.columns = {"tau", "lambda"};
  for (std::size_t i = 0; i < p.tau.size(); ++i) t.rows.push_back({p.tau[i], p.lambda[i]});
  return t;
}

nlohmann::json pulse_json(const PulseProfile& p) {
  nlohmann::json j;
  j["model"] = p.model.name;
  nlohmann::json c = nlohmann::json::object();
  for (const auto& [k, v] : p.model.fixed) c[k] = v;
  j["constants"] = c;
  j["kind"] = to_string(p.kind);
  j["label"] = p.label;
  // json has no NaN; undefined quantities become null
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  j["alpha"] = num(p.alpha);
  j["beta"] = num(p.beta);
  j["n_plus"] = num(p.n_plus);
  j["delta"] = num(p.delta);
  j["lambda0"] = p.lambda0;
  j["lambda1"] = p.lambda1;
  j["state_index"] = p.state_index;
  j["tau"] = p.tau;
  j["lambda"] = p.lambda;
  return j;
}

PulseProfile pulse_from_table(const CsvTable& t, const ParametricModel& model) {
  if (t.columns.size() != 2 || t.columns[0] != "tau" || t.columns[1] != "lambda")
    throw_config("ParseError", "pulse table needs tau,lambda columns");
  std::vector<double> lam;
  lam.reserve(t.rows.size());
  for (const auto& r : t.rows) lam.push_back(r[1]);
  const std::string idx = t.meta_value("state_index");
  PulseProfile p = sampled_pulse(model, std::move(lam), idx.empty() ? 0 : std::stoi(idx), t.meta_value("label"));
  auto restore = [&](const char* key, double& field) {
    const std::string v = t.meta_value(key);
    if (!v.empty()) field = parse_double(v);
  };
  restore("alpha", p.alpha);
  restore("beta", p.beta);
  restore("n_plus", p.n_plus);
  restore("delta", p.delta);
  return p;
}

std::filesystem::path write_artifact(const std::filesystem::path& dir, const std::string& stem, const CsvTable& csv,
                                     const nlohmann::json& json, const std::string& format) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw_config("OutputNotWritable", "cannot create " + dir.string());
  if (format == "json") {
    const auto path = dir / (stem + ".json");
    write_text(path, json.dump(2) + "\n");
    return path;
  }
  if (format != "csv") throw_config("InvalidValue", "format must be csv or json");
  const auto path = dir / (stem + ".csv");
  write_text(path, to_csv(csv));
  return path;
}

}  // namespace hgeo
