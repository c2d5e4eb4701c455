#include "hsb/run_config.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace hsb {

namespace {

using nlohmann::json;

Matrix matrix_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw ConfigError(std::string(what) + ": expected a matrix");
  const size_t n = j.size();
  Matrix m(n, n);
  for (size_t r = 0; r < n; ++r) {
    if (!j[r].is_array() || j[r].size() != n)
      throw ConfigError(std::string(what) + ": matrix must be square");
    for (size_t c = 0; c < n; ++c) {
      const json& e = j[r][c];
      if (e.is_number()) {
        m(r, c) = Complex(e.get<double>(), 0.0);
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
      } else {
        throw ConfigError(std::string(what) + ": entries must be numbers or [re, im] pairs");
      }
    }
  }
  return m;
}

GridSpec grid_from_json(const json& j) {
  GridSpec g;
  if (!j.is_object() || !j.contains("min") || !j.contains("max") || !j.contains("count"))
    throw ConfigError("grid: each entry needs min, max, count");
  g.min = j["min"].get<double>();
  g.max = j["max"].get<double>();
  g.count = j["count"].get<int>();
  if (g.count < 1) throw ConfigError("grid: count must be >= 1");
  if (!(g.min <= g.max)) throw ConfigError("grid: min must be <= max");
  return g;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be an object");

  RunConfig cfg;
  if (!j.contains("model") || !j["model"].is_object() || !j["model"].contains("id"))
    throw ConfigError("config needs model.id");
  const json& model = j["model"];
  cfg.model_id = model["id"].get<std::string>();
  if (cfg.model_id == "spin_half") {
    cfg.muB = model.value("muB", 1.0);
    if (cfg.muB == 0.0) throw ConfigError("model.muB must be nonzero");
  } else if (cfg.model_id == "linear") {
    if (!model.contains("h0") || !model.contains("couplings"))
      throw ConfigError("linear model needs h0 and couplings");
    cfg.h0 = matrix_from_json(model["h0"], "model.h0");
    for (const json& c : model["couplings"])
      cfg.couplings.push_back(matrix_from_json(c, "model.couplings"));
    if (cfg.couplings.empty()) throw ConfigError("linear model needs at least one coupling");
    for (const Matrix& c : cfg.couplings)
      if (c.rows() != cfg.h0.rows())
        throw ConfigError("model.couplings: dimension mismatch with h0");
  } else if (cfg.model_id != "pt_dimer") {
    throw ConfigError("unknown model id '" + cfg.model_id +
                      "' (expected linear, spin_half or pt_dimer)");
  }

  if (j.contains("base")) {
    cfg.base.t = j["base"].value("t", 0.0);
    if (j["base"].contains("q")) cfg.base.q = j["base"]["q"].get<std::vector<double>>();
  }
  if (j.contains("directions")) cfg.directions = j["directions"].get<std::vector<int>>();
  if (j.contains("grid"))
    for (const json& g : j["grid"]) cfg.grids.push_back(grid_from_json(g));
  if (j.contains("states")) cfg.states = j["states"].get<std::vector<int>>();
  cfg.t = j.value("t", 0.0);
  if (j.contains("t_samples")) cfg.t_samples = j["t_samples"].get<std::vector<double>>();
  if (j.contains("chern")) {
    cfg.chern_n_theta = j["chern"].value("n_theta", 40);
    cfg.chern_n_phi = j["chern"].value("n_phi", 80);
    if (cfg.chern_n_theta < 1 || cfg.chern_n_phi < 1)
      throw ConfigError("chern grid counts must be >= 1");
  }

  if (j.contains("tolerances")) {
    const json& tol = j["tolerances"];
    cfg.tolerances.degeneracy_tol = tol.value("degeneracy_tol", cfg.tolerances.degeneracy_tol);
    cfg.tolerances.ep_condition_threshold =
        tol.value("ep_condition_threshold", cfg.tolerances.ep_condition_threshold);
    cfg.tolerances.fd_step = tol.value("fd_step", cfg.tolerances.fd_step);
    cfg.tolerances.integrator_steps =
        tol.value("integrator_steps", cfg.tolerances.integrator_steps);
    if (!(cfg.tolerances.degeneracy_tol > 0) || !(cfg.tolerances.ep_condition_threshold > 0) ||
        !(cfg.tolerances.fd_step > 0) || cfg.tolerances.integrator_steps < 1)
      throw ConfigError("tolerances must be positive (integrator_steps >= 1)");
  }

  if (j.contains("transport")) {
    const json& tr = j["transport"];
    if (tr.contains("initial")) {
      const json& init = tr["initial"];
      if (init.contains("eigenstate")) cfg.transport.eigenstate = init["eigenstate"].get<int>();
      if (init.contains("amplitudes"))
        for (const json& a : init["amplitudes"]) {
          if (!a.is_array() || a.size() != 2)
            throw ConfigError("transport.initial.amplitudes entries must be [re, im]");
          cfg.transport.amplitudes.emplace_back(a[0].get<double>(), a[1].get<double>());
        }
    }
    if (tr.contains("path")) {
      for (const json& seg : tr["path"]) {
        PathSegment s;
        const std::string kind = seg.value("kind", "");
        if (kind == "time") {
          s.kind = PathSegment::Kind::Time;
        } else if (kind == "parameter") {
          s.kind = PathSegment::Kind::Parameter;
          s.direction = seg.value("index", 0);
        } else {
          throw ConfigError("transport.path: kind must be 'time' or 'parameter'");
        }
        if (!seg.contains("delta")) throw ConfigError("transport.path: segment needs delta");
        s.delta = seg["delta"].get<double>();
        cfg.transport.segments.push_back(s);
      }
    }
    cfg.transport.steps_per_segment = tr.value("steps_per_segment", 1000);
    if (cfg.transport.steps_per_segment < 1)
      throw ConfigError("transport.steps_per_segment must be >= 1");
  }

  cfg.parallelism = j.value("parallelism", 1);
  if (cfg.parallelism < 1) throw ConfigError("parallelism must be >= 1");

  if (j.contains("output")) {
    cfg.output_path = j["output"].value("path", "");
    const std::string fmt = j["output"].value("format", "csv");
    if (fmt == "csv")
      cfg.format = OutputFormat::Csv;
    else if (fmt == "json")
      cfg.format = OutputFormat::Json;
    else
      throw ConfigError("output.format must be 'csv' or 'json'");
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

HamiltonianFamily family_from_config(const RunConfig& config) {
  if (config.model_id == "pt_dimer") return make_pt_dimer_family();
  if (config.model_id == "spin_half") return make_spin_half_family(config.muB);
  return make_linear_family(config.h0, config.couplings);
}

SolveOptions solve_options_from_config(const RunConfig& config) {
  SolveOptions opts;
  opts.degeneracy_tol_rel = config.tolerances.degeneracy_tol;
  opts.ep_condition_threshold = config.tolerances.ep_condition_threshold;
  return opts;
}

void write_records_csv(std::ostream& os, int n_params,
                       const std::vector<OutputRecord>& records,
                       const std::string& timestamp) {
  os << "# generated " << timestamp << "\n";
  os << "t";
  for (int i = 1; i <= n_params; ++i) os << ",q" << i;
  os << ",observable,value_re,value_im,flag\n";
  for (const OutputRecord& r : records) {
    os << format_double(r.t);
    for (int i = 0; i < n_params; ++i)
      os << "," << format_double(i < static_cast<int>(r.q.size()) ? r.q[i] : 0.0);
    os << "," << r.observable << "," << format_double(r.value_re) << ","
       << format_double(r.value_im) << "," << r.flag << "\n";
  }
}

void write_records_json(std::ostream& os, const std::string& subcommand, int n_params,
                        const std::vector<OutputRecord>& records,
                        const std::string& timestamp) {
  nlohmann::ordered_json doc;
  doc["generated_at"] = timestamp;
  doc["subcommand"] = subcommand;
  doc["n_params"] = n_params;
  doc["records"] = nlohmann::ordered_json::array();
  for (const OutputRecord& r : records) {
    nlohmann::ordered_json rec;
    rec["t"] = r.t;
    rec["q"] = r.q;
    rec["observable"] = r.observable;
    rec["value_re"] = r.value_re;
    rec["value_im"] = r.value_im;
    rec["flag"] = r.flag;
    doc["records"].push_back(rec);
  }
  os << doc.dump(2) << "\n";
}

std::string current_timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[40];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace hsb
