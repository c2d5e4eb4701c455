#include "hsb/runner.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <thread>

#include "hsb/curvature.hpp"
#include "hsb/generator.hpp"
#include "hsb/metric.hpp"
#include "hsb/observables.hpp"

namespace hsb {

namespace {

const Complex kI(0.0, 1.0);
const double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kChiFlagThreshold = 1e6;

enum class PointStatus { Ok, Ep, Err };

struct PointResult {
  PointStatus status = PointStatus::Ok;
  std::vector<OutputRecord> records;
};

double grid_value(const GridSpec& g, int k) {
  if (g.count == 1) return g.min;
  return g.min + k * (g.max - g.min) / (g.count - 1);
}

ParameterPoint base_point(const RunConfig& config, const HamiltonianFamily& family) {
  ParameterPoint p = config.base;
  if (p.q.empty()) p.q.assign(family.n_params, 0.0);
  if (static_cast<int>(p.q.size()) != family.n_params)
    throw ConfigError("base.q length does not match the model's parameter count");
  return p;
}

std::vector<int> states_list(const RunConfig& config, const HamiltonianFamily& family) {
  std::vector<int> states = config.states;
  if (states.empty())
    for (int n = 0; n < family.dim; ++n) states.push_back(n);
  for (int n : states)
    if (n < 0 || n >= family.dim) throw ConfigError("states: index out of range");
  return states;
}

int direction_at(const RunConfig& config, size_t slot, const HamiltonianFamily& family) {
  int dir = static_cast<int>(slot);
  if (slot < config.directions.size()) dir = config.directions[slot];
  if (dir < 0 || dir >= family.n_params)
    throw ConfigError("directions: index out of range for this model");
  return dir;
}

OutputRecord record_at(const ParameterPoint& p, std::string observable, Complex value,
                       std::string flag = "") {
  OutputRecord r;
  r.t = p.t;
  r.q = p.q;
  r.observable = std::move(observable);
  r.value_re = value.real();
  r.value_im = value.imag();
  r.flag = std::move(flag);
  return r;
}

/// Index-ordered worker pool; results land by index, so output order is
/// independent of the execution order.
template <class Fn>
std::vector<PointResult> parallel_points(int count, int threads, Fn&& fn) {
  std::vector<PointResult> results(count);
  auto work = [&](int k) {
    try {
      results[k] = fn(k);
    } catch (const NonDiagonalizable&) {
      results[k].status = PointStatus::Ep;
    } catch (const EPOnPath&) {
      results[k].status = PointStatus::Ep;
    } catch (const std::exception&) {
      results[k].status = PointStatus::Err;
    }
  };
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int k = 0; k < count; ++k) work(k);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w)
      pool.emplace_back([&] {
        for (int k = next.fetch_add(1); k < count; k = next.fetch_add(1)) work(k);
      });
    for (std::thread& th : pool) th.join();
  }
  return results;
}

int collect(RunResult& out, std::vector<PointResult>&& points,
            const std::vector<ParameterPoint>& where) {
  int code = kExitOk;
  for (size_t k = 0; k < points.size(); ++k) {
    PointResult& pr = points[k];
    if (pr.status == PointStatus::Ep) {
      out.records.push_back(record_at(where[k], "error", Complex(kNan, kNan), "EP"));
      code = std::max(code, static_cast<int>(kExitEp));
    } else if (pr.status == PointStatus::Err) {
      out.records.push_back(record_at(where[k], "error", Complex(kNan, kNan), "ERR"));
      code = std::max(code, static_cast<int>(kExitNumerical));
    }
    for (OutputRecord& r : pr.records) out.records.push_back(std::move(r));
  }
  return code;
}

RunResult run_sweep_chi(const RunConfig& config) {
  const HamiltonianFamily family = family_from_config(config);
  RunResult out;
  out.n_params = family.n_params;
  if (config.grids.empty()) throw ConfigError("sweep-chi: needs one grid entry");
  const GridSpec grid = config.grids[0];
  const int dir = direction_at(config, 0, family);
  const ParameterPoint base = base_point(config, family);
  const std::vector<int> states = states_list(config, family);
  const SolveOptions opts = solve_options_from_config(config);

  SolveOptions permissive = opts;
  permissive.ep_condition_threshold = std::numeric_limits<double>::infinity();

  std::vector<ParameterPoint> where(grid.count, base);
  for (int k = 0; k < grid.count; ++k) where[k].q[dir] = grid_value(grid, k);

  auto points = parallel_points(grid.count, config.parallelism, [&](int k) {
    PointResult pr;
    const ParameterPoint p = where[k];
    const EigenSystem es = biorthogonal_eigensystem(family.evaluate(p), permissive);
    const bool ep = es.condition_number > opts.ep_condition_threshold;
    const GeneratorPair pair = solve_adiabatic_generator(family, p, dir, permissive);
    std::string flag = ep ? "EP" : "";
    if (ep) pr.status = PointStatus::Ep;
    pr.records.push_back(record_at(p, "cond", es.condition_number, flag));
    pr.records.push_back(record_at(p, "gap_min", pair.min_gap, flag));
    for (int n : states) {
      const SusceptibilityRecord rec =
          fidelity_susceptibility(family, p, dir, n, config.t, pair, permissive);
      std::string chi_flag = flag;
      if (chi_flag.empty() && std::abs(rec.chi) > kChiFlagThreshold) chi_flag = "EP?";
      pr.records.push_back(record_at(p, "chi_" + std::to_string(n), rec.chi, chi_flag));
    }
    return pr;
  });

  out.exit_code = kExitOk;
  for (size_t k = 0; k < points.size(); ++k)
    if (points[k].status == PointStatus::Ep) out.exit_code = kExitEp;
  for (auto& pr : points)
    for (OutputRecord& r : pr.records) out.records.push_back(std::move(r));
  return out;
}

RunResult run_berry_map(const RunConfig& config) {
  const HamiltonianFamily family = family_from_config(config);
  RunResult out;
  out.n_params = family.n_params;
  if (family.n_params < 2) throw ConfigError("berry-map: model needs two parameters");
  if (config.grids.size() < 2) throw ConfigError("berry-map: needs two grid entries");
  const GridSpec ga = config.grids[0], gb = config.grids[1];
  const int di = direction_at(config, 0, family);
  const int dj = direction_at(config, 1, family);
  if (di == dj) throw ConfigError("berry-map: directions must differ");
  const ParameterPoint base = base_point(config, family);
  const std::vector<int> states = states_list(config, family);
  const SolveOptions opts = solve_options_from_config(config);

  const int count = ga.count * gb.count;
  std::vector<ParameterPoint> where(count, base);
  for (int k = 0; k < count; ++k) {
    where[k].q[di] = grid_value(ga, k / gb.count);
    where[k].q[dj] = grid_value(gb, k % gb.count);
  }

  auto points = parallel_points(count, config.parallelism, [&](int k) {
    PointResult pr;
    const GeneratorSet set = solve_all_generators(family, where[k], opts);
    for (int n : states) {
      const Complex omega = berry_curvature(family, where[k], di, dj, n, config.t, set, opts);
      pr.records.push_back(record_at(where[k], "omega_" + std::to_string(n), omega));
    }
    return pr;
  });
  out.exit_code = collect(out, std::move(points), where);
  return out;
}

RunResult run_chern(const RunConfig& config) {
  const HamiltonianFamily family = family_from_config(config);
  RunResult out;
  out.n_params = family.n_params;
  if (family.n_params < 2) throw ConfigError("chern: model needs two parameters");
  const ParameterPoint base = base_point(config, family);
  const std::vector<int> states = states_list(config, family);
  const SolveOptions opts = solve_options_from_config(config);

  std::vector<ParameterPoint> where(states.size(), base);
  auto points =
      parallel_points(static_cast<int>(states.size()), config.parallelism, [&](int k) {
        PointResult pr;
        const double c =
            chern_number(family, states[k], config.chern_n_theta, config.chern_n_phi, opts);
        pr.records.push_back(
            record_at(base, "chern_" + std::to_string(states[k]), c));
        return pr;
      });
  out.exit_code = collect(out, std::move(points), where);
  return out;
}

RunResult run_transport(const RunConfig& config) {
  const HamiltonianFamily family = family_from_config(config);
  RunResult out;
  out.n_params = family.n_params;
  if (config.transport.segments.empty())
    throw ConfigError("transport: needs a non-empty path");
  const ParameterPoint p0 = base_point(config, family);
  const SolveOptions opts = solve_options_from_config(config);

  StateVector state;
  state.at = p0;
  if (!config.transport.amplitudes.empty()) {
    if (static_cast<int>(config.transport.amplitudes.size()) != family.dim)
      throw ConfigError("transport: amplitude count does not match model dimension");
    state.amplitudes.resize(family.dim);
    for (int k = 0; k < family.dim; ++k) state.amplitudes(k) = config.transport.amplitudes[k];
  } else {
    const int n = config.transport.eigenstate;
    if (n < 0 || n >= family.dim) throw ConfigError("transport: eigenstate out of range");
    state.amplitudes = biorthogonal_eigensystem(family.evaluate(p0), opts).right.col(n);
  }

  auto norm_record = [&](const StateVector& s) {
    try {
      const EigenSystem es = biorthogonal_eigensystem(family.evaluate(s.at), opts);
      const Matrix g = stationary_metric(es, {}, s.at).value;
      return record_at(s.at, "norm_g", generalized_norm(s, g));
    } catch (const ComplexSpectrum&) {
      return record_at(s.at, "norm_euclid", s.amplitudes.squaredNorm(), "NOG");
    }
  };

  out.records.push_back(norm_record(state));
  TransportOptions topts;
  topts.solve = opts;
  BasePath path;
  path.steps_per_segment = config.transport.steps_per_segment;
  try {
    for (const PathSegment& seg : config.transport.segments) {
      path.segments = {seg};
      state = transport_path(state, family, path, topts);
      out.records.push_back(norm_record(state));
    }
  } catch (const EPOnPath& e) {
    ParameterPoint at = state.at;
    out.records.push_back(record_at(at, "error", Complex(e.location, 0.0), "EP"));
    out.exit_code = kExitEp;
    return out;
  }
  for (int k = 0; k < family.dim; ++k)
    out.records.push_back(record_at(state.at, "amp_" + std::to_string(k),
                                    state.amplitudes(k)));
  return out;
}

RunResult run_residuals(const RunConfig& config) {
  const HamiltonianFamily family = family_from_config(config);
  RunResult out;
  out.n_params = family.n_params;
  if (config.grids.empty()) throw ConfigError("residuals: needs one grid entry");
  const GridSpec grid = config.grids[0];
  const int dir = direction_at(config, 0, family);
  const ParameterPoint base = base_point(config, family);
  const SolveOptions opts = solve_options_from_config(config);
  const double h = config.tolerances.fd_step;

  std::vector<ParameterPoint> where(grid.count, base);
  for (int k = 0; k < grid.count; ++k) where[k].q[dir] = grid_value(grid, k);

  auto points = parallel_points(grid.count, config.parallelism, [&](int k) {
    PointResult pr;
    const ParameterPoint p = where[k];
    const Matrix hmat = family.evaluate(p);
    const GeneratorSet set = solve_all_generators(family, p, opts);

    for (int i = 0; i < family.n_params; ++i)
      for (double ts : config.t_samples) {
        ParameterPoint row = p;
        row.t = ts;
        pr.records.push_back(record_at(
            row, "f_ti_" + std::to_string(i),
            f_ti_component(family, p, set.pairs[i], ts)));
      }

    if (family.n_params >= 2) {
      ParameterPoint at_t = p;
      at_t.t = config.t;
      for (int i = 0; i < family.n_params; ++i)
        for (int j = i + 1; j < family.n_params; ++j)
          pr.records.push_back(record_at(
              at_t, "f_ij_" + std::to_string(i) + "_" + std::to_string(j),
              f_ij_component(family, p, i, j, config.t, h, opts)));
      for (const CrossRelationResidual& r : cross_relation_residuals(family, p, set, h, opts)) {
        const std::string suffix = std::to_string(r.i) + "_" + std::to_string(r.j);
        pr.records.push_back(record_at(at_t, "tterm_" + suffix, r.tterm));
        pr.records.push_back(record_at(at_t, "constterm_" + suffix, r.constterm));
      }
    }

    try {
      const EigenSystem es = biorthogonal_eigensystem(hmat, opts);
      const Matrix g = stationary_metric(es, {}, p).value;
      const Matrix zero = Matrix::Zero(family.dim, family.dim);
      pr.records.push_back(record_at(
          p, "metric_t",
          metric_compatibility_residual(g, zero, hmat, CompatibilityDirection::Time)));
      for (int i = 0; i < family.n_params; ++i) {
        auto metric_at = [&](double dq) {
          const ParameterPoint ps = p.shifted(i, dq);
          return stationary_metric(biorthogonal_eigensystem(family.evaluate(ps), opts), {}, ps)
              .value;
        };
        const Matrix dg = (metric_at(h) - metric_at(-h)) / (2.0 * h);
        pr.records.push_back(record_at(
            p, "metric_q_" + std::to_string(i),
            metric_compatibility_residual(g, dg, assemble_generator(set.pairs[i], config.t),
                                          CompatibilityDirection::Parameter)));
      }
    } catch (const ComplexSpectrum&) {
      pr.records.push_back(record_at(p, "metric_t", Complex(kNan, 0.0), "NOG"));
    }
    return pr;
  });
  out.exit_code = collect(out, std::move(points), where);
  return out;
}

}  // namespace

RunResult run_subcommand(const std::string& subcommand, const RunConfig& config) {
  if (subcommand == "sweep-chi") return run_sweep_chi(config);
  if (subcommand == "berry-map") return run_berry_map(config);
  if (subcommand == "chern") return run_chern(config);
  if (subcommand == "transport") return run_transport(config);
  if (subcommand == "residuals") return run_residuals(config);
  throw ConfigError("unknown subcommand '" + subcommand + "'");
}

int run_and_write(const std::string& subcommand, const RunConfig& config,
                  const std::string& out_override) {
  const RunResult result = run_subcommand(subcommand, config);
  const std::string path = !out_override.empty() ? out_override : config.output_path;
  const std::string timestamp = current_timestamp_utc();

  auto write = [&](std::ostream& os) {
    if (config.format == OutputFormat::Csv)
      write_records_csv(os, result.n_params, result.records, timestamp);
    else
      write_records_json(os, subcommand, result.n_params, result.records, timestamp);
  };
  if (path.empty()) {
    write(std::cout);
  } else {
    std::ofstream os(path);
    if (!os) throw Error("cannot open output file '" + path + "'");
    write(os);
  }
  return result.exit_code;
}

}  // namespace hsb
