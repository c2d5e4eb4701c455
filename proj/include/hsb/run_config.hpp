#ifndef HSB_RUN_CONFIG_HPP
#define HSB_RUN_CONFIG_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hsb/linalg.hpp"
#include "hsb/models.hpp"
#include "hsb/transport.hpp"

namespace hsb {

/// Config file violates the schema (exit code 2 at the CLI).
struct ConfigError : Error {
  using Error::Error;
};

struct GridSpec {
  double min = 0.0;
  double max = 0.0;
  int count = 1;
};

struct Tolerances {
  double degeneracy_tol = 1e-9;
  double ep_condition_threshold = 1e8;
  double fd_step = 1e-4;
  int integrator_steps = 1000;
};

struct TransportSpec {
  int eigenstate = 0;                     // used when amplitudes is empty
  std::vector<Complex> amplitudes;        // explicit initial state (optional)
  std::vector<PathSegment> segments;
  int steps_per_segment = 1000;
};

enum class OutputFormat { Csv, Json };

struct RunConfig {
  std::string model_id;              // "linear" | "spin_half" | "pt_dimer"
  double muB = 1.0;                  // spin_half
  Matrix h0;                         // linear
  std::vector<Matrix> couplings;     // linear

  ParameterPoint base;               // defaults: t = 0, q = zeros
  std::vector<int> directions;       // scanned directions, default {0} / {0,1}
  std::vector<GridSpec> grids;       // aligned with `directions`
  std::vector<int> states;           // default: all
  double t = 0.0;
  std::vector<double> t_samples{0.0};
  int chern_n_theta = 40;
  int chern_n_phi = 80;
  Tolerances tolerances;
  TransportSpec transport;
  int parallelism = 1;
  std::string output_path;           // empty = stdout
  OutputFormat format = OutputFormat::Csv;
};

/// Parse + validate a config document; throws ConfigError on any violation.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

HamiltonianFamily family_from_config(const RunConfig& config);
SolveOptions solve_options_from_config(const RunConfig& config);

/// One output row; every row carries the full base-space point.
struct OutputRecord {
  double t = 0.0;
  std::vector<double> q;
  std::string observable;
  double value_re = 0.0;
  double value_im = 0.0;
  std::string flag;
};

/// CSV: one `# generated <timestamp>` comment line, then the fixed header
/// t,q1..qn,observable,value_re,value_im,flag. Fixed %.17g formatting makes
/// re-runs byte-identical modulo the timestamp line.
void write_records_csv(std::ostream& os, int n_params,
                       const std::vector<OutputRecord>& records,
                       const std::string& timestamp);
/// JSON mirror: {"generated_at": ..., "records": [...]}, one field per line.
void write_records_json(std::ostream& os, const std::string& subcommand, int n_params,
                        const std::vector<OutputRecord>& records,
                        const std::string& timestamp);

std::string current_timestamp_utc();

}  // namespace hsb

#endif
