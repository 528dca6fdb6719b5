#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "isork/models.hpp"
#include "isork/solvers.hpp"

namespace isork::harness {

inline constexpr std::string_view kVersion = "0.1.0";

enum class ModelKind { rigid_body, generalized_rigid_body, toda };

enum class Integrator { sydirk1, sydirk7, gauss2, gauss3 };

inline constexpr std::array<Integrator, 4> kAllIntegrators = {Integrator::sydirk1, Integrator::sydirk7,
                                                              Integrator::gauss2, Integrator::gauss3};

std::string_view to_string(ModelKind m);
std::string_view to_string(Integrator i);
ModelKind parse_model(std::string_view name);
Integrator parse_integrator(std::string_view name);

/// Nominal order of accuracy.
int nominal_order(Integrator i);

struct ExperimentConfig {
  ModelKind model = ModelKind::rigid_body;
  int n = 3;
  Integrator integrator = Integrator::gauss3;
  double h = 0.01;
  int steps = 2000;
  double tol = 1e-15;
  int max_iter = 100;
  std::uint64_t seed = kDefaultSeed;
  /// Empty means default_inertia(n).
  std::vector<double> inertia;
  std::string out_path;
};

/// Throws InvalidArgument on a bad config.
void validate(const ExperimentConfig& cfg);

ModelSpec build_model(ModelKind kind, int n, std::uint64_t seed, std::span<const double> inertia);
ModelSpec build_model(const ExperimentConfig& cfg);

/// One step of the named integrator: midpoint_step for 1s-sydirk, the
/// 6th-order composition for 7s-sydirk, the block algorithm for the Gauss
/// methods.
StepResult advance(Integrator integrator, const ModelSpec& model, const SquareMatrix& w, const SolverConfig& cfg);

/// Number of power traces tracked: covers m = 1..4 always, up to 6 for n >= 6.
int spectral_kmax(int n);

/// |eta(W) - eta0| / max(|eta0|, 1e-300)
double energy_relative_error(double eta, double eta0);

/// max_m |tr(W^m) - tr(W0^m)| / (1 + |tr(W0^m)|)
double spectral_drift(std::span<const double> traces, std::span<const double> traces0);

struct TimeSeriesRecord {
  int step;
  double t;
  double energy_rel_err;
  double spec_drift;
  int iterations;
  std::int64_t wall_ns;
};

struct RunResult {
  std::vector<TimeSeriesRecord> records;
  bool complete = false;
  std::string error;
  SquareMatrix final_state = SquareMatrix::zero(1);
  double max_energy_rel_err = 0.0;
  double max_spec_drift = 0.0;
  int max_iterations = 0;
  std::int64_t total_wall_ns = 0;
  std::int64_t total_iterations = 0;
  /// ||step(step(W0, h), -h) - W0||_F; diagnostic only. NaN if unavailable.
  double reversibility_defect = 0.0;
};

/// Steps the configured integrator cfg.steps times from the model's initial
/// state. A solver failure stops the run and leaves complete == false with
/// the records gathered so far.
RunResult run_experiment(const ExperimentConfig& cfg);

/// `# key=value` metadata block, then `step,t,energy_rel_err,spec_drift,iterations,wall_ns`.
void write_run_csv(std::ostream& out, const ExperimentConfig& cfg, const RunResult& result);

struct ConvergenceConfig {
  ModelKind model = ModelKind::rigid_body;
  int n = 3;
  std::uint64_t seed = kDefaultSeed;
  std::vector<double> inertia;
  std::vector<Integrator> integrators{kAllIntegrators.begin(), kAllIntegrators.end()};
  std::vector<double> h_list;
  double T = 1.0;
  double tol = 1e-15;
  int max_iter = 100;
  Integrator reference_integrator = Integrator::gauss3;
  double reference_h = 1e-4;
  /// Cells with error below this are dropped from the fit (round-off floor).
  double saturation_floor = 1e-12;
};

struct ConvergenceCell {
  Integrator integrator;
  double h;
  int steps;
  double error;
  bool used;
  bool failed;
  std::string message;
};

struct EmpiricalOrder {
  Integrator integrator;
  double slope;  // NaN when fewer than two usable cells
  int points;
};

struct ConvergenceResult {
  std::vector<ConvergenceCell> cells;
  std::vector<EmpiricalOrder> orders;
};

/// Least-squares slope of log(err) against log(h).
double loglog_slope(std::span<const double> h, std::span<const double> err);

/// Number of steps of size h covering T; throws if h does not divide T.
int steps_for(double T, double h);

/// Final-state error at time T for every (integrator, h) against a
/// high-accuracy reference trajectory, plus the fitted order per integrator.
ConvergenceResult convergence_study(const ConvergenceConfig& cfg);

void write_convergence_csv(std::ostream& out, const ConvergenceConfig& cfg, const ConvergenceResult& result);

struct CompareRow {
  Integrator integrator;
  bool complete;
  std::string error;
  int steps_completed;
  std::int64_t total_wall_ns;
  int max_iterations;
  double max_energy_rel_err;
  double max_spec_drift;
};

/// Runs all four integrators on base's model/h/steps/tol. A failing
/// integrator is recorded and the rest still run.
std::vector<CompareRow> compare_integrators(const ExperimentConfig& base);

void write_compare_csv(std::ostream& out, const ExperimentConfig& base, std::span<const CompareRow> rows);

}  // namespace isork::harness
