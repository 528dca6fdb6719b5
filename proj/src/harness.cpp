#include "isork/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>

#include <Eigen/Core>

#include "isork/errors.hpp"

namespace isork::harness {

namespace {

std::string fmt_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join(std::span<const double> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += fmt_real(values[i]);
  }
  return out;
}

std::vector<double> effective_inertia(ModelKind kind, int n, std::span<const double> inertia) {
  if (kind == ModelKind::toda) return {};
  if (inertia.empty()) return default_inertia(n);
  return {inertia.begin(), inertia.end()};
}

void write_model_metadata(std::ostream& out, ModelKind model, int n, std::uint64_t seed,
                          std::span<const double> inertia) {
  out << "# tool=isork-bench\n";
  out << "# version=" << kVersion << '\n';
  out << "# model=" << to_string(model) << '\n';
  out << "# n=" << n << '\n';
  out << "# seed=" << seed << '\n';
  out << "# prng=" << kPrngName << '\n';
  const auto j = effective_inertia(model, n, inertia);
  if (!j.empty()) out << "# inertia=" << join(j) << '\n';
  out << "# threads=" << Eigen::nbThreads() << '\n';
}

}  // namespace

std::string_view to_string(ModelKind m) {
  switch (m) {
    case ModelKind::rigid_body: return "rigid_body";
    case ModelKind::generalized_rigid_body: return "generalized_rigid_body";
    case ModelKind::toda: return "toda";
  }
  return "?";
}

std::string_view to_string(Integrator i) {
  switch (i) {
    case Integrator::sydirk1: return "1s-sydirk";
    case Integrator::sydirk7: return "7s-sydirk";
    case Integrator::gauss2: return "2s-gauss";
    case Integrator::gauss3: return "3s-gauss";
  }
  return "?";
}

ModelKind parse_model(std::string_view name) {
  for (auto m : {ModelKind::rigid_body, ModelKind::generalized_rigid_body, ModelKind::toda}) {
    if (name == to_string(m)) return m;
  }
  throw InvalidArgument("unknown model '" + std::string(name) + "'");
}

Integrator parse_integrator(std::string_view name) {
  for (auto i : kAllIntegrators) {
    if (name == to_string(i)) return i;
  }
  throw InvalidArgument("unknown integrator '" + std::string(name) + "'");
}

int nominal_order(Integrator i) {
  switch (i) {
    case Integrator::sydirk1: return 2;
    case Integrator::gauss2: return 4;
    case Integrator::sydirk7:
    case Integrator::gauss3: return 6;
  }
  return 0;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.steps < 1) throw InvalidArgument("steps must be >= 1");
  if (!(cfg.h > 0.0) || !std::isfinite(cfg.h)) throw InvalidArgument("h must be positive");
  if (!(cfg.tol > 0.0) || !std::isfinite(cfg.tol)) throw InvalidArgument("tol must be positive");
  if (cfg.max_iter < 1) throw InvalidArgument("max-iter must be >= 1");
  switch (cfg.model) {
    case ModelKind::rigid_body:
      if (cfg.n != 3) throw InvalidArgument("rigid_body requires n = 3; use generalized_rigid_body");
      break;
    case ModelKind::generalized_rigid_body:
    case ModelKind::toda:
      if (cfg.n < 3) throw InvalidArgument(std::string(to_string(cfg.model)) + " requires n >= 3");
      break;
  }
  if (!cfg.inertia.empty()) {
    if (cfg.model == ModelKind::toda) throw InvalidArgument("inertia is only meaningful for rigid bodies");
    if (static_cast<int>(cfg.inertia.size()) != cfg.n) throw InvalidArgument("inertia must have n entries");
  }
}

ModelSpec build_model(ModelKind kind, int n, std::uint64_t seed, std::span<const double> inertia) {
  if (kind == ModelKind::toda) return toda_lattice(n, seed);
  const auto j = effective_inertia(kind, n, inertia);
  return rigid_body(j, seed);
}

ModelSpec build_model(const ExperimentConfig& cfg) { return build_model(cfg.model, cfg.n, cfg.seed, cfg.inertia); }

StepResult advance(Integrator integrator, const ModelSpec& model, const SquareMatrix& w, const SolverConfig& cfg) {
  switch (integrator) {
    case Integrator::sydirk1: return midpoint_step(model, w, cfg);
    case Integrator::sydirk7: {
      static const CompositionWeights weights = composition_weights_6th();
      return dirk_composition_step(model, weights, w, cfg);
    }
    case Integrator::gauss2: {
      static const ButcherTableau tableau = gauss_tableau(2);
      return isorks_step(model, tableau, w, cfg);
    }
    case Integrator::gauss3: {
      static const ButcherTableau tableau = gauss_tableau(3);
      return isorks_step(model, tableau, w, cfg);
    }
  }
  throw InvalidArgument("advance: unknown integrator");
}

int spectral_kmax(int n) { return std::clamp(n, 4, 6); }

double energy_relative_error(double eta, double eta0) {
  return std::abs(eta - eta0) / std::max(std::abs(eta0), 1e-300);
}

double spectral_drift(std::span<const double> traces, std::span<const double> traces0) {
  double worst = 0.0;
  for (std::size_t m = 0; m < traces.size() && m < traces0.size(); ++m) {
    worst = std::max(worst, std::abs(traces[m] - traces0[m]) / (1.0 + std::abs(traces0[m])));
  }
  return worst;
}

RunResult run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const ModelSpec model = build_model(cfg);
  const SolverConfig solver{cfg.tol, cfg.max_iter, cfg.h};
  const int kmax = spectral_kmax(model.dim);

  const SquareMatrix& w0 = model.initial_state;
  const double eta0 = model.hamiltonian(w0);
  const std::vector<double> traces0 = spectral_invariants(w0, kmax);

  RunResult result;
  result.records.reserve(static_cast<std::size_t>(cfg.steps));
  result.reversibility_defect = std::numeric_limits<double>::quiet_NaN();
  SquareMatrix w = w0;
  for (int k = 1; k <= cfg.steps; ++k) {
    std::optional<StepResult> step;
    try {
      step = advance(cfg.integrator, model, w, solver);
    } catch (const Error& e) {
      result.error = "step " + std::to_string(k) + ": " + e.what();
      result.final_state = w;
      return result;
    }
    w = std::move(step->w1);

    if (k == 1) {
      try {
        SolverConfig back = solver;
        back.h = -cfg.h;
        result.reversibility_defect = (advance(cfg.integrator, model, w, back).w1 - w0).frobenius_norm();
      } catch (const Error&) {
        // Diagnostic only; stays NaN.
      }
    }

    TimeSeriesRecord rec{k,
                         k * cfg.h,
                         energy_relative_error(model.hamiltonian(w), eta0),
                         spectral_drift(spectral_invariants(w, kmax), traces0),
                         step->report.iterations,
                         static_cast<std::int64_t>(step->report.wall_time.count())};
    result.max_energy_rel_err = std::max(result.max_energy_rel_err, rec.energy_rel_err);
    result.max_spec_drift = std::max(result.max_spec_drift, rec.spec_drift);
    result.max_iterations = std::max(result.max_iterations, rec.iterations);
    result.total_wall_ns += rec.wall_ns;
    result.total_iterations += step->report.total_iterations;
    result.records.push_back(rec);
  }
  result.complete = true;
  result.final_state = w;
  return result;
}

void write_run_csv(std::ostream& out, const ExperimentConfig& cfg, const RunResult& result) {
  out << "# command=run\n";
  write_model_metadata(out, cfg.model, cfg.n, cfg.seed, cfg.inertia);
  out << "# integrator=" << to_string(cfg.integrator) << '\n';
  out << "# h=" << fmt_real(cfg.h) << '\n';
  out << "# steps=" << cfg.steps << '\n';
  out << "# tol=" << fmt_real(cfg.tol) << '\n';
  out << "# max_iter=" << cfg.max_iter << '\n';
  out << "# spectral_kmax=" << spectral_kmax(cfg.n) << '\n';
  out << "# status=" << (result.complete ? "complete" : "incomplete") << '\n';
  if (!result.complete) out << "# error=" << result.error << '\n';
  out << "# records=" << result.records.size() << '\n';
  out << "# reversibility_defect=" << fmt_real(result.reversibility_defect) << '\n';
  out << "step,t,energy_rel_err,spec_drift,iterations,wall_ns\n";
  for (const auto& r : result.records) {
    out << r.step << ',' << fmt_real(r.t) << ',' << fmt_real(r.energy_rel_err) << ',' << fmt_real(r.spec_drift)
        << ',' << r.iterations << ',' << r.wall_ns << '\n';
  }
}

double loglog_slope(std::span<const double> h, std::span<const double> err) {
  if (h.size() != err.size()) throw DimensionMismatch("loglog_slope: size mismatch");
  const std::size_t m = h.size();
  if (m < 2) return std::numeric_limits<double>::quiet_NaN();
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sx += std::log(h[i]);
    sy += std::log(err[i]);
  }
  const double mx = sx / m, my = sy / m;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double dx = std::log(h[i]) - mx;
    sxy += dx * (std::log(err[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

int steps_for(double T, double h) {
  if (!(h > 0.0) || !(T > 0.0)) throw InvalidArgument("steps_for: T and h must be positive");
  const double ratio = T / h;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * ratio) {
    throw InvalidArgument("h = " + fmt_real(h) + " does not divide T = " + fmt_real(T));
  }
  return static_cast<int>(rounded);
}

namespace {

SquareMatrix integrate(Integrator integrator, const ModelSpec& model, double h, int steps, double tol, int max_iter) {
  const SolverConfig cfg{tol, max_iter, h};
  SquareMatrix w = model.initial_state;
  for (int k = 0; k < steps; ++k) w = advance(integrator, model, w, cfg).w1;
  return w;
}

}  // namespace

ConvergenceResult convergence_study(const ConvergenceConfig& cfg) {
  if (cfg.h_list.size() < 3) throw InvalidArgument("convergence_study: need at least 3 step sizes");
  if (cfg.integrators.empty()) throw InvalidArgument("convergence_study: no integrators");
  for (double h : cfg.h_list) steps_for(cfg.T, h);
  const int ref_steps = steps_for(cfg.T, cfg.reference_h);

  const ModelSpec model = build_model(cfg.model, cfg.n, cfg.seed, cfg.inertia);
  const SquareMatrix reference =
      integrate(cfg.reference_integrator, model, cfg.reference_h, ref_steps, cfg.tol, cfg.max_iter);

  ConvergenceResult result;
  for (Integrator integrator : cfg.integrators) {
    std::vector<double> hs, errs;
    for (double h : cfg.h_list) {
      ConvergenceCell cell{integrator, h, steps_for(cfg.T, h), std::numeric_limits<double>::quiet_NaN(),
                           false, false, {}};
      try {
        const SquareMatrix w = integrate(integrator, model, h, cell.steps, cfg.tol, cfg.max_iter);
        cell.error = (w - reference).frobenius_norm();
        cell.used = cell.error >= cfg.saturation_floor;
      } catch (const Error& e) {
        cell.failed = true;
        cell.message = e.what();
      }
      if (cell.used) {
        hs.push_back(h);
        errs.push_back(cell.error);
      }
      result.cells.push_back(std::move(cell));
    }
    result.orders.push_back(EmpiricalOrder{integrator, loglog_slope(hs, errs), static_cast<int>(hs.size())});
  }
  return result;
}

void write_convergence_csv(std::ostream& out, const ConvergenceConfig& cfg, const ConvergenceResult& result) {
  out << "# command=convergence\n";
  write_model_metadata(out, cfg.model, cfg.n, cfg.seed, cfg.inertia);
  out << "# T=" << fmt_real(cfg.T) << '\n';
  out << "# tol=" << fmt_real(cfg.tol) << '\n';
  out << "# reference_integrator=" << to_string(cfg.reference_integrator) << '\n';
  out << "# reference_h=" << fmt_real(cfg.reference_h) << '\n';
  out << "# saturation_floor=" << fmt_real(cfg.saturation_floor) << '\n';
  for (const auto& o : result.orders) {
    out << "# order[" << to_string(o.integrator) << "]=" << fmt_real(o.slope) << " points=" << o.points << '\n';
  }
  out << "integrator,h,steps,error,used,status\n";
  for (const auto& c : result.cells) {
    out << to_string(c.integrator) << ',' << fmt_real(c.h) << ',' << c.steps << ',' << fmt_real(c.error) << ','
        << (c.used ? 1 : 0) << ',' << (c.failed ? "failed" : "ok") << '\n';
  }
}

std::vector<CompareRow> compare_integrators(const ExperimentConfig& base) {
  validate(base);
  std::vector<CompareRow> rows;
  for (Integrator integrator : kAllIntegrators) {
    ExperimentConfig cfg = base;
    cfg.integrator = integrator;
    const RunResult r = run_experiment(cfg);
    rows.push_back(CompareRow{integrator, r.complete, r.error, static_cast<int>(r.records.size()),
                              r.total_wall_ns, r.max_iterations, r.max_energy_rel_err, r.max_spec_drift});
  }
  return rows;
}

void write_compare_csv(std::ostream& out, const ExperimentConfig& base, std::span<const CompareRow> rows) {
  out << "# command=compare\n";
  write_model_metadata(out, base.model, base.n, base.seed, base.inertia);
  out << "# h=" << fmt_real(base.h) << '\n';
  out << "# steps=" << base.steps << '\n';
  out << "# tol=" << fmt_real(base.tol) << '\n';
  out << "# max_iter=" << base.max_iter << '\n';
  out << "integrator,status,steps_completed,total_wall_ns,max_iterations,max_energy_rel_err,max_spec_drift\n";
  for (const auto& r : rows) {
    out << to_string(r.integrator) << ',' << (r.complete ? "complete" : "incomplete") << ',' << r.steps_completed
        << ',' << r.total_wall_ns << ',' << r.max_iterations << ',' << fmt_real(r.max_energy_rel_err) << ','
        << fmt_real(r.max_spec_drift) << '\n';
  }
}

}  // namespace isork::harness
