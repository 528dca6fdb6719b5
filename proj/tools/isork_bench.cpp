// isork-bench: experiment runner for the isospectral integrators.
//
//   isork-bench run --model rigid_body --integrator 3s-gauss --h 0.01 --steps 2000 --out rb.csv
//   isork-bench convergence --model rigid_body --h-list 0.5,0.25,0.2 --T 1 --out conv.csv
//   isork-bench compare --config base.ini --out summary.csv
//
// Every subcommand accepts --config <file> with `key = value` lines using the
// long option names; options given on the command line take precedence.
//
// Exit codes: 0 success, 1 config error, 2 solver non-convergence, 3 I/O error.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "isork/errors.hpp"
#include "isork/harness.hpp"

namespace {

using namespace isork::harness;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitSolver = 2;
constexpr int kExitIo = 3;

struct CommonOptions {
  std::string model = "rigid_body";
  int n = 3;
  std::string integrator = "3s-gauss";
  double h = 0.01;
  int steps = 2000;
  double tol = 1e-15;
  int max_iter = 100;
  std::uint64_t seed = isork::kDefaultSeed;
  std::vector<double> inertia;
  std::string out;
};

void add_common(CLI::App* app, CommonOptions& o, bool with_integrator) {
  app->add_option("--config", "Key-value config file (command line wins)");
  app->add_option("--model", o.model, "rigid_body | generalized_rigid_body | toda")->capture_default_str();
  app->add_option("--n", o.n, "Matrix dimension")->capture_default_str();
  if (with_integrator) {
    app->add_option("--integrator", o.integrator, "1s-sydirk | 7s-sydirk | 2s-gauss | 3s-gauss")
        ->capture_default_str();
  }
  app->add_option("--tol", o.tol, "Fixed-point tolerance (Frobenius norm)")->capture_default_str();
  app->add_option("--max-iter", o.max_iter, "Fixed-point iteration cap")->capture_default_str();
  app->add_option("--seed", o.seed, "Seed for the random initial state")->capture_default_str();
  app->add_option("--inertia", o.inertia, "Rigid body inertia j1,j2,... (default 1..n)")->delimiter(',');
  app->add_option("--out", o.out, "Output CSV path (stdout when omitted)");
}

ExperimentConfig to_config(const CommonOptions& o) {
  ExperimentConfig cfg;
  cfg.model = parse_model(o.model);
  cfg.n = o.n;
  cfg.integrator = parse_integrator(o.integrator);
  cfg.h = o.h;
  cfg.steps = o.steps;
  cfg.tol = o.tol;
  cfg.max_iter = o.max_iter;
  cfg.seed = o.seed;
  cfg.inertia = o.inertia;
  cfg.out_path = o.out;
  return cfg;
}

// Render into a buffer first so a failed open never leaves half a file.
template <class Writer>
int emit(const std::string& path, Writer&& write) {
  std::ostringstream buffer;
  write(buffer);
  if (path.empty()) {
    std::cout << buffer.str();
    return std::cout ? kExitOk : kExitIo;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    std::cerr << "error: cannot open " << path << " for writing\n";
    return kExitIo;
  }
  file << buffer.str();
  file.close();
  if (!file) {
    std::cerr << "error: failed writing " << path << '\n';
    return kExitIo;
  }
  return kExitOk;
}

bool given_on_command_line(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(),
                     [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

// Splices `key = value` entries from the file named by --config into the
// argument list, skipping keys the command line already sets. CLI11 only
// reads config files on the top-level app, so subcommands get it this way.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw CLI::ArgumentMismatch("--config requires a file name");
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (path.empty() || args.empty()) return args;

  const std::string subcommand = args.front();
  std::vector<std::string> injected;
  for (const CLI::ConfigItem& item : CLI::ConfigINI().from_file(path)) {
    if (!item.parents.empty() && !(item.parents.size() == 1 && item.parents[0] == subcommand)) continue;
    std::string key = item.name;
    std::replace(key.begin(), key.end(), '_', '-');
    const std::string flag = "--" + key;
    if (given_on_command_line(args, flag)) continue;
    std::string value;
    for (std::size_t k = 0; k < item.inputs.size(); ++k) value += (k ? "," : "") + item.inputs[k];
    injected.push_back(flag);
    injected.push_back(value);
  }
  args.insert(args.begin() + 1, injected.begin(), injected.end());
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Isospectral symplectic Runge-Kutta benchmark harness"};
  app.require_subcommand(1);
  // --h is the step size, so help is long-form only.
  app.set_help_flag("--help", "Print this help message and exit");

  CommonOptions run_opts;
  auto* run = app.add_subcommand("run", "Integrate one model with one integrator and write a time series");
  add_common(run, run_opts, true);
  run->add_option("--h", run_opts.h, "Time step")->capture_default_str();
  run->add_option("--steps", run_opts.steps, "Number of steps")->capture_default_str();

  CommonOptions conv_opts;
  std::vector<double> h_list{1.0, 0.5, 1.0 / 3.0, 0.25, 0.2, 0.125, 0.1, 0.05, 0.025};
  std::vector<std::string> conv_integrators{"1s-sydirk", "7s-sydirk", "2s-gauss", "3s-gauss"};
  double horizon = 1.0;
  double ref_h = 1e-4;
  std::string ref_integrator = "3s-gauss";
  double floor = 1e-12;
  auto* conv = app.add_subcommand("convergence", "Empirical order of accuracy at fixed final time");
  add_common(conv, conv_opts, false);
  conv->add_option("--h-list", h_list, "Step sizes, each dividing T")->delimiter(',')->capture_default_str();
  conv->add_option("--integrators", conv_integrators, "Integrators to study")->delimiter(',')->capture_default_str();
  conv->add_option("--T", horizon, "Final time")->capture_default_str();
  conv->add_option("--ref-h", ref_h, "Reference trajectory step")->capture_default_str();
  conv->add_option("--ref-integrator", ref_integrator, "Reference trajectory integrator")->capture_default_str();
  conv->add_option("--floor", floor, "Drop cells with error below this from the fit")->capture_default_str();

  CommonOptions cmp_opts;
  auto* cmp = app.add_subcommand("compare", "Run all four integrators on one configuration");
  add_common(cmp, cmp_opts, false);
  cmp->add_option("--h", cmp_opts.h, "Time step")->capture_default_str();
  cmp->add_option("--steps", cmp_opts.steps, "Number of steps")->capture_default_str();

  try {
    std::vector<std::string> args = expand_config(std::vector<std::string>(argv + 1, argv + argc));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*run) {
      const ExperimentConfig cfg = to_config(run_opts);
      validate(cfg);
      const RunResult result = run_experiment(cfg);
      const int io = emit(cfg.out_path, [&](std::ostream& out) { write_run_csv(out, cfg, result); });
      if (io != kExitOk) return io;
      if (!result.complete) {
        std::cerr << "error: " << result.error << '\n';
        return kExitSolver;
      }
      return kExitOk;
    }

    if (*conv) {
      ConvergenceConfig cfg;
      cfg.model = parse_model(conv_opts.model);
      cfg.n = conv_opts.n;
      cfg.seed = conv_opts.seed;
      cfg.inertia = conv_opts.inertia;
      cfg.integrators.clear();
      for (const auto& name : conv_integrators) cfg.integrators.push_back(parse_integrator(name));
      cfg.h_list = h_list;
      cfg.T = horizon;
      cfg.tol = conv_opts.tol;
      cfg.max_iter = conv_opts.max_iter;
      cfg.reference_integrator = parse_integrator(ref_integrator);
      cfg.reference_h = ref_h;
      cfg.saturation_floor = floor;
      ExperimentConfig probe = to_config(conv_opts);
      probe.integrator = cfg.reference_integrator;
      validate(probe);
      const ConvergenceResult result = convergence_study(cfg);
      const int io = emit(conv_opts.out, [&](std::ostream& out) { write_convergence_csv(out, cfg, result); });
      if (io != kExitOk) return io;
      for (const auto& c : result.cells) {
        if (c.failed) return kExitSolver;
      }
      return kExitOk;
    }

    if (*cmp) {
      const ExperimentConfig cfg = to_config(cmp_opts);
      const std::vector<CompareRow> rows = compare_integrators(cfg);
      const int io = emit(cfg.out_path, [&](std::ostream& out) { write_compare_csv(out, cfg, rows); });
      if (io != kExitOk) return io;
      for (const auto& r : rows) {
        if (!r.complete) return kExitSolver;
      }
      return kExitOk;
    }
  } catch (const isork::NonConvergence& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const isork::Divergence& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const isork::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
