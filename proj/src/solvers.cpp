#include "isork/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "isork/errors.hpp"

namespace isork {

namespace {

using Clock = std::chrono::steady_clock;

void validate(const SolverConfig& cfg) {
  if (!(cfg.tol > 0.0) || !std::isfinite(cfg.tol)) throw InvalidArgument("SolverConfig: tol must be positive");
  if (cfg.max_iter < 1) throw InvalidArgument("SolverConfig: max_iter must be >= 1");
  if (!std::isfinite(cfg.h)) throw InvalidArgument("SolverConfig: h must be finite");
}

void validate_state(const ModelSpec& model, const SquareMatrix& w0) {
  if (w0.n() != model.dim) {
    throw DimensionMismatch("state has dimension " + std::to_string(w0.n()) + " but model " + model.name +
                            " has dimension " + std::to_string(model.dim));
  }
  if (model.constraint == AlgebraConstraint::skew && !w0.is_skew(1e-12)) {
    throw InvalidArgument("state is not in so(n) as required by model " + model.name);
  }
}

void validate_tableau(const ButcherTableau& t) {
  if (t.s < 1 || t.a.rows() != t.s || t.a.cols() != t.s || t.b.size() != t.s || t.c.size() != t.s) {
    throw InvalidArgument("ButcherTableau: inconsistent stage count");
  }
}

DenseMatrix b_of(const ModelSpec& model, const DenseMatrix& m) { return model.b_map(SquareMatrix(m)).dense(); }

[[noreturn]] void throw_nonconvergence(const char* who, int iterations, double last) {
  throw NonConvergence(std::string(who) + ": no convergence after " + std::to_string(iterations) +
                           " iterations (last increment " + std::to_string(last) +
                           "); h is likely too large for the fixed-point map to contract",
                       iterations, last);
}

[[noreturn]] void throw_divergence(const char* who, int iterations) {
  throw Divergence(std::string(who) + ": non-finite iterate at iteration " + std::to_string(iterations), iterations);
}

// Solve W0 = L(X) X R(X) for X by X <- W0 - (L X R - X).
struct BlockSolve {
  BlockGrid x;
  StepReport report;
};

BlockSolve solve_block_equation(const ModelSpec& model, const ButcherTableau& tableau, const SquareMatrix& w0,
                                const SolverConfig& cfg) {
  const int s = tableau.s;
  const BlockGrid target = BlockGrid::uniform(s, w0);

  auto correction = [&](const BlockGrid& x) {
    std::vector<DenseMatrix> b_blocks;
    b_blocks.reserve(static_cast<std::size_t>(s));
    for (int i = 0; i < s; ++i) b_blocks.push_back(b_of(model, x.block(i, i)));
    const LeftStageFactor left{cfg.h, tableau.a, b_blocks};
    const RightStageFactor right{cfg.h, tableau.a, std::move(b_blocks)};
    return blockgrid_correction(left, x, right);
  };

  BlockSolve out{target, {}};
  BlockGrid& x = out.x;
  StepReport& report = out.report;
  bool converged = false;
  for (int iter = 1; iter <= cfg.max_iter; ++iter) {
    BlockGrid next = correction(x);
    for (int i = 0; i < s; ++i) {
      for (int j = 0; j < s; ++j) next.block(i, j) = target.block(i, j) - next.block(i, j);
    }
    if (!next.all_finite()) throw_divergence("block_fixed_point", iter);
    const double increment = frobenius_distance(next, x);
    x = std::move(next);
    report.iterations = iter;
    report.final_residual = increment;
    report.increments.push_back(increment);
    if (increment <= cfg.tol) {
      converged = true;
      break;
    }
  }
  if (!converged) throw_nonconvergence("block_fixed_point", report.iterations, report.final_residual);
  report.total_iterations = report.iterations;

  const BlockGrid corr = correction(x);
  double sq = 0.0;
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) sq += (target.block(i, j) - x.block(i, j) - corr.block(i, j)).squaredNorm();
  }
  report.equation_residual = std::sqrt(sq);
  return out;
}

}  // namespace

StageSolution block_fixed_point(const ModelSpec& model, const ButcherTableau& tableau, const SquareMatrix& w0,
                                const SolverConfig& cfg) {
  validate(cfg);
  validate_tableau(tableau);
  validate_state(model, w0);
  const auto start = Clock::now();
  BlockSolve solve = solve_block_equation(model, tableau, w0, cfg);
  StageSolution out;
  out.stages.reserve(static_cast<std::size_t>(tableau.s));
  for (int i = 0; i < tableau.s; ++i) out.stages.push_back(solve.x.diagonal(i));
  out.report = std::move(solve.report);
  out.report.wall_time = Clock::now() - start;
  return out;
}

StepResult isorks_step(const ModelSpec& model, const ButcherTableau& tableau, const SquareMatrix& w0,
                       const SolverConfig& cfg) {
  const auto start = Clock::now();
  StageSolution stages = block_fixed_point(model, tableau, w0, cfg);
  DenseMatrix update = DenseMatrix::Zero(w0.n(), w0.n());
  for (int i = 0; i < tableau.s; ++i) {
    const DenseMatrix& m = stages.stages[i].dense();
    const DenseMatrix b = b_of(model, m);
    update += tableau.b(i) * (b * m - m * b);
  }
  StepResult out{SquareMatrix(w0.dense() + cfg.h * update), std::move(stages.stages), std::move(stages.report)};
  out.report.wall_time = Clock::now() - start;
  return out;
}

StepResult midpoint_step(const ModelSpec& model, const SquareMatrix& w0, const SolverConfig& cfg) {
  validate(cfg);
  validate_state(model, w0);
  const auto start = Clock::now();
  const double a = 0.5 * cfg.h;
  const DenseMatrix& target = w0.dense();

  // (Id - aB) M (Id + aB) - M = a (M B - B M) - a^2 B M B
  auto correction = [&](const DenseMatrix& m, const DenseMatrix& b) -> DenseMatrix {
    const DenseMatrix mb = m * b;
    const DenseMatrix bm = b * m;
    return a * (mb - bm) - (a * a) * (b * mb);
  };

  StepReport report;
  DenseMatrix m = target;
  DenseMatrix b = b_of(model, m);
  bool converged = false;
  for (int iter = 1; iter <= cfg.max_iter; ++iter) {
    DenseMatrix next = target - correction(m, b);
    if (!next.allFinite()) throw_divergence("midpoint_step", iter);
    const double increment = (next - m).norm();
    m = std::move(next);
    b = b_of(model, m);
    report.iterations = iter;
    report.final_residual = increment;
    report.increments.push_back(increment);
    if (increment <= cfg.tol) {
      converged = true;
      break;
    }
  }
  if (!converged) throw_nonconvergence("midpoint_step", report.iterations, report.final_residual);
  report.total_iterations = report.iterations;
  report.equation_residual = (target - m - correction(m, b)).norm();

  // (Id + aB) M (Id - aB) = M - a (M B - B M) - a^2 B M B
  const DenseMatrix mb = m * b;
  DenseMatrix w1 = m - a * (mb - b * m) - (a * a) * (b * mb);

  StepResult out{SquareMatrix(std::move(w1)), {SquareMatrix(std::move(m))}, std::move(report)};
  out.report.wall_time = Clock::now() - start;
  return out;
}

StepResult dirk_composition_step(const ModelSpec& model, const CompositionWeights& weights, const SquareMatrix& w0,
                                 const SolverConfig& cfg) {
  validate(cfg);
  if (weights.gammas.empty()) throw InvalidArgument("dirk_composition_step: empty composition");
  const auto start = Clock::now();

  StepReport report;
  SquareMatrix w = w0;
  for (std::size_t i = 0; i < weights.gammas.size(); ++i) {
    SolverConfig sub = cfg;
    sub.h = weights.gammas[i] * cfg.h;
    const std::string where = "dirk_composition_step: sub-step " + std::to_string(i + 1) + " of " +
                              std::to_string(weights.gammas.size()) + ": ";
    StepResult r = [&] {
      try {
        return midpoint_step(model, w, sub);
      } catch (const NonConvergence& e) {
        throw NonConvergence(where + e.what(), e.iterations(), e.last_increment());
      } catch (const Divergence& e) {
        throw Divergence(where + e.what(), e.iterations());
      }
    }();
    w = std::move(r.w1);
    report.iterations = std::max(report.iterations, r.report.iterations);
    report.total_iterations += r.report.iterations;
    report.final_residual = std::max(report.final_residual, r.report.final_residual);
    report.equation_residual = std::max(report.equation_residual, r.report.equation_residual);
    report.substep_iterations.push_back(r.report.iterations);
    report.increments.insert(report.increments.end(), r.report.increments.begin(), r.report.increments.end());
  }
  report.wall_time = Clock::now() - start;
  return StepResult{std::move(w), {}, std::move(report)};
}

LiftedStepResult lifted_rk_step(const ModelSpec& model, const ButcherTableau& tableau, const SquareMatrix& w0,
                                const SolverConfig& cfg) {
  validate(cfg);
  validate_tableau(tableau);
  validate_state(model, w0);
  const auto start = Clock::now();
  const int s = tableau.s;
  const int n = w0.n();
  const double h = cfg.h;
  const DenseMatrix g0 = DenseMatrix::Identity(n, n);
  const DenseMatrix& p0 = w0.dense();

  std::vector<DenseMatrix> g(static_cast<std::size_t>(s), g0);
  std::vector<DenseMatrix> p(static_cast<std::size_t>(s), p0);
  std::vector<DenseMatrix> gb(static_cast<std::size_t>(s));  // G_j B(M_j)^T
  std::vector<DenseMatrix> pb(static_cast<std::size_t>(s));  // P_j B(M_j)

  auto evaluate_slopes = [&](int iter) {
    for (int j = 0; j < s; ++j) {
      const DenseMatrix gtp = g[j].transpose() * p[j];
      if (!gtp.allFinite()) throw_divergence("lifted_rk_step", iter);
      const DenseMatrix b = b_of(model, gtp);
      gb[j].noalias() = g[j] * b.transpose();
      pb[j].noalias() = p[j] * b;
    }
  };

  StepReport report;
  bool converged = false;
  for (int iter = 1; iter <= cfg.max_iter; ++iter) {
    evaluate_slopes(iter);
    double sq = 0.0;
    for (int i = 0; i < s; ++i) {
      DenseMatrix g_sum = DenseMatrix::Zero(n, n);
      DenseMatrix p_sum = DenseMatrix::Zero(n, n);
      for (int j = 0; j < s; ++j) {
        g_sum += tableau.a(i, j) * gb[j];
        p_sum += tableau.a(i, j) * pb[j];
      }
      DenseMatrix g_next = g0 + h * g_sum;
      DenseMatrix p_next = p0 - h * p_sum;
      if (!g_next.allFinite() || !p_next.allFinite()) throw_divergence("lifted_rk_step", iter);
      sq += (g_next - g[i]).squaredNorm() + (p_next - p[i]).squaredNorm();
      g[i] = std::move(g_next);
      p[i] = std::move(p_next);
    }
    const double increment = std::sqrt(sq);
    report.iterations = iter;
    report.final_residual = increment;
    report.increments.push_back(increment);
    if (increment <= cfg.tol) {
      converged = true;
      break;
    }
  }
  if (!converged) throw_nonconvergence("lifted_rk_step", report.iterations, report.final_residual);
  report.total_iterations = report.iterations;

  evaluate_slopes(report.iterations);
  DenseMatrix g_sum = DenseMatrix::Zero(n, n);
  DenseMatrix p_sum = DenseMatrix::Zero(n, n);
  double residual_sq = 0.0;
  for (int i = 0; i < s; ++i) {
    g_sum += tableau.b(i) * gb[i];
    p_sum += tableau.b(i) * pb[i];
    DenseMatrix g_stage = g0;
    DenseMatrix p_stage = p0;
    for (int j = 0; j < s; ++j) {
      g_stage += h * tableau.a(i, j) * gb[j];
      p_stage -= h * tableau.a(i, j) * pb[j];
    }
    residual_sq += (g_stage - g[i]).squaredNorm() + (p_stage - p[i]).squaredNorm();
  }
  report.equation_residual = std::sqrt(residual_sq);

  SquareMatrix g1(g0 + h * g_sum);
  SquareMatrix p1(p0 - h * p_sum);
  SquareMatrix w1(g1.dense().transpose() * p1.dense());
  report.wall_time = Clock::now() - start;
  return LiftedStepResult{std::move(w1), std::move(g1), std::move(p1), std::move(report)};
}

PhaseSpacePoint reconstruct_midpoint(const SquareMatrix& g0, const SquareMatrix& p0, const SquareMatrix& m1,
                                     const ModelSpec& model, double h) {
  require_same_dimension(g0, p0, "reconstruct_midpoint");
  require_same_dimension(g0, m1, "reconstruct_midpoint");
  const SquareMatrix nu = h * model.b_map(m1);
  const SquareMatrix forward = cayley(nu);
  const SquareMatrix backward = cayley(-nu);

  const double defect = (forward * backward - SquareMatrix::identity(nu.n())).frobenius_norm();
  if (defect > 1e-10 * (1.0 + forward.frobenius_norm() * backward.frobenius_norm())) {
    throw SingularMatrix("reconstruct_midpoint: cay(nu) cay(-nu) deviates from Id by " + std::to_string(defect),
                         forward.frobenius_norm() * backward.frobenius_norm());
  }
  return PhaseSpacePoint{g0 * cayley(nu.transpose()), p0 * backward};
}

}  // namespace isork
