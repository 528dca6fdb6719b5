#pragma once

#include <chrono>
#include <vector>

#include "isork/linalg.hpp"
#include "isork/models.hpp"
#include "isork/tableaus.hpp"

namespace isork {

/// Fixed-point controls for one time step. The iteration stops once the
/// Frobenius norm of the difference between successive iterates is <= tol.
/// h may be zero or negative (a backward step); it must be finite.
struct SolverConfig {
  double tol = 1e-15;
  int max_iter = 100;
  double h = 0.01;
};

/// Per-step diagnostics.
struct StepReport {
  /// Fixed-point iterations; for compositions, the maximum over sub-steps.
  int iterations = 0;
  /// Sum of iterations over all implicit solves in the step.
  int total_iterations = 0;
  /// Last successive-iterate difference (the stopping quantity).
  double final_residual = 0.0;
  /// Norm of the implicit equation residual at the returned iterate.
  double equation_residual = 0.0;
  std::chrono::nanoseconds wall_time{0};
  /// Successive-iterate differences, one per iteration.
  std::vector<double> increments;
  /// Iteration count of every sub-step (compositions only).
  std::vector<int> substep_iterations;
};

struct StageSolution {
  /// Diagonal blocks M_1..M_s of the converged block iterate.
  std::vector<SquareMatrix> stages;
  StepReport report;
};

struct StepResult {
  SquareMatrix w1;
  /// Intermediate points M_i the update was built from (M for the midpoint
  /// rule; empty for compositions).
  std::vector<SquareMatrix> stages;
  StepReport report;
};

struct LiftedStepResult {
  SquareMatrix w1;
  SquareMatrix g1;
  SquareMatrix p1;
  StepReport report;
};

struct PhaseSpacePoint {
  SquareMatrix g;
  SquareMatrix p;
};

/// Solves the block implicit equation
///
///   W0 = (Id - h A B(X)) X (Id + h B(X) A^T)
///
/// on an s x s grid of n x n blocks, where B(X) is the block diagonal of
/// B applied to the diagonal blocks of X and every block of W0 is w0. The
/// iteration X <- X - G(h, X) with G the residual starts from the uniform
/// grid W0. All blocks are carried, although only the diagonal feeds B.
///
/// Throws NonConvergence after cfg.max_iter iterations and Divergence on
/// non-finite iterates.
StageSolution block_fixed_point(const ModelSpec& model, const ButcherTableau& tableau, const SquareMatrix& w0,
                                const SolverConfig& cfg);

/// Block algorithm step: solve for the stages, then
/// w1 = w0 + h sum_i b_i [B(M_i), M_i].
StepResult isorks_step(const ModelSpec& model, const ButcherTableau& tableau, const SquareMatrix& w0,
                       const SolverConfig& cfg);

/// Implicit midpoint rule in its single-equation form:
///   W0 = (Id - h/2 B(M)) M (Id + h/2 B(M)),
///   W1 = (Id + h/2 B(M)) M (Id - h/2 B(M)).
StepResult midpoint_step(const ModelSpec& model, const SquareMatrix& w0, const SolverConfig& cfg);

/// Symmetric composition of midpoint steps of size gamma_i h. Errors from a
/// sub-step are rethrown with the sub-step index in the message.
StepResult dirk_composition_step(const ModelSpec& model, const CompositionWeights& weights, const SquareMatrix& w0,
                                 const SolverConfig& cfg);

/// Runge-Kutta step on the lifted canonical system
///   g' = g B(g^T p)^T,  p' = -p B(g^T p)
/// from (g0, p0) = (Id, w0), solving the 2s stage equations by simultaneous
/// fixed-point iteration and returning w1 = g1^T p1. Independent of the
/// block algorithm and used to check it.
LiftedStepResult lifted_rk_step(const ModelSpec& model, const ButcherTableau& tableau, const SquareMatrix& w0,
                                const SolverConfig& cfg);

/// Midpoint-rule lift back to phase space:
///   g1 = g0 cay(h B(M1)^T),  p1 = p0 cay(h B(M1))^{-1}.
/// The inverse is taken as cay(-h B(M1)) once cay(nu) cay(-nu) = Id has
/// been confirmed numerically.
PhaseSpacePoint reconstruct_midpoint(const SquareMatrix& g0, const SquareMatrix& p0, const SquareMatrix& m1,
                                     const ModelSpec& model, double h);

}  // namespace isork
