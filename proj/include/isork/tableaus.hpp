#pragma once

#include <vector>

#include <Eigen/Dense>

namespace isork {

/// Coefficients (a, b, c) of an s-stage Runge-Kutta method.
struct ButcherTableau {
  int s;
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
};

/// Gauss-Legendre collocation tableau for s in {1, 2, 3}. Nodes are the
/// roots of the shifted Legendre polynomial; a and b are exact integrals of
/// the Lagrange basis at those nodes.
ButcherTableau gauss_tableau(int s);

/// max_ij |b_i a_ij + b_j a_ji - b_i b_j|; zero for symplectic methods.
double symplecticity_defect(const ButcherTableau& t);

/// Step-size scalings of a symmetric composition of a self-adjoint
/// second-order step.
struct CompositionWeights {
  std::vector<double> gammas;
};

/// 7-stage symmetric composition of order 6 (Yoshida's solution A).
CompositionWeights composition_weights_6th();

}  // namespace isork
