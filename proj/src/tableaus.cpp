#include "isork/tableaus.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "isork/errors.hpp"

namespace isork {

namespace {

// Monomial coefficients, lowest degree first.
using Polynomial = std::vector<double>;

Polynomial multiply_linear(const Polynomial& p, double root, double scale) {
  // p(t) * (t - root) / scale
  Polynomial out(p.size() + 1, 0.0);
  for (std::size_t k = 0; k < p.size(); ++k) {
    out[k + 1] += p[k] / scale;
    out[k] -= root * p[k] / scale;
  }
  return out;
}

double integrate_from_zero(const Polynomial& p, double x) {
  double sum = 0.0;
  double power = x;
  for (std::size_t k = 0; k < p.size(); ++k) {
    sum += p[k] * power / static_cast<double>(k + 1);
    power *= x;
  }
  return sum;
}

std::vector<double> shifted_legendre_roots(int s) {
  switch (s) {
    case 1:
      return {0.5};
    case 2:
      return {0.5 - std::sqrt(3.0) / 6.0, 0.5 + std::sqrt(3.0) / 6.0};
    case 3:
      return {0.5 - std::sqrt(15.0) / 10.0, 0.5, 0.5 + std::sqrt(15.0) / 10.0};
    default:
      throw InvalidArgument("gauss_tableau: unsupported stage count " + std::to_string(s) + " (expected 1, 2 or 3)");
  }
}

}  // namespace

ButcherTableau gauss_tableau(int s) {
  const std::vector<double> nodes = shifted_legendre_roots(s);

  ButcherTableau t{s, Eigen::MatrixXd(s, s), Eigen::VectorXd(s), Eigen::VectorXd(s)};
  for (int j = 0; j < s; ++j) {
    Polynomial basis{1.0};
    for (int m = 0; m < s; ++m) {
      if (m != j) basis = multiply_linear(basis, nodes[m], nodes[j] - nodes[m]);
    }
    t.b(j) = integrate_from_zero(basis, 1.0);
    for (int i = 0; i < s; ++i) t.a(i, j) = integrate_from_zero(basis, nodes[i]);
  }
  for (int i = 0; i < s; ++i) t.c(i) = nodes[i];
  return t;
}

double symplecticity_defect(const ButcherTableau& t) {
  double worst = 0.0;
  for (int i = 0; i < t.s; ++i) {
    for (int j = 0; j < t.s; ++j) {
      worst = std::max(worst, std::abs(t.b(i) * t.a(i, j) + t.b(j) * t.a(j, i) - t.b(i) * t.b(j)));
    }
  }
  return worst;
}

CompositionWeights composition_weights_6th() {
  // Outer-to-centre weights w3, w2, w1; w0 = 1 - 2 (w1 + w2 + w3).
  // Solved to 25 digits from the vanishing h^3 and h^5 local error terms.
  constexpr double w3 = 0.78451361047755726381949770;
  constexpr double w2 = 0.23557321335935813368479316;
  constexpr double w1 = -1.17767998417887100694641577;
  constexpr double w0 = 1.31518632068391121888424983;
  return CompositionWeights{{w3, w2, w1, w0, w1, w2, w3}};
}

}  // namespace isork
