#include "isork/models.hpp"

#include <string>

#include "isork/errors.hpp"

namespace isork {

std::vector<double> default_inertia(int n) {
  std::vector<double> j(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) j[i] = static_cast<double>(i + 1);
  return j;
}

ModelSpec rigid_body(std::span<const double> inertia, std::uint64_t seed) {
  const int n = static_cast<int>(inertia.size());
  if (n < 2) throw InvalidArgument("rigid_body: need at least 2 inertia values");
  for (double ji : inertia) {
    if (!(ji > 0.0)) throw InvalidArgument("rigid_body: inertia values must be positive");
  }

  // (I^{-1} W)_ab = W_ab / (j_a + j_b). The table is symmetric, so the map
  // sends skew matrices to skew matrices exactly.
  DenseMatrix denom(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) denom(a, b) = inertia[a] + inertia[b];
  }

  auto inverse_inertia = [denom](const SquareMatrix& w) {
    if (w.n() != denom.rows()) throw DimensionMismatch("rigid_body: state dimension mismatch");
    return SquareMatrix(w.dense().cwiseQuotient(denom));
  };

  ModelSpec spec{
      n == 3 ? "rigid_body" : "generalized_rigid_body",
      n,
      [inverse_inertia](const SquareMatrix& w) { return -inverse_inertia(w); },
      [inverse_inertia](const SquareMatrix& w) { return 0.5 * frobenius_inner(inverse_inertia(w), w); },
      AlgebraConstraint::skew,
      random_skew(n, seed),
  };
  return spec;
}

namespace {

SquareMatrix toda_b_map(const SquareMatrix& w) {
  const int n = w.n();
  DenseMatrix b = DenseMatrix::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    b(i, i + 1) = w(i, i + 1);
    b(i + 1, i) = -w(i + 1, i);
  }
  b(0, n - 1) = -w(0, n - 1);
  b(n - 1, 0) = w(n - 1, 0);
  return SquareMatrix(std::move(b));
}

}  // namespace

ModelSpec toda_lattice(int n, std::uint64_t seed) {
  if (n < 3) throw InvalidArgument("toda_lattice: n must be >= 3, got " + std::to_string(n));

  SquareMatrix w0 = n == 4 ? SquareMatrix::from_rows({{-1, -1, 0, 1},  //
                                                      {-1, 1, 1, 0},
                                                      {0, 1, -1, -1},
                                                      {1, 0, -1, 1}})
                           : random_symmetric(n, seed);
  return ModelSpec{
      "toda",
      n,
      [n](const SquareMatrix& w) {
        if (w.n() != n) throw DimensionMismatch("toda_lattice: state dimension mismatch");
        return toda_b_map(w);
      },
      [](const SquareMatrix& w) {
        const double tr_w2 = w.dense().cwiseProduct(w.dense().transpose()).sum();
        return 2.0 * tr_w2 - 0.5 * frobenius_inner(w, toda_b_map(w));
      },
      AlgebraConstraint::none,
      std::move(w0),
  };
}

ModelSpec frozen_model(const SquareMatrix& initial_state) {
  const int n = initial_state.n();
  return ModelSpec{
      "frozen",
      n,
      [n](const SquareMatrix&) { return SquareMatrix::zero(n); },
      [](const SquareMatrix& w) { return 0.5 * frobenius_inner(w, w); },
      AlgebraConstraint::none,
      initial_state,
  };
}

}  // namespace isork
