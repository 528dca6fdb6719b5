#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "isork/linalg.hpp"

namespace isork {

enum class AlgebraConstraint { skew, none };

/// An isospectral Lie-Poisson system  W' = [B(W), W]  with B = grad(eta)^T.
struct ModelSpec {
  std::string name;
  int dim;
  std::function<SquareMatrix(const SquareMatrix&)> b_map;
  std::function<double(const SquareMatrix&)> hamiltonian;
  AlgebraConstraint constraint;
  SquareMatrix initial_state;
};

inline constexpr std::uint64_t kDefaultSeed = 2024;

/// j = (1, 2, ..., n).
std::vector<double> default_inertia(int n);

/// Free rigid body on so(n) with inertia operator I(W) = J W + W J,
/// J = diag(j). B(W) = -I^{-1} W, eta(W) = <I^{-1} W, W> / 2.
/// n = 3 is the classical body; larger n is the generalized (Manakov) body.
/// The initial state is random_skew(n, seed).
ModelSpec rigid_body(std::span<const double> inertia, std::uint64_t seed = kDefaultSeed);

/// Periodic Toda lattice in Lax form, extended to gl(n).
/// B keeps the superdiagonal, negates the subdiagonal and carries the cyclic
/// corners with signs (-, +). For n = 4 the initial state is the standard
/// 4x4 test matrix; other n start from a seeded random symmetric matrix.
ModelSpec toda_lattice(int n, std::uint64_t seed = kDefaultSeed);

/// B == 0 on gl(n); every scheme must leave the state untouched.
ModelSpec frozen_model(const SquareMatrix& initial_state);

}  // namespace isork
