#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace isork {

using DenseMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CoefficientTable = Eigen::MatrixXd;

/// Dense real n x n matrix with finite entries. This is the Lie algebra
/// element type used for W, M_i, B(M_i) and the phase-space pair (g, p).
///
/// Construction rejects empty, non-square, and non-finite input, and every
/// arithmetic operator goes through the same check, so a SquareMatrix in hand
/// is always finite.
class SquareMatrix {
 public:
  explicit SquareMatrix(DenseMatrix entries);

  static SquareMatrix zero(int n);
  static SquareMatrix identity(int n);
  static SquareMatrix diagonal(std::initializer_list<double> values);
  static SquareMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  int n() const { return static_cast<int>(entries_.rows()); }
  double operator()(int i, int j) const { return entries_(i, j); }
  const DenseMatrix& dense() const { return entries_; }

  SquareMatrix transpose() const;
  double trace() const { return entries_.trace(); }
  double frobenius_norm() const { return entries_.norm(); }

  /// ||W + W^T||_F <= rel_tol (1 + ||W||_F)
  bool is_skew(double rel_tol = 1e-12) const;

  SquareMatrix& operator+=(const SquareMatrix& other);
  SquareMatrix& operator-=(const SquareMatrix& other);

  friend SquareMatrix operator+(const SquareMatrix& a, const SquareMatrix& b);
  friend SquareMatrix operator-(const SquareMatrix& a, const SquareMatrix& b);
  friend SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b);
  friend SquareMatrix operator*(double alpha, const SquareMatrix& a);
  friend SquareMatrix operator-(const SquareMatrix& a);

 private:
  DenseMatrix entries_;
};

void require_same_dimension(const SquareMatrix& a, const SquareMatrix& b, std::string_view op);

/// ab - ba
SquareMatrix commutator(const SquareMatrix& a, const SquareMatrix& b);

/// sum_ij a_ij b_ij, i.e. tr(a^T b).
double frobenius_inner(const SquareMatrix& a, const SquareMatrix& b);

/// Power traces [tr(W), tr(W^2), ..., tr(W^kmax)]. Used as the
/// isospectrality witness in place of an eigenvalue decomposition.
std::vector<double> spectral_invariants(const SquareMatrix& w, int kmax);

/// cay(nu) = (Id - nu/2)^{-1} (Id + nu/2), evaluated by a partial-pivot LU
/// solve. Throws SingularMatrix when a pivot falls below 1e-13 ||Id - nu/2||_F.
SquareMatrix cayley(const SquareMatrix& nu);

/// Name of the generator behind random_skew, recorded in run metadata.
inline constexpr std::string_view kPrngName = "mt19937_64/53-bit-uniform";

/// (R - R^T)/2 with R_ij uniform on [-1, 1], drawn row-major from a
/// mt19937_64 stream. The mantissa extraction is done by hand so the output
/// is bit-identical across standard libraries.
SquareMatrix random_skew(int n, std::uint64_t seed);

/// (R + R^T)/2 from the same stream as random_skew.
SquareMatrix random_symmetric(int n, std::uint64_t seed);

/// s x s grid of n x n blocks: the unknown of the block implicit equation.
class BlockGrid {
 public:
  BlockGrid(int s, int n);

  /// Every block equal to w.
  static BlockGrid uniform(int s, const SquareMatrix& w);

  int s() const { return s_; }
  int n() const { return n_; }

  DenseMatrix& block(int i, int j) { return blocks_[index(i, j)]; }
  const DenseMatrix& block(int i, int j) const { return blocks_[index(i, j)]; }

  SquareMatrix diagonal(int i) const { return SquareMatrix(block(i, i)); }

  double frobenius_norm() const;
  bool all_finite() const;

  /// sn x sn dense copy, block (i, j) at rows i*n.., cols j*n..
  DenseMatrix assemble() const;

 private:
  int index(int i, int j) const { return i * s_ + j; }

  int s_;
  int n_;
  std::vector<DenseMatrix> blocks_;
};

/// ||x - y||_F over the whole grid.
double frobenius_distance(const BlockGrid& x, const BlockGrid& y);

/// Implicit operator Id - h (A (x) Id) diag(B_1..B_s); block (i,k) is
/// delta_ik Id - h a_ik B_k. Never materialised.
struct LeftStageFactor {
  double h;
  CoefficientTable a;
  std::vector<DenseMatrix> b_blocks;
};

/// Implicit operator Id + h diag(B_1..B_s) (A^T (x) Id); block (l,j) is
/// delta_lj Id + h B_l a_jl.
struct RightStageFactor {
  double h;
  CoefficientTable a;
  std::vector<DenseMatrix> b_blocks;
};

/// L X R computed blockwise with 2 s^2 n x n products.
BlockGrid blockgrid_residual_product(const LeftStageFactor& left, const BlockGrid& x,
                                     const RightStageFactor& right);

/// L X R - X, accumulated from the h-proportional terms only. Solvers use
/// this form so the correction is not swamped by cancellation against X.
BlockGrid blockgrid_correction(const LeftStageFactor& left, const BlockGrid& x,
                               const RightStageFactor& right);

}  // namespace isork
