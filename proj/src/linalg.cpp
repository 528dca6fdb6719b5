#include "isork/linalg.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "isork/errors.hpp"

namespace isork {

SquareMatrix::SquareMatrix(DenseMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
    throw InvalidArgument("SquareMatrix: expected a non-empty square matrix, got " +
                          std::to_string(entries_.rows()) + "x" + std::to_string(entries_.cols()));
  }
  if (!entries_.allFinite()) {
    throw InvalidArgument("SquareMatrix: non-finite entry");
  }
}

SquareMatrix SquareMatrix::zero(int n) {
  if (n <= 0) throw InvalidArgument("SquareMatrix::zero: n must be positive");
  return SquareMatrix(DenseMatrix::Zero(n, n));
}

SquareMatrix SquareMatrix::identity(int n) {
  if (n <= 0) throw InvalidArgument("SquareMatrix::identity: n must be positive");
  return SquareMatrix(DenseMatrix::Identity(n, n));
}

SquareMatrix SquareMatrix::diagonal(std::initializer_list<double> values) {
  const int n = static_cast<int>(values.size());
  DenseMatrix d = DenseMatrix::Zero(n, n);
  int i = 0;
  for (double v : values) {
    d(i, i) = v;
    ++i;
  }
  return SquareMatrix(std::move(d));
}

SquareMatrix SquareMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const int n = static_cast<int>(rows.size());
  DenseMatrix d(n, n);
  int i = 0;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != n) {
      throw InvalidArgument("SquareMatrix::from_rows: ragged or non-square rows");
    }
    int j = 0;
    for (double v : row) d(i, j++) = v;
    ++i;
  }
  return SquareMatrix(std::move(d));
}

SquareMatrix SquareMatrix::transpose() const { return SquareMatrix(entries_.transpose()); }

bool SquareMatrix::is_skew(double rel_tol) const {
  return (entries_ + entries_.transpose()).norm() <= rel_tol * (1.0 + entries_.norm());
}

SquareMatrix& SquareMatrix::operator+=(const SquareMatrix& other) {
  require_same_dimension(*this, other, "operator+=");
  *this = SquareMatrix(entries_ + other.entries_);
  return *this;
}

SquareMatrix& SquareMatrix::operator-=(const SquareMatrix& other) {
  require_same_dimension(*this, other, "operator-=");
  *this = SquareMatrix(entries_ - other.entries_);
  return *this;
}

SquareMatrix operator+(const SquareMatrix& a, const SquareMatrix& b) {
  require_same_dimension(a, b, "operator+");
  return SquareMatrix(a.entries_ + b.entries_);
}

SquareMatrix operator-(const SquareMatrix& a, const SquareMatrix& b) {
  require_same_dimension(a, b, "operator-");
  return SquareMatrix(a.entries_ - b.entries_);
}

SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
  require_same_dimension(a, b, "operator*");
  return SquareMatrix(a.entries_ * b.entries_);
}

SquareMatrix operator*(double alpha, const SquareMatrix& a) { return SquareMatrix(alpha * a.entries_); }

SquareMatrix operator-(const SquareMatrix& a) { return SquareMatrix(-a.entries_); }

void require_same_dimension(const SquareMatrix& a, const SquareMatrix& b, std::string_view op) {
  if (a.n() != b.n()) {
    throw DimensionMismatch(std::string(op) + ": dimension mismatch (" + std::to_string(a.n()) + " vs " +
                            std::to_string(b.n()) + ")");
  }
}

SquareMatrix commutator(const SquareMatrix& a, const SquareMatrix& b) {
  require_same_dimension(a, b, "commutator");
  const DenseMatrix& x = a.dense();
  const DenseMatrix& y = b.dense();
  return SquareMatrix(x * y - y * x);
}

double frobenius_inner(const SquareMatrix& a, const SquareMatrix& b) {
  require_same_dimension(a, b, "frobenius_inner");
  return a.dense().cwiseProduct(b.dense()).sum();
}

std::vector<double> spectral_invariants(const SquareMatrix& w, int kmax) {
  if (kmax < 1) throw InvalidArgument("spectral_invariants: kmax must be >= 1");
  std::vector<double> traces;
  traces.reserve(static_cast<std::size_t>(kmax));
  DenseMatrix power = w.dense();
  traces.push_back(power.trace());
  for (int k = 2; k <= kmax; ++k) {
    power = power * w.dense();
    traces.push_back(power.trace());
  }
  return traces;
}

SquareMatrix cayley(const SquareMatrix& nu) {
  const int n = nu.n();
  const DenseMatrix id = DenseMatrix::Identity(n, n);
  const DenseMatrix lhs = id - 0.5 * nu.dense();
  const DenseMatrix rhs = id + 0.5 * nu.dense();

  const Eigen::PartialPivLU<DenseMatrix> lu(lhs);
  const double threshold = 1e-13 * lhs.norm();
  const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (!(min_pivot >= threshold) || min_pivot == 0.0) {
    const double rcond = lu.rcond();
    const double condition = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    throw SingularMatrix("cayley: Id - nu/2 is numerically singular (min pivot " + std::to_string(min_pivot) +
                             ", condition estimate " + std::to_string(condition) + ")",
                         condition);
  }
  return SquareMatrix(lu.solve(rhs));
}

namespace {

DenseMatrix uniform_entries(int n, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  DenseMatrix r(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double unit = static_cast<double>(engine() >> 11) * 0x1.0p-53;  // [0, 1)
      r(i, j) = 2.0 * unit - 1.0;
    }
  }
  return r;
}

}  // namespace

SquareMatrix random_skew(int n, std::uint64_t seed) {
  if (n < 2) throw InvalidArgument("random_skew: n must be >= 2");
  const DenseMatrix r = uniform_entries(n, seed);
  DenseMatrix w(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) w(i, j) = 0.5 * (r(i, j) - r(j, i));
  }
  return SquareMatrix(std::move(w));
}

SquareMatrix random_symmetric(int n, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("random_symmetric: n must be >= 1");
  const DenseMatrix r = uniform_entries(n, seed);
  DenseMatrix w(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) w(i, j) = 0.5 * (r(i, j) + r(j, i));
  }
  return SquareMatrix(std::move(w));
}

// ---------------------------------------------------------------------------
// BlockGrid

BlockGrid::BlockGrid(int s, int n) : s_(s), n_(n) {
  if (s <= 0 || n <= 0) throw InvalidArgument("BlockGrid: s and n must be positive");
  blocks_.assign(static_cast<std::size_t>(s) * s, DenseMatrix::Zero(n, n));
}

BlockGrid BlockGrid::uniform(int s, const SquareMatrix& w) {
  BlockGrid grid(s, w.n());
  for (auto& b : grid.blocks_) b = w.dense();
  return grid;
}

double BlockGrid::frobenius_norm() const {
  double sum = 0.0;
  for (const auto& b : blocks_) sum += b.squaredNorm();
  return std::sqrt(sum);
}

bool BlockGrid::all_finite() const {
  for (const auto& b : blocks_) {
    if (!b.allFinite()) return false;
  }
  return true;
}

DenseMatrix BlockGrid::assemble() const {
  DenseMatrix full(s_ * n_, s_ * n_);
  for (int i = 0; i < s_; ++i) {
    for (int j = 0; j < s_; ++j) full.block(i * n_, j * n_, n_, n_) = block(i, j);
  }
  return full;
}

double frobenius_distance(const BlockGrid& x, const BlockGrid& y) {
  if (x.s() != y.s() || x.n() != y.n()) throw DimensionMismatch("frobenius_distance: grid shape mismatch");
  double sum = 0.0;
  for (int i = 0; i < x.s(); ++i) {
    for (int j = 0; j < x.s(); ++j) sum += (x.block(i, j) - y.block(i, j)).squaredNorm();
  }
  return std::sqrt(sum);
}

namespace {

template <class Factor>
void check_factor(const Factor& f, int s, int n, const char* which) {
  if (f.a.rows() != s || f.a.cols() != s || static_cast<int>(f.b_blocks.size()) != s) {
    throw DimensionMismatch(std::string("blockgrid product: ") + which + " factor has wrong stage count");
  }
  for (const auto& b : f.b_blocks) {
    if (b.rows() != n || b.cols() != n) {
      throw DimensionMismatch(std::string("blockgrid product: ") + which + " factor has wrong block size");
    }
  }
}

}  // namespace

BlockGrid blockgrid_correction(const LeftStageFactor& left, const BlockGrid& x, const RightStageFactor& right) {
  const int s = x.s();
  const int n = x.n();
  check_factor(left, s, n, "left");
  check_factor(right, s, n, "right");

  // Right factor: (X R - X)_kj = h sum_l a_jl X_kl B_l.
  std::vector<DenseMatrix> xb(static_cast<std::size_t>(s) * s);
  for (int k = 0; k < s; ++k) {
    for (int l = 0; l < s; ++l) xb[k * s + l].noalias() = x.block(k, l) * right.b_blocks[l];
  }
  BlockGrid right_corr(s, n);
  for (int k = 0; k < s; ++k) {
    for (int j = 0; j < s; ++j) {
      DenseMatrix& acc = right_corr.block(k, j);
      for (int l = 0; l < s; ++l) acc += (right.h * right.a(j, l)) * xb[k * s + l];
    }
  }

  // Left factor on Y = X R: (L Y - Y)_ij = -h sum_k a_ik B_k Y_kj.
  std::vector<DenseMatrix> by(static_cast<std::size_t>(s) * s);
  for (int k = 0; k < s; ++k) {
    for (int j = 0; j < s; ++j) {
      by[k * s + j].noalias() = left.b_blocks[k] * (x.block(k, j) + right_corr.block(k, j));
    }
  }
  BlockGrid out = std::move(right_corr);
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) {
      DenseMatrix& acc = out.block(i, j);
      for (int k = 0; k < s; ++k) acc -= (left.h * left.a(i, k)) * by[k * s + j];
    }
  }
  return out;
}

BlockGrid blockgrid_residual_product(const LeftStageFactor& left, const BlockGrid& x,
                                     const RightStageFactor& right) {
  BlockGrid out = blockgrid_correction(left, x, right);
  for (int i = 0; i < x.s(); ++i) {
    for (int j = 0; j < x.s(); ++j) out.block(i, j) += x.block(i, j);
  }
  return out;
}

}  // namespace isork
