#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace mvce {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dense n x d matrix of observations, one point per row.
///
/// Requires n >= d >= 1 and finite entries. Full column rank is not checked
/// here; factorizations of the Gram matrix raise RankDeficient instead.
class DataMatrix {
 public:
  explicit DataMatrix(RowMatrix values);

  std::size_t rows() const noexcept { return static_cast<std::size_t>(values_.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(values_.cols()); }
  const RowMatrix& values() const noexcept { return values_; }
  auto row(std::size_t i) const { return values_.row(static_cast<Eigen::Index>(i)); }

  /// Rows in the given order. The result must still have at least d rows.
  DataMatrix select_rows(std::span<const std::size_t> indices) const;

 private:
  RowMatrix values_;
};

/// Symmetric positive definite matrix with its Cholesky factor.
///
/// The input is symmetrized as (A + A^T)/2. A Cholesky pivot at or below
/// 1e-12 times the largest diagonal entry raises RankDeficient.
class SpdMatrix {
 public:
  explicit SpdMatrix(const Matrix& values);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(values_.rows()); }
  const Matrix& matrix() const noexcept { return values_; }
  const Matrix& cholesky_lower() const noexcept { return lower_; }

  Matrix inverse() const;
  /// Solves A x = b.
  Vector solve(const Vector& b) const;

 private:
  Matrix values_;
  Matrix lower_;
};

/// X^T X, or sum_i w_i x_i x_i^T when weights are given.
SpdMatrix gram(const DataMatrix& x, std::optional<std::span<const double>> weights = std::nullopt);

/// Unfactored version of gram() for callers that handle singular results.
Matrix gram_matrix(const RowMatrix& x, std::optional<std::span<const double>> weights = std::nullopt);

/// log det(A) = 2 * sum log L_ii.
double log_det(const SpdMatrix& a);

struct GenEigs {
  double lambda_min;
  double lambda_max;
};

/// Extreme roots of det(A - lambda B) = 0, via Cholesky whitening of B.
GenEigs extreme_gen_eigs(const SpdMatrix& a, const SpdMatrix& b);

/// All roots of det(A - lambda B) = 0 in ascending order.
Vector gen_eigs(const SpdMatrix& a, const SpdMatrix& b);

enum class MatrixFormat { csv, bin };

/// Picks bin for ".bin"/".mvce" extensions and csv otherwise.
MatrixFormat format_from_path(const std::filesystem::path& path);

DataMatrix load_matrix(const std::filesystem::path& path, MatrixFormat format, bool header = false);
void save_matrix(const DataMatrix& x, const std::filesystem::path& path, MatrixFormat format);

}  // namespace mvce
