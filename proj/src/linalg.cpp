#include "mvce/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "mvce/error.hpp"

namespace mvce {

DataMatrix::DataMatrix(RowMatrix values) : values_(std::move(values)) {
  if (values_.cols() < 1 || values_.rows() < values_.cols()) {
    throw DimensionError("data matrix must satisfy n >= d >= 1, got " +
                         std::to_string(values_.rows()) + "x" + std::to_string(values_.cols()));
  }
  if (!values_.allFinite()) throw InvalidArgument("data matrix has non-finite entries");
}

DataMatrix DataMatrix::select_rows(std::span<const std::size_t> indices) const {
  RowMatrix out(static_cast<Eigen::Index>(indices.size()), values_.cols());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] >= rows()) throw DimensionError("row index out of range");
    out.row(static_cast<Eigen::Index>(k)) = values_.row(static_cast<Eigen::Index>(indices[k]));
  }
  return DataMatrix(std::move(out));
}

SpdMatrix::SpdMatrix(const Matrix& values) {
  if (values.rows() != values.cols() || values.rows() == 0) {
    throw DimensionError("SPD matrix must be square and non-empty");
  }
  if (!values.allFinite()) throw RankDeficient("matrix has non-finite entries");
  values_ = 0.5 * (values + values.transpose());

  const double max_diag = values_.diagonal().maxCoeff();
  if (!(max_diag > 0.0)) throw RankDeficient("matrix has no positive diagonal entry");
  const double threshold = 1e-12 * max_diag;

  // Plain left-looking Cholesky so the pivot test sees each pivot before sqrt.
  const Eigen::Index d = values_.rows();
  lower_ = Matrix::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    double pivot = values_(j, j) - lower_.row(j).head(j).squaredNorm();
    if (!(pivot > threshold)) {
      throw RankDeficient("Cholesky pivot " + std::to_string(j) + " is " + std::to_string(pivot) +
                          ", threshold " + std::to_string(threshold));
    }
    const double ljj = std::sqrt(pivot);
    lower_(j, j) = ljj;
    for (Eigen::Index i = j + 1; i < d; ++i) {
      lower_(i, j) = (values_(i, j) - lower_.row(i).head(j).dot(lower_.row(j).head(j))) / ljj;
    }
  }
}

Matrix SpdMatrix::inverse() const {
  const auto d = values_.rows();
  Matrix linv = lower_.triangularView<Eigen::Lower>().solve(Matrix::Identity(d, d));
  Matrix inv = linv.transpose() * linv;
  return 0.5 * (inv + inv.transpose());
}

Vector SpdMatrix::solve(const Vector& b) const {
  Vector y = lower_.triangularView<Eigen::Lower>().solve(b);
  return lower_.transpose().triangularView<Eigen::Upper>().solve(y);
}

Matrix gram_matrix(const RowMatrix& x, std::optional<std::span<const double>> weights) {
  const auto d = x.cols();
  Matrix out = Matrix::Zero(d, d);
  if (!weights) {
    out.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose());
  } else {
    if (weights->size() != static_cast<std::size_t>(x.rows())) {
      throw DimensionError("weight vector length does not match row count");
    }
    Eigen::Map<const Vector> w(weights->data(), x.rows());
    if ((w.array() < 0.0).any()) throw InvalidArgument("weights must be nonnegative");
    RowMatrix scaled = w.array().sqrt().matrix().asDiagonal() * x;
    out.selfadjointView<Eigen::Lower>().rankUpdate(scaled.transpose());
  }
  out.triangularView<Eigen::StrictlyUpper>() = out.transpose();
  return out;
}

SpdMatrix gram(const DataMatrix& x, std::optional<std::span<const double>> weights) {
  return SpdMatrix(gram_matrix(x.values(), weights));
}

double log_det(const SpdMatrix& a) {
  return 2.0 * a.cholesky_lower().diagonal().array().log().sum();
}

Vector gen_eigs(const SpdMatrix& a, const SpdMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("pencil matrices differ in dimension");
  const auto& l = b.cholesky_lower();
  // C = L^{-1} A L^{-T}
  Matrix tmp = l.triangularView<Eigen::Lower>().solve(a.matrix());
  Matrix c = l.triangularView<Eigen::Lower>().solve(tmp.transpose());
  c = 0.5 * (c + c.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(c, Eigen::EigenvaluesOnly);
  return eig.eigenvalues();
}

GenEigs extreme_gen_eigs(const SpdMatrix& a, const SpdMatrix& b) {
  Vector ev = gen_eigs(a, b);
  return {ev(0), ev(ev.size() - 1)};
}

}  // namespace mvce
