#include "mvce/leverage.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <string>

#include <Eigen/QR>

#include "mvce/error.hpp"
#include "mvce/random.hpp"

namespace mvce {

double LeverageProfile::sum() const { return std::accumulate(scores.begin(), scores.end(), 0.0); }

LeverageProfile LeverageProfile::from_scores(std::vector<double> scores, std::size_t dim,
                                             LeverageMode mode, double alpha,
                                             std::uint64_t seed) {
  LeverageProfile p;
  p.order = descending_order(scores);
  p.scores = std::move(scores);
  p.mode = mode;
  p.alpha = alpha;
  p.seed = seed;
  p.dim = dim;
  return p;
}

std::vector<std::size_t> descending_order(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

namespace {

// |R_jj|^2 <= 1e-12 * max column norm^2 mirrors the Gram pivot threshold.
bool r_factor_singular(const Matrix& r, const RowMatrix& x) {
  const double max_col = x.colwise().squaredNorm().maxCoeff();
  for (Eigen::Index j = 0; j < r.cols(); ++j) {
    if (!(r(j, j) * r(j, j) > 1e-12 * max_col)) return true;
  }
  return false;
}

}  // namespace

std::vector<double> leverage_scores(const RowMatrix& x) {
  const auto n = x.rows();
  const auto d = x.cols();
  Eigen::HouseholderQR<Matrix> qr{Matrix(x)};
  Matrix r = qr.matrixQR().topRows(d).triangularView<Eigen::Upper>();
  if (r_factor_singular(r, x)) throw RankDeficient("matrix is rank deficient; leverage undefined");
  Matrix q = qr.householderQ() * Matrix::Identity(n, d);
  std::vector<double> scores(static_cast<std::size_t>(n));
  Eigen::Map<Vector>(scores.data(), n) = q.rowwise().squaredNorm();
  return scores;
}

LeverageProfile exact_leverage(const DataMatrix& x) {
  return LeverageProfile::from_scores(leverage_scores(x.values()), x.cols());
}

LeverageProfile approx_leverage(const DataMatrix& x, double alpha, std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  const auto n = static_cast<Eigen::Index>(x.rows());
  const auto d = static_cast<Eigen::Index>(x.cols());
  const auto k = std::max<Eigen::Index>(
      20 * d, static_cast<Eigen::Index>(std::ceil(40.0 * std::log(static_cast<double>(n)) /
                                                  (alpha * alpha))));
  const auto p = static_cast<Eigen::Index>(std::ceil(20.0 / (alpha * alpha)));
  if (k < d) throw SketchTooSmall("sketch has fewer rows than columns");

  Rng rng(derive_seed(seed, 0));
  std::uniform_int_distribution<Eigen::Index> bucket(0, k - 1);
  std::bernoulli_distribution coin(0.5);

  // CountSketch: each row lands in one bucket with a random sign.
  Matrix sx = Matrix::Zero(k, d);
  const auto& xv = x.values();
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto b = bucket(rng);
    if (coin(rng)) {
      sx.row(b) += xv.row(i);
    } else {
      sx.row(b) -= xv.row(i);
    }
  }

  Eigen::HouseholderQR<Matrix> qr(sx);
  Matrix r = qr.matrixQR().topRows(d).triangularView<Eigen::Upper>();
  if (r_factor_singular(r, xv)) {
    // Distinguish a bad sketch from a rank-deficient input.
    (void)gram(x);
    throw SketchTooSmall("sketched matrix lost rank; increase the sketch size");
  }

  std::vector<double> scores(static_cast<std::size_t>(n));
  Eigen::Map<Vector> out(scores.data(), n);
  if (p >= d) {
    // X R^{-1}: rows are x_i^T R^{-1}.
    RowMatrix z = r.transpose().triangularView<Eigen::Lower>().solve(xv.transpose()).transpose();
    out = z.rowwise().squaredNorm();
  } else {
    Rng grng(derive_seed(seed, 1));
    std::normal_distribution<double> normal;
    Matrix g(d, p);
    for (Eigen::Index j = 0; j < p; ++j)
      for (Eigen::Index i = 0; i < d; ++i) g(i, j) = normal(grng);
    Matrix omega = r.triangularView<Eigen::Upper>().solve(g);
    RowMatrix z = xv * omega;
    out = z.rowwise().squaredNorm() / static_cast<double>(p);
  }
  out = out.cwiseMax(0.0).cwiseMin(1.0);
  return LeverageProfile::from_scores(std::move(scores), x.cols(), LeverageMode::approximate,
                                      alpha, seed);
}

ScaledRowLeverage scaled_row_leverage(const DataMatrix& x, std::size_t i, double a) {
  if (i >= x.rows()) throw DimensionError("row index out of range");
  if (!(a >= 0.0) || !std::isfinite(a)) throw InvalidArgument("scale must be finite and >= 0");
  const SpdMatrix m = gram(x);
  const auto& l = m.cholesky_lower();
  const auto& xv = x.values();
  // W = X L^{-T}; then x_j^T M^{-1} x_k = w_j . w_k.
  RowMatrix w = l.triangularView<Eigen::Lower>().solve(xv.transpose()).transpose();
  const Vector lev = w.rowwise().squaredNorm();
  const Vector cross_ip = w * w.row(static_cast<Eigen::Index>(i)).transpose();

  const double li = lev(static_cast<Eigen::Index>(i));
  const double a2m1 = a * a - 1.0;
  const double denom = 1.0 + a2m1 * li;
  if (!(denom > 1e-14)) throw DegenerateScale("scaling annihilates a leverage-one row");

  ScaledRowLeverage out;
  out.own = a * a * li / denom;
  out.cross.resize(x.rows());
  for (Eigen::Index j = 0; j < xv.rows(); ++j) {
    out.cross[static_cast<std::size_t>(j)] = lev(j) - a2m1 * cross_ip(j) * cross_ip(j) / denom;
  }
  out.cross[i] = out.own;
  return out;
}

TailLeverage weighted_tail_leverage(const DataMatrix& x, std::span<const double> u, std::size_t s) {
  if (u.size() != x.rows()) throw DimensionError("weight vector length does not match row count");
  if (s > x.rows()) throw DimensionError("cut exceeds row count");
  const auto plain = leverage_scores(x.values());
  for (std::size_t i = 1; i < plain.size(); ++i) {
    if (plain[i] > plain[i - 1] + 1e-12) {
      throw InvalidArgument("rows must be sorted by descending leverage");
    }
  }
  Eigen::Map<const Vector> w(u.data(), static_cast<Eigen::Index>(u.size()));
  if ((w.array() < 0.0).any()) throw InvalidArgument("weights must be nonnegative");
  RowMatrix y = w.array().sqrt().matrix().asDiagonal() * x.values();
  const auto weighted = leverage_scores(y);
  TailLeverage out{0.0, 0.0};
  for (std::size_t i = s; i < plain.size(); ++i) {
    out.tail_weighted += weighted[i];
    out.tail_plain += plain[i];
  }
  return out;
}

void save_leverage_csv(const LeverageProfile& profile, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError("cannot write " + path.string());
  std::vector<std::size_t> rank(profile.size());
  for (std::size_t r = 0; r < profile.order.size(); ++r) rank[profile.order[r]] = r + 1;
  out.precision(17);
  out << "row_index,score,rank\n";
  for (std::size_t i = 0; i < profile.size(); ++i) {
    out << i << ',' << profile.scores[i] << ',' << rank[i] << '\n';
  }
}

}  // namespace mvce
