#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "mvce/linalg.hpp"

namespace mvce {

enum class LeverageMode { exact, approximate };

/// Per-row leverage scores together with their descending sort order.
struct LeverageProfile {
  std::vector<double> scores;
  /// Row indices sorted by descending score, ties by ascending index.
  std::vector<std::size_t> order;
  LeverageMode mode = LeverageMode::exact;
  /// Relative-error bound of approximate scores; 0 for exact scores.
  double alpha = 0.0;
  std::uint64_t seed = 0;
  /// Column count of the matrix the scores came from.
  std::size_t dim = 0;

  double sum() const;
  std::size_t size() const noexcept { return scores.size(); }

  /// Builds a profile from raw scores, computing the sort order.
  static LeverageProfile from_scores(std::vector<double> scores, std::size_t dim,
                                     LeverageMode mode = LeverageMode::exact, double alpha = 0.0,
                                     std::uint64_t seed = 0);
};

/// Descending order of scores, ties broken by ascending index.
std::vector<std::size_t> descending_order(std::span<const double> scores);

/// Diagonal of X (X^T X)^{-1} X^T, from a thin Householder QR.
LeverageProfile exact_leverage(const DataMatrix& x);

/// Raw exact scores for any full-rank tall matrix (used on rescaled matrices).
std::vector<double> leverage_scores(const RowMatrix& x);

/// Sketch-based estimates with max relative error at most alpha with high probability.
///
/// A CountSketch S with k = max(20 d, ceil(40 log n / alpha^2)) rows is
/// applied, SX = QR is factored, and row norms of X R^{-1} G are returned,
/// where G is a d x p Gaussian with p = ceil(20 / alpha^2). When p >= d the
/// projection is skipped (G = I). Scores are clipped to [0, 1].
LeverageProfile approx_leverage(const DataMatrix& x, double alpha, std::uint64_t seed);

struct ScaledRowLeverage {
  double own;
  std::vector<double> cross;
};

/// Closed-form leverage scores after scaling row i of X by a.
ScaledRowLeverage scaled_row_leverage(const DataMatrix& x, std::size_t i, double a);

struct TailLeverage {
  double tail_weighted;
  double tail_plain;
};

/// Tail sums (rows s..n-1) of leverage of sqrt(U) X and of X.
/// Rows of X must already be sorted by descending plain leverage.
TailLeverage weighted_tail_leverage(const DataMatrix& x, std::span<const double> u, std::size_t s);

/// CSV with columns row_index,score,rank (rank 1 = largest score).
void save_leverage_csv(const LeverageProfile& profile, const std::filesystem::path& path);

}  // namespace mvce
