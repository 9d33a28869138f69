#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "mvce/error.hpp"
#include "mvce/linalg.hpp"

namespace mvce {

/// Weights below this are treated as zero and removed from the support.
inline constexpr double kSupportTol = 1e-14;

/// Probability weights on the rows of a data matrix.
class DesignVector {
 public:
  DesignVector() = default;
  /// Weights must be nonnegative and sum to 1 within 1e-9; they are renormalized.
  explicit DesignVector(std::vector<double> weights);

  const std::vector<double>& weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  std::vector<std::size_t> support() const;

 private:
  std::vector<double> weights_;
};

/// Dual iterate with its moment matrix M = X^T U X, inverse, g = log det M
/// and the scaled distances xi_i = x_i^T M^{-1} x_i.
struct DualState {
  DesignVector u;
  Matrix m;
  Matrix m_inv;
  double g = 0.0;
  Vector xi;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(m.rows()); }
};

/// Computes every field of the state from scratch.
DualState make_state(const DataMatrix& x, const DesignVector& u);

enum class CertificateKind { primal_feasible, approx_optimal };
std::string_view to_string(CertificateKind kind);

struct Certificate {
  CertificateKind kind = CertificateKind::primal_feasible;
  double delta = 0.0;
  /// d log(1 + delta): distance to the optimal dual value.
  double gap_bound = 0.0;
  std::size_t iterations = 0;
  double runtime_ms = 0.0;
  double max_xi = 0.0;
  double min_support_xi = 0.0;
};

/// Classifies the state; throws NotFeasible if max xi > (1 + delta) d.
Certificate certify(const DualState& state, double delta);

struct SolveOptions {
  double delta = 1e-7;
  std::size_t max_iter = 10'000'000;
  /// Full refactorization period, in rank-one updates.
  std::size_t refactor_every = 500;
  bool record_trace = false;
};

struct SolveResult {
  DualState state;
  Certificate certificate;
  /// g after every iteration when SolveOptions::record_trace is set.
  std::vector<double> g_trace;
};

/// Raised when a solver exhausts its iteration budget; carries the last iterate.
class MaxIterations : public Error {
 public:
  MaxIterations(const std::string& what, SolveResult last) : Error(what), last_(std::move(last)) {}
  const SolveResult& last() const noexcept { return last_; }

 private:
  SolveResult last_;
};

/// Uniform weights 1/m.
DesignVector init_khachiyan(std::size_t m);

/// At most 2d points spanning R^d with equal weights, chosen by extreme
/// projections onto random directions orthogonal to the current span.
DesignVector init_kumar_yildirim(const DataMatrix& x, std::uint64_t seed);

/// Frank-Wolfe ascent with away steps on log det(X^T U X) until u is
/// delta-approximately optimal.
SolveResult solve_wolfe_atwood(const DataMatrix& x, const DesignVector& u0,
                               const SolveOptions& options = {});

/// Multiplicative iteration u_i <- u_i xi_i / d; stops once delta-primal feasible.
SolveResult solve_fixed_point(const DataMatrix& x, const DesignVector& u0,
                              const SolveOptions& options = {});

/// g* - g_s(u0) < d log(s / (1 - epsilon)).
double bound_initial_gap(double d, double s, double epsilon);
/// g* - g_s* < d log((1 + delta) / (1 - epsilon)).
double bound_final_gap(double d, double epsilon, double delta);
/// d log(1 + delta).
double certificate_gap(double d, double delta);

/// E = { x : (x - center)^T Q (x - center) <= d }.
struct Ellipsoid {
  Matrix q;
  Vector center;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(q.rows()); }
};

/// Appends a constant coordinate 1 to every row.
DataMatrix lift_and_center(const DataMatrix& x);

/// Recovers the non-centered ellipsoid from a design on the lifted rows.
///
/// center = sum u_i x_i and Q0 = (X^T U X - c c^T)^{-1}, rescaled so the
/// worst row lies exactly on the boundary.
Ellipsoid recover_ellipsoid(const DataMatrix& x, const DesignVector& u);

/// Origin-centered ellipsoid with Q = Q(u).
Ellipsoid centered_ellipsoid(const DualState& state);

/// max_i (x_i - c)^T Q (x_i - c) / d.
double max_coverage_ratio(const Ellipsoid& e, const DataMatrix& x);

double volume(const Ellipsoid& e);
double log_volume(const Ellipsoid& e);

/// Minimum volume covering ellipsoid of the rows of x (any center).
Ellipsoid min_volume_ellipsoid(const DataMatrix& x, double delta, std::uint64_t seed = 0);

}  // namespace mvce
