#include <cmath>
#include <numbers>

#include "mvce/solver.hpp"

namespace mvce {

DataMatrix lift_and_center(const DataMatrix& x) {
  RowMatrix z(x.values().rows(), x.values().cols() + 1);
  z.leftCols(x.values().cols()) = x.values();
  z.col(z.cols() - 1).setOnes();
  return DataMatrix(std::move(z));
}

Ellipsoid recover_ellipsoid(const DataMatrix& x, const DesignVector& u) {
  if (u.size() != x.rows()) throw DimensionError("design length does not match row count");
  const auto& xv = x.values();
  Eigen::Map<const Vector> w(u.weights().data(), static_cast<Eigen::Index>(u.size()));
  Ellipsoid e;
  e.center = xv.transpose() * w;
  const Matrix scatter =
      gram_matrix(xv, std::span<const double>(u.weights())) - e.center * e.center.transpose();
  const SpdMatrix spd(scatter);
  const Matrix q0 = spd.inverse();
  const RowMatrix diff = xv.rowwise() - e.center.transpose();
  const double worst = ((diff * q0).array() * diff.array()).rowwise().sum().maxCoeff();
  if (!(worst > 0.0)) throw RankDeficient("degenerate point set");
  e.q = q0 * (static_cast<double>(x.cols()) / worst);
  return e;
}

Ellipsoid centered_ellipsoid(const DualState& state) {
  return Ellipsoid{state.m_inv, Vector::Zero(state.m_inv.rows())};
}

double max_coverage_ratio(const Ellipsoid& e, const DataMatrix& x) {
  if (x.cols() != e.dim()) throw DimensionError("ellipsoid and points differ in dimension");
  const RowMatrix diff = x.values().rowwise() - e.center.transpose();
  const double worst = ((diff * e.q).array() * diff.array()).rowwise().sum().maxCoeff();
  return worst / static_cast<double>(e.dim());
}

double log_volume(const Ellipsoid& e) {
  const double d = static_cast<double>(e.dim());
  // log(d^{d/2}) + log(unit ball volume) - log det(Q) / 2
  const double log_ball = 0.5 * d * std::log(std::numbers::pi) - std::lgamma(0.5 * d + 1.0);
  return 0.5 * d * std::log(d) + log_ball - 0.5 * log_det(SpdMatrix(e.q));
}

double volume(const Ellipsoid& e) { return std::exp(log_volume(e)); }

Ellipsoid min_volume_ellipsoid(const DataMatrix& x, double delta, std::uint64_t seed) {
  const DataMatrix z = lift_and_center(x);
  SolveOptions opts;
  opts.delta = delta;
  const auto solved = solve_wolfe_atwood(z, init_kumar_yildirim(z, seed), opts);
  return recover_ellipsoid(x, solved.state.u);
}

}  // namespace mvce
