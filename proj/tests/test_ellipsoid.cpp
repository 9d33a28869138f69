#include <cmath>
#include <numbers>

#include "doctest.h"
#include "mvce/solver.hpp"
#include "test_support.hpp"

using namespace mvce;
using namespace mvce::testing;

TEST_CASE("volume formula") {
  Ellipsoid circle{Matrix::Identity(2, 2), Vector::Zero(2)};
  CHECK(volume(circle) == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-14));
  Ellipsoid interval{Matrix::Identity(1, 1), Vector::Zero(1)};
  CHECK(volume(interval) == doctest::Approx(2.0).epsilon(1e-14));

  const Matrix q = random_spd(4, 3);
  Ellipsoid e{q, Vector::Zero(4)};
  Ellipsoid scaled{5.0 * q, Vector::Zero(4)};
  CHECK(volume(scaled) / volume(e) == doctest::Approx(std::pow(5.0, -2.0)).epsilon(1e-12));
  CHECK(log_volume(e) == doctest::Approx(std::log(volume(e))).epsilon(1e-12));
}

TEST_CASE("translated square is recovered exactly") {
  RowMatrix x(4, 2);
  x << 0, 0, 2, 0, 0, 2, 2, 2;
  const auto e = min_volume_ellipsoid(DataMatrix(x), 1e-9);
  CHECK(std::abs(e.center(0) - 1.0) < 1e-8);
  CHECK(std::abs(e.center(1) - 1.0) < 1e-8);
  CHECK(std::abs(e.q(0, 1)) < 1e-8);
  CHECK(e.q(0, 0) == doctest::Approx(e.q(1, 1)).epsilon(1e-8));
  const Vector ratios = ((x.rowwise() - e.center.transpose()) * e.q * (x.rowwise() - e.center.transpose()).transpose())
                            .diagonal() / 2.0;
  for (Eigen::Index i = 0; i < 4; ++i) CHECK(ratios(i) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(max_coverage_ratio(e, DataMatrix(x)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("symmetric data gives a zero center") {
  const RowMatrix half = random_matrix(25, 3, 9);
  RowMatrix x(50, 3);
  x << half, -half;
  const auto e = min_volume_ellipsoid(DataMatrix(x), 1e-9);
  CHECK(e.center.cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("translation moves only the center") {
  const RowMatrix x = random_matrix(40, 3, 10);
  RowMatrix y = x;
  const Eigen::RowVector3d shift(4.0, -2.0, 7.5);
  y.rowwise() += shift;
  const auto a = min_volume_ellipsoid(DataMatrix(x), 1e-10);
  const auto b = min_volume_ellipsoid(DataMatrix(y), 1e-10);
  CHECK((b.center - a.center - shift.transpose()).cwiseAbs().maxCoeff() < 1e-6);
  CHECK((b.q - a.q).cwiseAbs().maxCoeff() < 1e-6 * a.q.cwiseAbs().maxCoeff());
}

TEST_CASE("recovered ellipsoid covers every point") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const DataMatrix x(random_matrix(80, 3, seed + 60));
    const auto e = min_volume_ellipsoid(x, 1e-7, seed);
    CHECK(max_coverage_ratio(e, x) <= 1.0 + 1e-12);
  }
}

TEST_CASE("centered ellipsoid of a certified state covers the data") {
  const DataMatrix x(random_matrix(100, 3, 70));
  const auto r = solve_wolfe_atwood(x, init_kumar_yildirim(x, 0), {.delta = 1e-6});
  const auto e = centered_ellipsoid(r.state);
  CHECK(e.center.isZero());
  CHECK(max_coverage_ratio(e, x) <= 1.0 + 1e-6 + 1e-12);
}
