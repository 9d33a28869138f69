#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

#include "doctest.h"
#include "mvce/datagen.hpp"
#include "mvce/error.hpp"
#include "mvce/leverage.hpp"

using namespace mvce;

namespace {

double loglog_slope(std::vector<double> scores) {
  std::sort(scores.begin(), scores.end(), std::greater<>());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double a = std::log(static_cast<double>(i + 1));
    const double b = std::log(scores[i]);
    sx += a;
    sy += b;
    sxx += a * a;
    sxy += a * b;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

TEST_CASE("gaussian leverage is close to uniform") {
  int good = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto p = exact_leverage(generate({Family::gaussian, 100, 10, seed, {}}));
    const auto [lo, hi] = std::minmax_element(p.scores.begin(), p.scores.end());
    if (*hi / *lo < 50.0) ++good;
  }
  CHECK(good >= 95);
}

TEST_CASE("rotated cauchy leverage concentrates on few rows") {
  int good = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto p = exact_leverage(generate({Family::rotated_cauchy, 10000, 10, seed, {}}));
    double top = 0.0;
    for (std::size_t k = 0; k < 100; ++k) top += p.scores[p.order[k]];
    if (top >= 0.5 * p.sum()) ++good;
  }
  CHECK(good >= 95);
}

TEST_CASE("power-law family follows its exponent") {
  for (std::uint64_t seed : {0, 1, 2}) {
    const auto p = exact_leverage(generate({Family::power_law_leverage, 1000, 10, seed, {{"eta", 1.0}}}));
    const double slope = loglog_slope(p.scores);
    CHECK(slope >= -2.4);
    CHECK(slope <= -1.6);
  }
}

TEST_CASE("generation is deterministic and seed sensitive") {
  for (auto fam : {Family::rotated_cauchy, Family::lognormal, Family::gaussian, Family::power_law_leverage}) {
    const DatasetSpec spec{fam, 5000, 6, 42, {}};
    const auto a = generate(spec);
    const auto b = generate(spec);
    CHECK(std::memcmp(a.values().data(), b.values().data(), sizeof(double) * 5000 * 6) == 0);
    auto other = spec;
    other.seed = 43;
    CHECK(generate(other).values() != a.values());
  }
}

TEST_CASE("blocks do not depend on the total row count") {
  const auto small = generate({Family::gaussian, 5000, 4, 9, {}});
  const auto large = generate({Family::gaussian, 9000, 4, 9, {}});
  CHECK(small.values().topRows(5000) == large.values().topRows(5000));
}

TEST_CASE("all families are full rank") {
  for (auto fam : {Family::rotated_cauchy, Family::lognormal, Family::gaussian, Family::power_law_leverage}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const std::size_t d = 2 + seed % 9;
      CHECK_NOTHROW(gram(generate({fam, d + 5, d, seed, {}})));
    }
  }
}

TEST_CASE("describe and parse round trip") {
  const DatasetSpec g{Family::gaussian, 1000, 10, 7, {}};
  CHECK(describe(g) == "gaussian n=1000 d=10 seed=7");
  const DatasetSpec l{Family::lognormal, 300, 4, 1, {{"sigma", 1.5}}};
  const auto back = parse_dataset_spec(describe(l));
  CHECK(back.family == Family::lognormal);
  CHECK(back.n == 300);
  CHECK(back.d == 4);
  CHECK(back.seed == 1);
  CHECK(back.param("sigma", 0.0) == 1.5);
  CHECK(describe(back) == describe(l));
  CHECK(parse_dataset_spec("cauchy n=10 d=2").family == Family::rotated_cauchy);
}

TEST_CASE("bad dataset specs") {
  CHECK_THROWS_AS(parse_dataset_spec("banana n=10 d=2"), FormatError);
  CHECK_THROWS_AS(parse_dataset_spec("gaussian n=10 d=2 colour=3"), FormatError);
  CHECK_THROWS_AS(parse_dataset_spec("gaussian n=10"), FormatError);
  CHECK_THROWS_AS(parse_family("uniform"), FormatError);
}
