#include "mvce/datagen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

#include <Eigen/QR>

#include "mvce/error.hpp"
#include "mvce/leverage.hpp"
#include "mvce/random.hpp"

namespace mvce {

std::string_view to_string(Family family) {
  switch (family) {
    case Family::rotated_cauchy: return "rotated-cauchy";
    case Family::lognormal: return "lognormal";
    case Family::gaussian: return "gaussian";
    case Family::power_law_leverage: return "power-law-leverage";
  }
  return "?";
}

Family parse_family(std::string_view text) {
  if (text == "rotated-cauchy" || text == "cauchy") return Family::rotated_cauchy;
  if (text == "lognormal") return Family::lognormal;
  if (text == "gaussian") return Family::gaussian;
  if (text == "power-law-leverage" || text == "power-law") return Family::power_law_leverage;
  throw FormatError("unknown dataset family '" + std::string(text) + "'");
}

double DatasetSpec::param(const std::string& key, double fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

namespace {

// Streams 0..blocks-1 are row blocks; these tags are reserved for whole-matrix draws.
constexpr std::uint64_t kRotationStream = 0xFFFF'0001ULL;
constexpr std::uint64_t kShuffleStream = 0xFFFF'0002ULL;

template <typename RowFill>
RowMatrix generate_blocks(const DatasetSpec& spec, RowFill fill) {
  RowMatrix x(static_cast<Eigen::Index>(spec.n), static_cast<Eigen::Index>(spec.d));
  const std::size_t blocks = (spec.n + kGenBlockRows - 1) / kGenBlockRows;
  for (std::size_t b = 0; b < blocks; ++b) {
    Rng rng(derive_seed(spec.seed, b));
    const std::size_t end = std::min(spec.n, (b + 1) * kGenBlockRows);
    for (std::size_t i = b * kGenBlockRows; i < end; ++i) fill(x.row(static_cast<Eigen::Index>(i)), rng);
  }
  return x;
}

Matrix random_orthogonal(Eigen::Index d, Rng& rng) {
  std::normal_distribution<double> normal;
  Matrix g(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  // Sign fix makes the draw Haar distributed.
  for (Eigen::Index j = 0; j < d; ++j) {
    if (qr.matrixQR()(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

// Targets min(cap, c i^{-(1+eta)}) summing to d.
std::vector<double> power_law_targets(std::size_t n, std::size_t d, double eta) {
  const double cap = std::max(0.95, 0.5 * (1.0 + static_cast<double>(d) / static_cast<double>(n)));
  auto total = [&](double c) {
    double sum = 0.0;
    for (std::size_t i = 1; i <= n; ++i) sum += std::min(cap, c * std::pow(static_cast<double>(i), -(1.0 + eta)));
    return sum;
  };
  double lo = 0.0;
  double hi = 1.0;
  while (total(hi) < static_cast<double>(d)) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (total(mid) < static_cast<double>(d) ? lo : hi) = mid;
  }
  std::vector<double> t(n);
  for (std::size_t i = 1; i <= n; ++i) t[i - 1] = std::min(cap, hi * std::pow(static_cast<double>(i), -(1.0 + eta)));
  return t;
}

RowMatrix power_law_matrix(const DatasetSpec& spec) {
  const double eta = spec.param("eta", 1.0);
  if (!(eta > 0.0)) throw InvalidArgument("eta must be positive");
  RowMatrix g = generate_blocks(spec, [](auto row, Rng& rng) {
    std::normal_distribution<double> normal;
    for (Eigen::Index j = 0; j < row.size(); ++j) row(j) = normal(rng);
  });
  const auto n = g.rows();
  const auto d = g.cols();
  Eigen::HouseholderQR<Matrix> qr{Matrix(g)};
  RowMatrix x = RowMatrix(qr.householderQ() * Matrix::Identity(n, d));

  if (spec.n > spec.d) {
    const auto targets = power_law_targets(spec.n, spec.d, eta);
    // Diagonal rescaling until the leverage profile matches the targets.
    for (int it = 0; it < 200; ++it) {
      const auto lev = leverage_scores(x);
      double worst = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        worst = std::max(worst, std::abs(lev[k] / targets[k] - 1.0));
        x.row(i) *= std::sqrt(targets[k] / lev[k]);
      }
      if (worst < 1e-9) break;
    }
    x /= x.rowwise().norm().maxCoeff();
  }

  Rng shuffle_rng(derive_seed(spec.seed, kShuffleStream));
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  for (std::size_t k = perm.size(); k > 1; --k) {
    std::uniform_int_distribution<std::size_t> pick(0, k - 1);
    std::swap(perm[k - 1], perm[pick(shuffle_rng)]);
  }
  Rng rot_rng(derive_seed(spec.seed, kRotationStream));
  const Matrix rot = random_orthogonal(d, rot_rng);
  RowMatrix out(n, d);
  for (Eigen::Index i = 0; i < n; ++i) out.row(i) = x.row(perm[static_cast<std::size_t>(i)]) * rot;
  return out;
}

}  // namespace

DataMatrix generate(const DatasetSpec& spec) {
  if (spec.d < 1 || spec.n < spec.d) {
    throw DimensionError("dataset must satisfy n >= d >= 1");
  }
  switch (spec.family) {
    case Family::gaussian:
      return DataMatrix(generate_blocks(spec, [](auto row, Rng& rng) {
        std::normal_distribution<double> normal;
        for (Eigen::Index j = 0; j < row.size(); ++j) row(j) = normal(rng);
      }));
    case Family::lognormal: {
      const double sigma = spec.param("sigma", 2.0);
      if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
      return DataMatrix(generate_blocks(spec, [sigma](auto row, Rng& rng) {
        std::normal_distribution<double> normal(0.0, sigma);
        for (Eigen::Index j = 0; j < row.size(); ++j) row(j) = std::exp(normal(rng));
      }));
    }
    case Family::rotated_cauchy:
      return DataMatrix(generate_blocks(spec, [](auto row, Rng& rng) {
        std::normal_distribution<double> normal;
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        double norm = 0.0;
        do {
          for (Eigen::Index j = 0; j < row.size(); ++j) row(j) = normal(rng);
          norm = row.norm();
        } while (norm == 0.0);
        const double radius = std::abs(std::tan(std::numbers::pi * (unif(rng) - 0.5)));
        row *= radius / norm;
      }));
    case Family::power_law_leverage:
      return DataMatrix(power_law_matrix(spec));
  }
  throw InvalidArgument("unhandled family");
}

std::string describe(const DatasetSpec& spec) {
  std::ostringstream out;
  out.precision(17);
  out << to_string(spec.family) << " n=" << spec.n << " d=" << spec.d << " seed=" << spec.seed;
  for (const auto& [k, v] : spec.params) out << ' ' << k << '=' << v;
  return out.str();
}

DatasetSpec parse_dataset_spec(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string token;
  if (!(in >> token)) throw FormatError("empty dataset description");
  DatasetSpec spec;
  spec.family = parse_family(token);
  bool have_n = false;
  bool have_d = false;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0) throw FormatError("expected key=value, got '" + token + "'");
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    auto parse_uint = [&](auto& dst) {
      auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), dst);
      if (ec != std::errc() || p != value.data() + value.size()) {
        throw FormatError("bad integer for " + key + ": '" + value + "'");
      }
    };
    if (key == "n") {
      parse_uint(spec.n);
      have_n = true;
    } else if (key == "d") {
      parse_uint(spec.d);
      have_d = true;
    } else if (key == "seed") {
      parse_uint(spec.seed);
    } else if (key == "sigma" || key == "eta") {
      double v = 0.0;
      auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
      if (ec != std::errc() || p != value.data() + value.size()) {
        throw FormatError("bad number for " + key + ": '" + value + "'");
      }
      spec.params[key] = v;
    } else {
      throw FormatError("unknown dataset key '" + key + "'");
    }
  }
  if (!have_n || !have_d) throw FormatError("dataset description needs n= and d=");
  return spec;
}

}  // namespace mvce
