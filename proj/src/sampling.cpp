#include "mvce/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <utility>

#include "mvce/error.hpp"
#include "mvce/random.hpp"

namespace mvce {

std::string_view to_string(SampleMethod method) {
  switch (method) {
    case SampleMethod::det: return "det";
    case SampleMethod::det_approx: return "det-approx";
    case SampleMethod::uniform: return "uniform";
    case SampleMethod::proportional: return "prop";
  }
  return "?";
}

SampleMethod parse_sample_method(std::string_view text) {
  if (text == "det") return SampleMethod::det;
  if (text == "det-approx") return SampleMethod::det_approx;
  if (text == "uniform") return SampleMethod::uniform;
  if (text == "prop" || text == "proportional") return SampleMethod::proportional;
  throw FormatError("unknown sampling method '" + std::string(text) + "'");
}

namespace {

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0, 1)");
}

template <typename Reached>
SampleSelection prefix_selection(const LeverageProfile& profile, double epsilon,
                                 SampleMethod method, Reached reached) {
  const std::size_t n = profile.size();
  std::size_t s = 0;
  double cumulative = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    cumulative += profile.scores[profile.order[j]];
    if (reached(cumulative)) {
      s = j + 1;
      break;
    }
  }
  if (s == 0) throw ThresholdUnreachable("leverage threshold not reached by the full prefix");
  s = std::max(s, std::min(profile.dim, n));
  SampleSelection sel;
  sel.indices.assign(profile.order.begin(), profile.order.begin() + static_cast<std::ptrdiff_t>(s));
  sel.epsilon = epsilon;
  sel.method = method;
  sel.seed = profile.seed;
  return sel;
}

}  // namespace

SampleSelection sample_deterministic(const LeverageProfile& profile, double epsilon) {
  check_epsilon(epsilon);
  if (profile.mode != LeverageMode::exact) {
    throw InvalidArgument("deterministic sampling requires exact leverage scores");
  }
  const double threshold = static_cast<double>(profile.dim) - epsilon;
  return prefix_selection(profile, epsilon, SampleMethod::det,
                          [&](double c) { return c > threshold; });
}

SampleSelection sample_deterministic_approx(const LeverageProfile& profile, double epsilon) {
  check_epsilon(epsilon);
  const double threshold = profile.sum() - (1.0 - profile.alpha) * epsilon;
  return prefix_selection(profile, epsilon, SampleMethod::det_approx,
                          [&](double c) { return c >= threshold; });
}

SampleSelection sample_top(const LeverageProfile& profile, std::size_t s) {
  if (s < profile.dim || s > profile.size()) throw DimensionError("sample size outside [d, n]");
  SampleSelection sel;
  sel.indices.assign(profile.order.begin(), profile.order.begin() + static_cast<std::ptrdiff_t>(s));
  sel.method = profile.mode == LeverageMode::exact ? SampleMethod::det : SampleMethod::det_approx;
  sel.seed = profile.seed;
  sel.epsilon = tail_mass(profile, sel);
  return sel;
}

SampleSelection sample_uniform(std::size_t n, std::size_t d, std::size_t s, std::uint64_t seed) {
  if (s < d || s > n) throw DimensionError("sample size outside [d, n]");
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  Rng rng(derive_seed(seed, 0));
  // Partial Fisher-Yates.
  for (std::size_t k = 0; k < s; ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, n - 1);
    std::swap(pool[k], pool[pick(rng)]);
  }
  pool.resize(s);
  SampleSelection sel;
  sel.indices = std::move(pool);
  sel.method = SampleMethod::uniform;
  sel.seed = seed;
  return sel;
}

SampleSelection sample_proportional(const LeverageProfile& profile, std::size_t s,
                                    std::uint64_t seed) {
  const std::size_t n = profile.size();
  if (s < profile.dim || s > n) throw DimensionError("sample size outside [d, n]");
  // Exponential race: ordering rows by E_i / w_i with E_i ~ Exp(1) gives the
  // same law as sequential draws with renormalization, in O(n log n).
  Rng rng(derive_seed(seed, 0));
  std::exponential_distribution<double> expo(1.0);
  std::vector<std::pair<double, std::size_t>> keys(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = profile.scores[i];
    const double e = expo(rng);
    keys[i] = {w > 0.0 ? e / w : std::numeric_limits<double>::infinity(), i};
  }
  std::partial_sort(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(s), keys.end());
  SampleSelection sel;
  sel.indices.reserve(s);
  for (std::size_t k = 0; k < s; ++k) sel.indices.push_back(keys[k].second);
  sel.method = SampleMethod::proportional;
  sel.seed = seed;
  return sel;
}

std::size_t predict_sample_size(double d, double epsilon, double eta, double alpha) {
  check_epsilon(epsilon);
  if (!(eta > 0.0)) throw InvalidArgument("power-law exponent must be positive");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in [0, 1)");
  const double dd = d * (1.0 + alpha);
  const double eps = epsilon * (1.0 - alpha);
  const double a = std::pow(2.0 * dd / eps, 1.0 / (1.0 + eta)) - 1.0;
  const double b = std::pow(2.0 * dd / (eta * eps), 1.0 / eta) - 1.0;
  return static_cast<std::size_t>(std::ceil(std::max({a, b, dd})));
}

double tail_mass(const LeverageProfile& profile, const SampleSelection& selection) {
  std::vector<char> chosen(profile.size(), 0);
  for (auto i : selection.indices) chosen.at(i) = 1;
  double tail = 0.0;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (!chosen[i]) tail += profile.scores[i];
  }
  return tail;
}

void save_selection_csv(const SampleSelection& selection, const LeverageProfile* profile,
                        const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError("cannot write " + path.string());
  out.precision(17);
  out << "rank,row_index,score_used\n";
  for (std::size_t r = 0; r < selection.indices.size(); ++r) {
    const auto i = selection.indices[r];
    out << r + 1 << ',' << i << ',';
    if (profile != nullptr) {
      out << profile->scores.at(i);
    } else {
      out << "nan";
    }
    out << '\n';
  }
}

}  // namespace mvce
