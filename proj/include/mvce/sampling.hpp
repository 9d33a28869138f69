#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mvce/leverage.hpp"

namespace mvce {

enum class SampleMethod { det, det_approx, uniform, proportional };

std::string_view to_string(SampleMethod method);
/// Accepts det, det-approx, uniform, prop/proportional.
SampleMethod parse_sample_method(std::string_view text);

/// A row subset of the data matrix; indices are 0-based and in selection order.
struct SampleSelection {
  std::vector<std::size_t> indices;
  double epsilon = 0.0;
  SampleMethod method = SampleMethod::det;
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return indices.size(); }
};

/// Smallest prefix of the descending order whose exact score sum strictly
/// exceeds d - epsilon. The prefix is floored at d rows.
SampleSelection sample_deterministic(const LeverageProfile& profile, double epsilon);

/// Approximate-score variant: smallest prefix with sum >= t - (1 - alpha) epsilon,
/// where t is the total of the approximate scores.
SampleSelection sample_deterministic_approx(const LeverageProfile& profile, double epsilon);

/// Top-s rows by score. The recorded epsilon is the score mass outside the prefix.
SampleSelection sample_top(const LeverageProfile& profile, std::size_t s);

/// s distinct rows drawn uniformly without replacement.
SampleSelection sample_uniform(std::size_t n, std::size_t d, std::size_t s, std::uint64_t seed);

/// s distinct rows drawn sequentially without replacement, each draw with
/// probability proportional to score among the rows not yet drawn.
SampleSelection sample_proportional(const LeverageProfile& profile, std::size_t s,
                                    std::uint64_t seed);

/// Sample-size prediction under power-law leverage decay with exponent eta.
/// With alpha > 0, d becomes d (1 + alpha) and epsilon becomes (1 - alpha) epsilon.
std::size_t predict_sample_size(double d, double epsilon, double eta, double alpha = 0.0);

/// Sum of scores of rows not in the selection.
double tail_mass(const LeverageProfile& profile, const SampleSelection& selection);

/// CSV with columns rank,row_index,score_used.
void save_selection_csv(const SampleSelection& selection, const LeverageProfile* profile,
                        const std::filesystem::path& path);

}  // namespace mvce
