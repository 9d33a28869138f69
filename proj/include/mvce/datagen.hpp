#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "mvce/linalg.hpp"

namespace mvce {

enum class Family { rotated_cauchy, lognormal, gaussian, power_law_leverage };

std::string_view to_string(Family family);
Family parse_family(std::string_view text);

/// Seeded synthetic dataset description.
///
/// params: "sigma" for lognormal (default 2), "eta" for power-law-leverage
/// (default 1).
struct DatasetSpec {
  Family family = Family::gaussian;
  std::size_t n = 0;
  std::size_t d = 0;
  std::uint64_t seed = 0;
  std::map<std::string, double> params;

  double param(const std::string& key, double fallback) const;
};

/// Rows are generated in blocks of this many rows, each from its own stream.
inline constexpr std::size_t kGenBlockRows = 4096;

DataMatrix generate(const DatasetSpec& spec);

/// One-line summary, e.g. "gaussian n=1000 d=10 seed=7"; params follow as k=v.
std::string describe(const DatasetSpec& spec);

/// Inverse of describe(). Throws FormatError on unknown families or keys.
DatasetSpec parse_dataset_spec(std::string_view text);

}  // namespace mvce
