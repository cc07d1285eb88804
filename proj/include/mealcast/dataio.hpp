#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mealcast/codebook.hpp"

namespace mealcast {

/// One raw refectory record: eight category labels plus the meal count.
/// Labels are kept verbatim; an empty label or an absent demand marks a
/// missing field that clean() removes.
struct RawRow {
  std::array<std::string, kFeatureCount> labels;
  std::optional<std::int64_t> demand;

  const std::string& label(Feature f) const { return labels[f]; }
  bool operator==(const RawRow&) const = default;
};

struct Dataset {
  std::vector<RawRow> rows;
  std::string provenance;

  std::size_t size() const noexcept { return rows.size(); }
  bool empty() const noexcept { return rows.empty(); }
};

/// Header names in file order: the eight features followed by the target.
std::vector<std::string> default_schema();

Dataset load_csv(const std::string& path, const std::vector<std::string>& schema = default_schema());
Dataset parse_csv(std::string_view text, const std::string& provenance,
                  const std::vector<std::string>& schema = default_schema());
void save_csv(const Dataset& ds, const std::string& path);
std::string format_csv(const Dataset& ds);

enum class DropReason { missing_field, outlier };
std::string_view to_string(DropReason r);

struct DroppedRow {
  std::size_t row = 0;  // index into the input dataset
  DropReason reason = DropReason::missing_field;
};

struct CleaningReport {
  std::size_t kept = 0;
  std::size_t dropped = 0;
  std::vector<DroppedRow> reasons;  // sorted by row index

  std::size_t count(DropReason r) const;
};

struct CleanResult {
  Dataset data;
  CleaningReport report;
};

inline constexpr double kDefaultOutlierK = 3.0;

/// Drops rows with empty or non-codebook labels or no demand, then drops rows
/// whose demand is more than `outlier_k` population standard deviations from
/// the mean of their (weekday, holiday) group. Outlier removal repeats until
/// no further row is flagged, which makes the operation idempotent.
CleanResult clean(const Dataset& ds, double outlier_k = kDefaultOutlierK,
                  const Codebooks& books = build_codebooks());

struct SplitResult {
  Dataset train;
  Dataset test;
  std::vector<std::size_t> train_index;  // positions in the source dataset
  std::vector<std::size_t> test_index;
};

/// Seeded random partition. |train| = round(f * n), clamped to [1, n - 1].
/// Both parts keep source row order.
SplitResult split(const Dataset& ds, double train_fraction, std::uint64_t seed);

/// Parameters of the synthetic refectory generator.
struct SynthProfile {
  std::int64_t capacity = 110;    // staff head count; demand never exceeds it
  double holiday_rate = 0.06;     // chance a day is an official holiday
  double noise_persons = 3.0;     // half-width of the bounded demand noise
  std::size_t missing_defects = 0;  // rows with one blanked field
  std::size_t outlier_defects = 0;  // working-day rows with a gross demand value
};

/// Deterministic synthetic dataset: consecutive days (weekday cycles from
/// Monday, seasons from autumn), uniformly drawn menus, and demand given by a
/// fixed smooth function of the encoded features plus bounded noise. Holiday
/// rows have demand 0. Planted outliers always exceed `capacity`.
Dataset synthesize(std::size_t n, std::uint64_t seed, const SynthProfile& profile = {});

/// Ground-truth demand fraction in [0, 1] for an encoded working-day row.
double synthetic_demand_fraction(const std::array<double, kFeatureCount>& x);

}  // namespace mealcast
