#include "mealcast/dataio.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

#include "mealcast/error.hpp"
#include "mealcast/rng.hpp"
#include "text_util.hpp"

namespace mealcast {

std::vector<std::string> default_schema() {
  std::vector<std::string> s(kFeatureNames.begin(), kFeatureNames.end());
  s.emplace_back(kTargetName);
  return s;
}

namespace {

constexpr std::string_view kUtf8Bom = "\xEF\xBB\xBF";

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

Dataset parse_csv(std::string_view text, const std::string& provenance, const std::vector<std::string>& schema) {
  if (schema.size() != kFeatureCount + 1)
    throw validation_error("schema must list " + std::to_string(kFeatureCount + 1) + " columns");
  if (text.starts_with(kUtf8Bom)) text.remove_prefix(kUtf8Bom.size());

  auto lines = detail::split(text, '\n');
  while (!lines.empty() && detail::trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw validation_error(provenance + ": missing header row");

  std::vector<std::string> header;
  for (auto f : detail::split(lines.front(), ',')) header.emplace_back(detail::trim(f));
  if (header != schema)
    throw validation_error(provenance + ": header '" + join(header, ',') + "' does not match expected '" +
                           join(schema, ',') + "'");

  Dataset ds;
  ds.provenance = provenance;
  std::vector<RowError> errors;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::size_t row = li - 1;
    const auto fields = detail::split(lines[li], ',');
    if (fields.size() != schema.size()) {
      errors.push_back({row, "expected " + std::to_string(schema.size()) + " fields, found " +
                                 std::to_string(fields.size())});
      continue;
    }
    RawRow r;
    for (std::size_t f = 0; f < kFeatureCount; ++f) r.labels[f] = std::string(detail::trim(fields[f]));
    const auto demand_text = detail::trim(fields[kFeatureCount]);
    if (!demand_text.empty()) {
      const auto d = detail::parse_int(demand_text);
      if (!d) {
        errors.push_back({row, "demand '" + std::string(demand_text) + "' is not an integer"});
        continue;
      }
      if (*d < 0) {
        errors.push_back({row, "demand " + std::to_string(*d) + " is negative"});
        continue;
      }
      r.demand = *d;
    }
    ds.rows.push_back(std::move(r));
  }

  if (!errors.empty()) {
    std::string msg = provenance + ": " + std::to_string(errors.size()) + " malformed row(s)";
    for (std::size_t i = 0; i < errors.size() && i < 5; ++i)
      msg += "; row " + std::to_string(errors[i].row) + ": " + errors[i].message;
    throw ParseError(msg, std::move(errors));
  }
  return ds;
}

Dataset load_csv(const std::string& path, const std::vector<std::string>& schema) {
  return parse_csv(detail::read_file(path), path, schema);
}

std::string format_csv(const Dataset& ds) {
  std::string out = join(default_schema(), ',') + '\n';
  for (const auto& r : ds.rows) {
    for (const auto& l : r.labels) {
      out += l;
      out += ',';
    }
    if (r.demand) out += std::to_string(*r.demand);
    out += '\n';
  }
  return out;
}

void save_csv(const Dataset& ds, const std::string& path) { detail::write_file(path, format_csv(ds)); }

std::string_view to_string(DropReason r) {
  switch (r) {
    case DropReason::missing_field: return "missing field";
    case DropReason::outlier: return "outlier";
  }
  return "?";
}

std::size_t CleaningReport::count(DropReason r) const {
  return static_cast<std::size_t>(
      std::count_if(reasons.begin(), reasons.end(), [r](const DroppedRow& d) { return d.reason == r; }));
}

CleanResult clean(const Dataset& ds, double outlier_k, const Codebooks& books) {
  if (ds.empty()) throw validation_error("clean: dataset is empty");
  if (!(outlier_k > 0.0)) throw validation_error("clean: outlier_k must be positive");
  check_codebook_schema(books);

  CleaningReport report;
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto& r = ds.rows[i];
    bool complete = r.demand.has_value();
    for (std::size_t f = 0; f < kFeatureCount && complete; ++f)
      complete = !r.labels[f].empty() && books[f].contains(r.labels[f]);
    if (complete)
      candidates.push_back(i);
    else
      report.reasons.push_back({i, DropReason::missing_field});
  }

  // Iterated group z-score clipping until nothing more is flagged.
  std::vector<bool> alive(ds.size(), false);
  for (auto i : candidates) alive[i] = true;
  while (true) {
    std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> groups;
    for (auto i : candidates)
      if (alive[i]) groups[{ds.rows[i].labels[kWeekday], ds.rows[i].labels[kHoliday]}].push_back(i);

    std::vector<std::size_t> flagged;
    for (const auto& [key, members] : groups) {
      double mean = 0.0;
      for (auto i : members) mean += static_cast<double>(*ds.rows[i].demand);
      mean /= static_cast<double>(members.size());
      double var = 0.0;
      for (auto i : members) {
        const double d = static_cast<double>(*ds.rows[i].demand) - mean;
        var += d * d;
      }
      const double sd = std::sqrt(var / static_cast<double>(members.size()));
      if (!(sd > 0.0)) continue;
      for (auto i : members)
        if (std::abs(static_cast<double>(*ds.rows[i].demand) - mean) > outlier_k * sd) flagged.push_back(i);
    }
    if (flagged.empty()) break;
    for (auto i : flagged) {
      alive[i] = false;
      report.reasons.push_back({i, DropReason::outlier});
    }
  }

  std::sort(report.reasons.begin(), report.reasons.end(),
            [](const DroppedRow& a, const DroppedRow& b) { return a.row < b.row; });

  CleanResult result;
  result.data.provenance = ds.provenance;
  for (auto i : candidates)
    if (alive[i]) result.data.rows.push_back(ds.rows[i]);
  report.kept = result.data.size();
  report.dropped = report.reasons.size();
  result.report = std::move(report);
  if (result.data.empty()) throw validation_error("clean: dataset is empty after cleaning");
  return result;
}

SplitResult split(const Dataset& ds, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw validation_error("split: train_fraction must lie in (0, 1)");
  const std::size_t n = ds.size();
  if (n < 2) throw validation_error("split: need at least 2 rows");

  auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
  n_train = std::clamp<std::size_t>(n_train, 1, n - 1);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));

  SplitResult out;
  out.train_index.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  out.test_index.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  std::sort(out.train_index.begin(), out.train_index.end());
  std::sort(out.test_index.begin(), out.test_index.end());
  out.train.provenance = ds.provenance + " [train]";
  out.test.provenance = ds.provenance + " [test]";
  for (auto i : out.train_index) out.train.rows.push_back(ds.rows[i]);
  for (auto i : out.test_index) out.test.rows.push_back(ds.rows[i]);
  return out;
}

double synthetic_demand_fraction(const std::array<double, kFeatureCount>& x) {
  using std::numbers::pi;
  const double soup = x[kSoup], main = x[kMainDish], side = x[kSideDish], helper = x[kSideHelper];
  const double drink = x[kBeverage], day = x[kWeekday], season = x[kSeason];
  double f = 0.74;
  f += 0.09 * std::sin(3.0 * pi * main);
  f += 0.05 * std::cos(2.0 * pi * soup);
  f += 0.04 * (side - 0.5);
  f += 0.03 * std::sin(pi * helper);
  f += 0.02 * (drink - 0.5);
  f -= 0.14 * day * day * day;
  f += 0.04 * std::cos(2.0 * pi * season);
  f += 0.24 * (main - 0.5) * (soup - 0.5);
  return std::clamp(f, 0.0, 1.0);
}

Dataset synthesize(std::size_t n, std::uint64_t seed, const SynthProfile& profile) {
  if (n < 1) throw validation_error("synthesize: n must be at least 1");
  if (profile.capacity < 1) throw validation_error("synthesize: capacity must be positive");
  if (!(profile.holiday_rate >= 0.0 && profile.holiday_rate < 1.0))
    throw validation_error("synthesize: holiday_rate must lie in [0, 1)");
  if (!(profile.noise_persons >= 0.0)) throw validation_error("synthesize: noise_persons must be non-negative");
  if (profile.missing_defects + profile.outlier_defects > n)
    throw validation_error("synthesize: more defects requested than rows");

  const auto books = build_codebooks();
  Rng rng(seed);
  Dataset ds;
  ds.provenance = "synthetic(n=" + std::to_string(n) + ", seed=" + std::to_string(seed) + ")";
  ds.rows.reserve(n);
  const auto cap = static_cast<double>(profile.capacity);

  for (std::size_t day = 0; day < n; ++day) {
    std::array<int, kFeatureCount> code{};
    for (std::size_t f = kSoup; f <= kBeverage; ++f) code[f] = static_cast<int>(rng.below(books[f].size())) + 1;
    code[kWeekday] = static_cast<int>(day % 7) + 1;
    code[kSeason] = static_cast<int>((day % 365) * 4 / 365) + 1;
    const bool holiday = rng.uniform() < profile.holiday_rate;
    code[kHoliday] = holiday ? 1 : 2;
    const double noise = profile.noise_persons * (rng.uniform() + rng.uniform() - 1.0);

    RawRow r;
    std::array<double, kFeatureCount> x{};
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      r.labels[f] = books[f].labels()[static_cast<std::size_t>(code[f] - 1)];
      x[f] = books[f].normalized(code[f]);
    }
    if (holiday) {
      r.demand = 0;
    } else {
      const double d = std::round(cap * synthetic_demand_fraction(x) + noise);
      r.demand = static_cast<std::int64_t>(std::clamp(d, 0.0, cap));
    }
    ds.rows.push_back(std::move(r));
  }

  if (profile.missing_defects == 0 && profile.outlier_defects == 0) return ds;

  // Defects come from their own stream so clean rows match the defect-free
  // dataset with the same seed.
  Rng defect_rng(seed ^ 0x9E3779B97F4A7C15ULL);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  defect_rng.shuffle(std::span<std::size_t>(order));

  std::size_t planted_outliers = 0;
  std::vector<bool> used(n, false);
  for (auto i : order) {
    if (planted_outliers == profile.outlier_defects) break;
    if (ds.rows[i].label(kHoliday) != "Yok") continue;
    const double gross = cap * defect_rng.uniform(3.0, 8.0);
    ds.rows[i].demand = static_cast<std::int64_t>(std::round(gross));
    used[i] = true;
    ++planted_outliers;
  }
  if (planted_outliers < profile.outlier_defects)
    throw validation_error("synthesize: not enough working-day rows for the requested outliers");

  std::size_t planted_missing = 0;
  for (auto i : order) {
    if (planted_missing == profile.missing_defects) break;
    if (used[i]) continue;
    const auto field = defect_rng.below(kFeatureCount + 1);
    if (field == kFeatureCount)
      ds.rows[i].demand.reset();
    else
      ds.rows[i].labels[field].clear();
    used[i] = true;
    ++planted_missing;
  }
  return ds;
}

}  // namespace mealcast
