#include "mealcast/encoding.hpp"

#include <algorithm>

#include "mealcast/error.hpp"

namespace mealcast {

InputVector encode_inputs(const RawRow& r, const Codebooks& books) {
  check_codebook_schema(books);
  InputVector x{};
  for (std::size_t f = 0; f < kFeatureCount; ++f) x[f] = books[f].normalized(r.labels[f]);
  return x;
}

EncodedRow encode_row(const RawRow& r, const Codebooks& books, const NormBounds& target_bounds) {
  if (!r.demand) throw validation_error("row has no demand value");
  EncodedRow e;
  e.inputs = encode_inputs(r, books);
  e.target = normalize(static_cast<double>(*r.demand), target_bounds);
  return e;
}

FeatureMatrix encode_dataset(const Dataset& ds, const Codebooks& books, const NormBounds& target_bounds) {
  check_codebook_schema(books);
  const auto n = static_cast<Eigen::Index>(ds.size());
  FeatureMatrix fm;
  fm.inputs.resize(n, static_cast<Eigen::Index>(kFeatureCount));
  fm.targets.resize(n);
  fm.bounds = target_bounds;
  fm.codebooks = books;
  for (Eigen::Index i = 0; i < n; ++i) {
    EncodedRow e;
    try {
      e = encode_row(ds.rows[static_cast<std::size_t>(i)], books, target_bounds);
    } catch (const Error& err) {
      throw Error(err.kind(), "row " + std::to_string(i) + ": " + err.what());
    }
    for (std::size_t f = 0; f < kFeatureCount; ++f) fm.inputs(i, static_cast<Eigen::Index>(f)) = e.inputs[f];
    fm.targets(i) = e.target;
  }
  return fm;
}

NormBounds demand_bounds(const Dataset& ds) {
  bool any = false;
  std::int64_t lo = 0, hi = 0;
  for (const auto& r : ds.rows) {
    if (!r.demand) continue;
    if (!any) {
      lo = hi = *r.demand;
      any = true;
    }
    lo = std::min(lo, *r.demand);
    hi = std::max(hi, *r.demand);
  }
  if (!any) throw validation_error("no demand values to derive bounds from");
  if (hi == lo) throw validation_error("demand is constant (" + std::to_string(lo) + "); bounds are degenerate");
  return {static_cast<double>(lo), static_cast<double>(hi)};
}

}  // namespace mealcast
