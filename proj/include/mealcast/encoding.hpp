#pragma once

#include <Eigen/Dense>
#include <array>

#include "mealcast/codebook.hpp"
#include "mealcast/dataio.hpp"

namespace mealcast {

using InputVector = std::array<double, kFeatureCount>;

struct EncodedRow {
  InputVector inputs{};
  double target = 0.0;
};

/// Numeric training matrix: one pattern per row, columns in kFeatureNames
/// order, targets normalized by `bounds`.
struct FeatureMatrix {
  Eigen::MatrixXd inputs;   // n x input_dim
  Eigen::VectorXd targets;  // n
  NormBounds bounds;
  Codebooks codebooks;

  Eigen::Index rows() const { return inputs.rows(); }
};

/// Categorical features only; used at prediction time when demand is unknown.
InputVector encode_inputs(const RawRow& r, const Codebooks& books);
EncodedRow encode_row(const RawRow& r, const Codebooks& books, const NormBounds& target_bounds);
FeatureMatrix encode_dataset(const Dataset& ds, const Codebooks& books, const NormBounds& target_bounds);

/// Observed (min, max) demand. Throws on an empty or constant-demand dataset.
NormBounds demand_bounds(const Dataset& ds);

}  // namespace mealcast
