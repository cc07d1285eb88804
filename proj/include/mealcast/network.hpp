#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mealcast/codebook.hpp"
#include "mealcast/dataio.hpp"

namespace mealcast {

enum class ActivationKind { logistic, tanh, linear };

/// Canonical names follow the logsig/tansig/purelin vocabulary.
std::string_view to_string(ActivationKind a);
/// Accepts logsig|logistic|sigmoid, tansig|tanh, purelin|linear (any case).
ActivationKind parse_activation(std::string_view name);
/// Dash-separated list, e.g. "logsig-logsig-tansig".
std::vector<ActivationKind> parse_activations(std::string_view list);
std::string format_activations(const std::vector<ActivationKind>& acts);

double activate(ActivationKind a, double v);
/// Derivative expressed through the activation output y = phi(v).
double activation_derivative(ActivationKind a, double y);

/// Layer widths from input to output, e.g. {8, 10, 10, 1}.
struct Topology {
  std::vector<int> dims;

  std::size_t weight_layers() const { return dims.empty() ? 0 : dims.size() - 1; }
  int input_dim() const { return dims.front(); }
  int output_dim() const { return dims.back(); }
  std::size_t parameter_count() const;

  static Topology parse(std::string_view text);
  std::string to_string() const;

  bool operator==(const Topology&) const = default;
};

struct Layer {
  Eigen::MatrixXd weights;  // out x in
  Eigen::VectorXd biases;   // out
  ActivationKind activation = ActivationKind::logistic;

  Eigen::Index inputs() const { return weights.cols(); }
  Eigen::Index outputs() const { return weights.rows(); }
};

struct ForwardCache {
  Eigen::VectorXd input;
  std::vector<Eigen::VectorXd> pre;   // v = W x + b, per layer
  std::vector<Eigen::VectorXd> post;  // y = phi(v), per layer

  std::size_t depth() const { return post.size(); }
};

/// Multi-layer perceptron plus the normalization context it was trained in.
/// `codebooks` may be empty for purely numeric models.
class MlpModel {
 public:
  MlpModel() = default;
  MlpModel(std::vector<Layer> layers, NormBounds target_bounds = {}, Codebooks codebooks = {});

  const std::vector<Layer>& layers() const noexcept { return layers_; }
  std::vector<Layer>& layers() noexcept { return layers_; }
  Topology topology() const;
  std::vector<ActivationKind> activations() const;
  int input_dim() const;
  int output_dim() const;

  const NormBounds& target_bounds() const noexcept { return target_bounds_; }
  void set_target_bounds(const NormBounds& b) { target_bounds_ = b; }
  const Codebooks& codebooks() const noexcept { return codebooks_; }
  void set_codebooks(Codebooks books) { codebooks_ = std::move(books); }

  /// Flattened parameters: for each layer in order, the weight matrix
  /// row-major followed by the bias vector.
  Eigen::VectorXd parameters() const;
  void set_parameters(const Eigen::VectorXd& theta);
  std::size_t parameter_count() const;

  /// Throws unless consecutive layer shapes chain and biases match.
  void validate() const;

 private:
  std::vector<Layer> layers_;
  NormBounds target_bounds_;
  Codebooks codebooks_;
};

inline constexpr double kDefaultWeightRange = 0.5;

/// Weights and biases uniform in [-weight_range, weight_range].
MlpModel init_model(const Topology& topology, const std::vector<ActivationKind>& activations,
                    std::uint64_t seed, double weight_range = kDefaultWeightRange);

Eigen::VectorXd forward(const MlpModel& m, const Eigen::Ref<const Eigen::VectorXd>& x,
                        ForwardCache& cache);
Eigen::VectorXd forward(const MlpModel& m, const Eigen::Ref<const Eigen::VectorXd>& x);

/// First output for every row of `inputs`.
Eigen::VectorXd predict_rows(const MlpModel& m, const Eigen::MatrixXd& inputs);

/// encode -> forward -> denormalize -> round, clamped at 0.
std::int64_t predict_demand(const MlpModel& m, const RawRow& r, const Codebooks& books);
std::int64_t predict_demand(const MlpModel& m, const RawRow& r);

}  // namespace mealcast
