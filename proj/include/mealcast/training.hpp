#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mealcast/encoding.hpp"
#include "mealcast/network.hpp"

namespace mealcast {

enum class TrainerKind { momentum_gd, levenberg_marquardt };

std::string_view to_string(TrainerKind t);
/// Accepts momentum_gd|traingdm and levenberg_marquardt|trainlm.
TrainerKind parse_trainer(std::string_view name);

struct TrainConfig {
  TrainerKind trainer = TrainerKind::levenberg_marquardt;
  double eta = 0.1;
  double alpha = 0.9;
  int max_epochs = 1000;
  double goal_mse = 1e-3;
  double lm_mu0 = 1e-3;
  double lm_mu_inc = 10.0;
  double lm_mu_dec = 0.1;
  double lm_mu_max = 1e10;
  std::uint64_t seed = 1;

  /// Throws a validation error naming the first out-of-range field.
  void validate() const;
};

enum class StopReason { goal_reached, max_epochs, damping_ceiling };
std::string_view to_string(StopReason r);

struct TrainHistory {
  std::vector<double> mse;  // training MSE after each epoch
  StopReason stop = StopReason::max_epochs;
};

struct TrainResult {
  MlpModel model;
  TrainHistory history;
};

/// 1/2 * sum_j (d_j - o_j)^2
double pattern_error(const Eigen::Ref<const Eigen::VectorXd>& outputs,
                     const Eigen::Ref<const Eigen::VectorXd>& targets);

/// Mean over patterns of the squared output error, first output only for
/// single-output models (sum over outputs otherwise).
double dataset_mse(const MlpModel& m, const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets);
double dataset_sse(const MlpModel& m, const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets);

/// delta_out = phi'(v) (d - o); delta_hidden = phi'(v) * W_next^T delta_next.
std::vector<Eigen::VectorXd> backprop_deltas(const MlpModel& m, const ForwardCache& cache,
                                             const Eigen::Ref<const Eigen::VectorXd>& target);

/// Per-layer weight/bias increments, same shapes as the model's layers.
struct LayerUpdates {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;

  static LayerUpdates zeros_like(const MlpModel& m);
};

/// Gradient of sum_p E^p with respect to every parameter, in the flattened
/// parameter order, assembled from backprop deltas.
Eigen::VectorXd error_gradient(const MlpModel& m, const Eigen::MatrixXd& inputs,
                               const Eigen::VectorXd& targets);

/// One momentum update over the given patterns:
///   dw = eta * sum_p delta_j i_i + alpha * dw_prev
/// Returns the increment applied so it can feed the next call.
LayerUpdates gd_step(MlpModel& m, const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                     const TrainConfig& cfg, const LayerUpdates& prev);

/// Per-pattern momentum gradient descent in seeded-shuffle order.
TrainResult train_gdm(MlpModel m, const FeatureMatrix& data, const TrainConfig& cfg);
TrainResult train_gdm(MlpModel m, const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                      const TrainConfig& cfg);

struct Jacobian {
  Eigen::MatrixXd j;         // patterns x parameters, d o_p / d theta
  Eigen::VectorXd residual;  // d_p - o_p
};

/// Single-output models only.
Jacobian assemble_jacobian(const MlpModel& m, const Eigen::MatrixXd& inputs,
                           const Eigen::VectorXd& targets);

/// Solves (J^T J + mu I) dx = J^T e with an LDLT factorization. Returns false
/// when the factorization fails or the step is not finite.
bool lm_solve(const Eigen::MatrixXd& jtj, const Eigen::VectorXd& jte, double mu, Eigen::VectorXd& step);

TrainResult train_lm(MlpModel m, const FeatureMatrix& data, const TrainConfig& cfg);
TrainResult train_lm(MlpModel m, const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                     const TrainConfig& cfg);

/// Dispatches on cfg.trainer.
TrainResult train(MlpModel m, const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                  const TrainConfig& cfg);

struct GradientCheckReport {
  double backprop_max_rel_error = 0.0;
  double jacobian_max_rel_error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Relative error used by gradient_check: |a - b| / max(|a|, |b|), or the
/// absolute difference when both magnitudes are below 1e-10.
double relative_error(double a, double b);

/// Gradient of the total error by a five-point central difference stencil.
Eigen::VectorXd numeric_gradient(const MlpModel& m, const Eigen::MatrixXd& inputs,
                                 const Eigen::VectorXd& targets, double h = 1e-3);

/// Largest relative_error over all components.
double max_relative_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Compares the backprop gradient and -J^T e against numeric_gradient.
GradientCheckReport gradient_check(const MlpModel& m, const Eigen::MatrixXd& inputs,
                                   const Eigen::VectorXd& targets, double tolerance);

}  // namespace mealcast
