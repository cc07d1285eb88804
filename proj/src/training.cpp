#include "mealcast/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mealcast/error.hpp"
#include "mealcast/rng.hpp"

namespace mealcast {

std::string_view to_string(TrainerKind t) {
  switch (t) {
    case TrainerKind::momentum_gd: return "momentum_gd";
    case TrainerKind::levenberg_marquardt: return "levenberg_marquardt";
  }
  return "?";
}

TrainerKind parse_trainer(std::string_view name) {
  if (name == "momentum_gd" || name == "traingdm" || name == "gdm") return TrainerKind::momentum_gd;
  if (name == "levenberg_marquardt" || name == "trainlm" || name == "lm") return TrainerKind::levenberg_marquardt;
  throw validation_error("unknown trainer '" + std::string(name) + "'");
}

std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::goal_reached: return "goal reached";
    case StopReason::max_epochs: return "max epochs";
    case StopReason::damping_ceiling: return "damping ceiling";
  }
  return "?";
}

void TrainConfig::validate() const {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw validation_error("eta must be a positive finite number");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw validation_error("alpha must lie in [0, 1)");
  if (max_epochs < 1) throw validation_error("max_epochs must be a positive integer");
  if (!(goal_mse >= 0.0)) throw validation_error("goal_mse must be non-negative");
  if (!(lm_mu0 > 0.0)) throw validation_error("lm_mu0 must be positive");
  if (!(lm_mu_inc > 1.0)) throw validation_error("lm_mu_inc must exceed 1");
  if (!(lm_mu_dec > 0.0 && lm_mu_dec < 1.0)) throw validation_error("lm_mu_dec must lie in (0, 1)");
  if (!(lm_mu_max > lm_mu0)) throw validation_error("lm_mu_max must exceed lm_mu0");
}

double pattern_error(const Eigen::Ref<const Eigen::VectorXd>& outputs, const Eigen::Ref<const Eigen::VectorXd>& targets) {
  if (outputs.size() != targets.size())
    throw validation_error("pattern_error: " + std::to_string(outputs.size()) + " outputs vs " +
                           std::to_string(targets.size()) + " targets");
  return 0.5 * (targets - outputs).squaredNorm();
}

namespace {

void require_single_output(const MlpModel& m, const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets) {
  if (m.output_dim() != 1) throw validation_error("only single-output models are supported");
  if (inputs.cols() != m.input_dim())
    throw validation_error("data has " + std::to_string(inputs.cols()) + " input columns, model expects " +
                           std::to_string(m.input_dim()));
  if (inputs.rows() != targets.size()) throw validation_error("input and target row counts differ");
}

// Walks the chain rule backwards from an output-layer delta.
void propagate_deltas(const MlpModel& m, const ForwardCache& cache, std::vector<Eigen::VectorXd>& deltas) {
  const auto& layers = m.layers();
  for (std::size_t i = layers.size() - 1; i-- > 0;) {
    const auto a = layers[i].activation;
    deltas[i] = (layers[i + 1].weights.transpose() * deltas[i + 1])
                    .cwiseProduct(cache.post[i].unaryExpr([a](double y) { return activation_derivative(a, y); }));
  }
}

const Eigen::VectorXd& layer_input(const ForwardCache& cache, std::size_t i) {
  return i == 0 ? cache.input : cache.post[i - 1];
}

}  // namespace

double dataset_sse(const MlpModel& m, const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets) {
  require_single_output(m, inputs, targets);
  return (targets - predict_rows(m, inputs)).squaredNorm();
}

double dataset_mse(const MlpModel& m, const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets) {
  if (inputs.rows() == 0) throw validation_error("dataset is empty");
  return dataset_sse(m, inputs, targets) / static_cast<double>(inputs.rows());
}

std::vector<Eigen::VectorXd> backprop_deltas(const MlpModel& m, const ForwardCache& cache,
                                             const Eigen::Ref<const Eigen::VectorXd>& target) {
  const auto& layers = m.layers();
  if (cache.depth() != layers.size() || cache.pre.size() != layers.size())
    throw validation_error("forward cache depth does not match the model");
  for (std::size_t i = 0; i < layers.size(); ++i)
    if (cache.post[i].size() != layers[i].outputs()) throw validation_error("forward cache shapes do not match the model");
  if (target.size() != m.output_dim()) throw validation_error("target size does not match model output");

  std::vector<Eigen::VectorXd> deltas(layers.size());
  const auto a = layers.back().activation;
  const auto& out = cache.post.back();
  deltas.back() = (target - out).cwiseProduct(out.unaryExpr([a](double y) { return activation_derivative(a, y); }));
  propagate_deltas(m, cache, deltas);
  return deltas;
}

LayerUpdates LayerUpdates::zeros_like(const MlpModel& m) {
  LayerUpdates u;
  for (const auto& l : m.layers()) {
    u.weights.push_back(Eigen::MatrixXd::Zero(l.weights.rows(), l.weights.cols()));
    u.biases.push_back(Eigen::VectorXd::Zero(l.biases.size()));
  }
  return u;
}

Eigen::VectorXd error_gradient(const MlpModel& m, const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets) {
  require_single_output(m, inputs, targets);
  const auto& layers = m.layers();
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m.parameter_count()));
  ForwardCache cache;
  for (Eigen::Index p = 0; p < inputs.rows(); ++p) {
    forward(m, inputs.row(p).transpose(), cache);
    const auto deltas = backprop_deltas(m, cache, targets.segment(p, 1));
    Eigen::Index k = 0;
    for (std::size_t i = 0; i < layers.size(); ++i) {
      const auto& in = layer_input(cache, i);
      for (Eigen::Index r = 0; r < layers[i].weights.rows(); ++r)
        for (Eigen::Index c = 0; c < layers[i].weights.cols(); ++c) grad(k++) -= deltas[i](r) * in(c);
      for (Eigen::Index r = 0; r < layers[i].biases.size(); ++r) grad(k++) -= deltas[i](r);
    }
  }
  return grad;
}

LayerUpdates gd_step(MlpModel& m, const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                     const TrainConfig& cfg, const LayerUpdates& prev) {
  if (cfg.trainer != TrainerKind::momentum_gd) throw validation_error("gd_step requires the momentum_gd trainer");
  require_single_output(m, inputs, targets);
  auto& layers = m.layers();
  const bool has_prev = !prev.weights.empty();
  if (has_prev && (prev.weights.size() != layers.size() || prev.biases.size() != layers.size()))
    throw validation_error("previous updates do not match the model");

  LayerUpdates step = LayerUpdates::zeros_like(m);
  ForwardCache cache;
  for (Eigen::Index p = 0; p < inputs.rows(); ++p) {
    forward(m, inputs.row(p).transpose(), cache);
    const auto deltas = backprop_deltas(m, cache, targets.segment(p, 1));
    for (std::size_t i = 0; i < layers.size(); ++i) {
      step.weights[i].noalias() += cfg.eta * deltas[i] * layer_input(cache, i).transpose();
      step.biases[i] += cfg.eta * deltas[i];
    }
  }
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (has_prev) {
      if (prev.weights[i].rows() != step.weights[i].rows() || prev.weights[i].cols() != step.weights[i].cols() ||
          prev.biases[i].size() != step.biases[i].size())
        throw validation_error("previous updates do not match the model");
      step.weights[i] += cfg.alpha * prev.weights[i];
      step.biases[i] += cfg.alpha * prev.biases[i];
    }
    layers[i].weights += step.weights[i];
    layers[i].biases += step.biases[i];
  }
  return step;
}

TrainResult train_gdm(MlpModel m, const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                      const TrainConfig& cfg) {
  cfg.validate();
  if (cfg.trainer != TrainerKind::momentum_gd) throw validation_error("train_gdm requires the momentum_gd trainer");
  require_single_output(m, inputs, targets);
  if (inputs.rows() == 0) throw validation_error("training data is empty");

  Rng rng(cfg.seed);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(inputs.rows()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  LayerUpdates prev = LayerUpdates::zeros_like(m);
  Eigen::MatrixXd x(1, inputs.cols());
  Eigen::VectorXd d(1);

  TrainHistory history;
  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    rng.shuffle(std::span<Eigen::Index>(order));
    for (auto p : order) {
      x = inputs.row(p);
      d(0) = targets(p);
      prev = gd_step(m, x, d, cfg, prev);
    }
    const double e = dataset_mse(m, inputs, targets);
    if (!std::isfinite(e))
      throw runtime_error("momentum training diverged at epoch " + std::to_string(epoch + 1) +
                          " (non-finite MSE); reduce eta or alpha");
    history.mse.push_back(e);
    if (e <= cfg.goal_mse) {
      history.stop = StopReason::goal_reached;
      return {std::move(m), std::move(history)};
    }
  }
  history.stop = StopReason::max_epochs;
  return {std::move(m), std::move(history)};
}

TrainResult train_gdm(MlpModel m, const FeatureMatrix& data, const TrainConfig& cfg) {
  return train_gdm(std::move(m), data.inputs, data.targets, cfg);
}

Jacobian assemble_jacobian(const MlpModel& m, const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets) {
  require_single_output(m, inputs, targets);
  const auto& layers = m.layers();
  Jacobian out;
  out.j.resize(inputs.rows(), static_cast<Eigen::Index>(m.parameter_count()));
  out.residual.resize(inputs.rows());

  ForwardCache cache;
  std::vector<Eigen::VectorXd> deltas(layers.size());
  for (Eigen::Index p = 0; p < inputs.rows(); ++p) {
    const double o = forward(m, inputs.row(p).transpose(), cache)(0);
    out.residual(p) = targets(p) - o;
    deltas.back() = Eigen::VectorXd::Constant(1, activation_derivative(layers.back().activation, o));
    propagate_deltas(m, cache, deltas);
    Eigen::Index k = 0;
    for (std::size_t i = 0; i < layers.size(); ++i) {
      const auto& in = layer_input(cache, i);
      for (Eigen::Index r = 0; r < layers[i].weights.rows(); ++r)
        for (Eigen::Index c = 0; c < layers[i].weights.cols(); ++c) out.j(p, k++) = deltas[i](r) * in(c);
      for (Eigen::Index r = 0; r < layers[i].biases.size(); ++r) out.j(p, k++) = deltas[i](r);
    }
  }
  return out;
}

bool lm_solve(const Eigen::MatrixXd& jtj, const Eigen::VectorXd& jte, double mu, Eigen::VectorXd& step) {
  Eigen::MatrixXd a = jtj;
  a.diagonal().array() += mu;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) return false;
  step = ldlt.solve(jte);
  return ldlt.info() == Eigen::Success && step.allFinite();
}

TrainResult train_lm(MlpModel m, const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                     const TrainConfig& cfg) {
  cfg.validate();
  if (cfg.trainer != TrainerKind::levenberg_marquardt)
    throw validation_error("train_lm requires the levenberg_marquardt trainer");
  require_single_output(m, inputs, targets);
  if (inputs.rows() == 0) throw validation_error("training data is empty");

  const auto n = static_cast<double>(inputs.rows());
  // mu is never allowed to underflow to zero, otherwise mu * inc stays zero.
  constexpr double kMuFloor = 1e-20;

  Eigen::VectorXd theta = m.parameters();
  Jacobian jac = assemble_jacobian(m, inputs, targets);
  double sse = jac.residual.squaredNorm();
  if (!std::isfinite(sse)) throw runtime_error("initial model produces non-finite outputs");

  const auto np = static_cast<Eigen::Index>(theta.size());
  Eigen::MatrixXd jtj(np, np);
  Eigen::VectorXd jte(np), step(np);
  double mu = cfg.lm_mu0;
  TrainHistory history;

  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    jtj.setZero();
    jtj.selfadjointView<Eigen::Lower>().rankUpdate(jac.j.transpose());
    jtj.triangularView<Eigen::StrictlyUpper>() = jtj.transpose();
    jte.noalias() = jac.j.transpose() * jac.residual;

    bool accepted = false;
    while (!accepted) {
      if (lm_solve(jtj, jte, mu, step)) {
        m.set_parameters(theta + step);
        const double candidate = dataset_sse(m, inputs, targets);
        if (std::isfinite(candidate) && candidate < sse) {
          theta += step;
          sse = candidate;
          mu = std::max(mu * cfg.lm_mu_dec, kMuFloor);
          accepted = true;
          break;
        }
      }
      mu *= cfg.lm_mu_inc;
      if (mu > cfg.lm_mu_max) {
        m.set_parameters(theta);
        history.stop = StopReason::damping_ceiling;
        return {std::move(m), std::move(history)};
      }
    }

    history.mse.push_back(sse / n);
    if (sse / n <= cfg.goal_mse) {
      history.stop = StopReason::goal_reached;
      return {std::move(m), std::move(history)};
    }
    jac = assemble_jacobian(m, inputs, targets);
  }
  history.stop = StopReason::max_epochs;
  return {std::move(m), std::move(history)};
}

TrainResult train_lm(MlpModel m, const FeatureMatrix& data, const TrainConfig& cfg) {
  return train_lm(std::move(m), data.inputs, data.targets, cfg);
}

TrainResult train(MlpModel m, const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets, const TrainConfig& cfg) {
  switch (cfg.trainer) {
    case TrainerKind::momentum_gd: return train_gdm(std::move(m), inputs, targets, cfg);
    case TrainerKind::levenberg_marquardt: return train_lm(std::move(m), inputs, targets, cfg);
  }
  throw validation_error("unknown trainer");
}

double relative_error(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  const double diff = std::abs(a - b);
  return scale < 1e-10 ? diff : diff / scale;
}

double max_relative_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) throw validation_error("gradient vectors differ in length");
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) worst = std::max(worst, relative_error(a(i), b(i)));
  return worst;
}

Eigen::VectorXd numeric_gradient(const MlpModel& m, const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                                 double h) {
  MlpModel probe = m;
  const Eigen::VectorXd theta = m.parameters();
  Eigen::VectorXd grad(theta.size());
  auto error_at = [&](Eigen::Index k, double offset) {
    Eigen::VectorXd t = theta;
    t(k) += offset;
    probe.set_parameters(t);
    return 0.5 * dataset_sse(probe, inputs, targets);
  };
  for (Eigen::Index k = 0; k < theta.size(); ++k) {
    const double e2p = error_at(k, 2 * h), e1p = error_at(k, h);
    const double e1m = error_at(k, -h), e2m = error_at(k, -2 * h);
    grad(k) = (-e2p + 8.0 * e1p - 8.0 * e1m + e2m) / (12.0 * h);
  }
  return grad;
}

GradientCheckReport gradient_check(const MlpModel& m, const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                                   double tolerance) {
  const Eigen::VectorXd reference = numeric_gradient(m, inputs, targets);
  const Eigen::VectorXd backprop = error_gradient(m, inputs, targets);
  const Jacobian jac = assemble_jacobian(m, inputs, targets);
  const Eigen::VectorXd from_jacobian = -(jac.j.transpose() * jac.residual);

  GradientCheckReport r;
  r.tolerance = tolerance;
  r.backprop_max_rel_error = max_relative_error(backprop, reference);
  r.jacobian_max_rel_error = max_relative_error(from_jacobian, reference);
  r.passed = r.backprop_max_rel_error < tolerance && r.jacobian_max_rel_error < tolerance;
  return r;
}

}  // namespace mealcast
