#include "mealcast/network.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "mealcast/encoding.hpp"
#include "mealcast/error.hpp"
#include "mealcast/rng.hpp"
#include "text_util.hpp"

namespace mealcast {

std::string_view to_string(ActivationKind a) {
  switch (a) {
    case ActivationKind::logistic: return "logsig";
    case ActivationKind::tanh: return "tansig";
    case ActivationKind::linear: return "purelin";
  }
  return "?";
}

ActivationKind parse_activation(std::string_view name) {
  std::string lower(detail::trim(name));
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "logsig" || lower == "logistic" || lower == "sigmoid") return ActivationKind::logistic;
  if (lower == "tansig" || lower == "tanh") return ActivationKind::tanh;
  if (lower == "purelin" || lower == "linear") return ActivationKind::linear;
  throw validation_error("unknown activation '" + std::string(name) + "'");
}

std::vector<ActivationKind> parse_activations(std::string_view list) {
  std::vector<ActivationKind> out;
  for (auto part : detail::split(detail::trim(list), '-')) out.push_back(parse_activation(part));
  return out;
}

std::string format_activations(const std::vector<ActivationKind>& acts) {
  std::string out;
  for (std::size_t i = 0; i < acts.size(); ++i) {
    if (i) out += '-';
    out += to_string(acts[i]);
  }
  return out;
}

double activate(ActivationKind a, double v) {
  switch (a) {
    case ActivationKind::logistic: return 1.0 / (1.0 + std::exp(-v));
    case ActivationKind::tanh: return std::tanh(v);
    case ActivationKind::linear: return v;
  }
  return v;
}

double activation_derivative(ActivationKind a, double y) {
  switch (a) {
    case ActivationKind::logistic: return y * (1.0 - y);
    case ActivationKind::tanh: return 1.0 - y * y;
    case ActivationKind::linear: return 1.0;
  }
  return 1.0;
}

std::size_t Topology::parameter_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l)
    n += static_cast<std::size_t>(dims[l + 1]) * static_cast<std::size_t>(dims[l] + 1);
  return n;
}

Topology Topology::parse(std::string_view text) {
  Topology t;
  for (auto part : detail::split(detail::trim(text), '-')) {
    const auto v = detail::parse_int(part);
    if (!v || *v < 1 || *v > 100000)
      throw validation_error("invalid topology '" + std::string(text) + "': every width must be a positive integer");
    t.dims.push_back(static_cast<int>(*v));
  }
  if (t.dims.size() < 2) throw validation_error("invalid topology '" + std::string(text) + "': need input and output");
  return t;
}

std::string Topology::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) out += '-';
    out += std::to_string(dims[i]);
  }
  return out;
}

MlpModel::MlpModel(std::vector<Layer> layers, NormBounds target_bounds, Codebooks codebooks)
    : layers_(std::move(layers)), target_bounds_(target_bounds), codebooks_(std::move(codebooks)) {
  validate();
}

Topology MlpModel::topology() const {
  Topology t;
  if (layers_.empty()) return t;
  t.dims.push_back(static_cast<int>(layers_.front().inputs()));
  for (const auto& l : layers_) t.dims.push_back(static_cast<int>(l.outputs()));
  return t;
}

std::vector<ActivationKind> MlpModel::activations() const {
  std::vector<ActivationKind> a;
  for (const auto& l : layers_) a.push_back(l.activation);
  return a;
}

int MlpModel::input_dim() const { return layers_.empty() ? 0 : static_cast<int>(layers_.front().inputs()); }
int MlpModel::output_dim() const { return layers_.empty() ? 0 : static_cast<int>(layers_.back().outputs()); }

std::size_t MlpModel::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += static_cast<std::size_t>(l.weights.size() + l.biases.size());
  return n;
}

Eigen::VectorXd MlpModel::parameters() const {
  Eigen::VectorXd theta(static_cast<Eigen::Index>(parameter_count()));
  Eigen::Index k = 0;
  for (const auto& l : layers_) {
    for (Eigen::Index r = 0; r < l.weights.rows(); ++r)
      for (Eigen::Index c = 0; c < l.weights.cols(); ++c) theta(k++) = l.weights(r, c);
    for (Eigen::Index r = 0; r < l.biases.size(); ++r) theta(k++) = l.biases(r);
  }
  return theta;
}

void MlpModel::set_parameters(const Eigen::VectorXd& theta) {
  if (static_cast<std::size_t>(theta.size()) != parameter_count())
    throw validation_error("parameter vector has " + std::to_string(theta.size()) + " entries, model needs " +
                           std::to_string(parameter_count()));
  Eigen::Index k = 0;
  for (auto& l : layers_) {
    for (Eigen::Index r = 0; r < l.weights.rows(); ++r)
      for (Eigen::Index c = 0; c < l.weights.cols(); ++c) l.weights(r, c) = theta(k++);
    for (Eigen::Index r = 0; r < l.biases.size(); ++r) l.biases(r) = theta(k++);
  }
}

void MlpModel::validate() const {
  if (layers_.empty()) throw validation_error("model has no layers");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& l = layers_[i];
    if (l.weights.rows() < 1 || l.weights.cols() < 1)
      throw validation_error("layer " + std::to_string(i) + " has an empty weight matrix");
    if (l.biases.size() != l.weights.rows())
      throw validation_error("layer " + std::to_string(i) + ": " + std::to_string(l.biases.size()) +
                             " biases for " + std::to_string(l.weights.rows()) + " outputs");
    if (i > 0 && l.weights.cols() != layers_[i - 1].weights.rows())
      throw validation_error("layer " + std::to_string(i) + " expects " + std::to_string(l.weights.cols()) +
                             " inputs but layer " + std::to_string(i - 1) + " produces " +
                             std::to_string(layers_[i - 1].weights.rows()));
  }
}

MlpModel init_model(const Topology& topology, const std::vector<ActivationKind>& activations, std::uint64_t seed,
                    double weight_range) {
  if (topology.dims.size() < 2) throw validation_error("topology needs at least an input and an output layer");
  for (int d : topology.dims)
    if (d < 1) throw validation_error("topology widths must be positive");
  if (activations.size() != topology.weight_layers())
    throw validation_error("topology " + topology.to_string() + " has " + std::to_string(topology.weight_layers()) +
                           " weight layers but " + std::to_string(activations.size()) + " activations were given");
  if (!(weight_range >= 0.0)) throw validation_error("weight range must be non-negative");

  Rng rng(seed);
  std::vector<Layer> layers;
  for (std::size_t i = 0; i < topology.weight_layers(); ++i) {
    Layer l;
    l.weights.resize(topology.dims[i + 1], topology.dims[i]);
    l.biases.resize(topology.dims[i + 1]);
    l.activation = activations[i];
    for (Eigen::Index r = 0; r < l.weights.rows(); ++r)
      for (Eigen::Index c = 0; c < l.weights.cols(); ++c) l.weights(r, c) = rng.uniform(-weight_range, weight_range);
    for (Eigen::Index r = 0; r < l.biases.size(); ++r) l.biases(r) = rng.uniform(-weight_range, weight_range);
    layers.push_back(std::move(l));
  }
  return MlpModel(std::move(layers));
}

Eigen::VectorXd forward(const MlpModel& m, const Eigen::Ref<const Eigen::VectorXd>& x, ForwardCache& cache) {
  if (x.size() != m.input_dim())
    throw validation_error("input has " + std::to_string(x.size()) + " values, model expects " +
                           std::to_string(m.input_dim()));
  const auto& layers = m.layers();
  cache.input = x;
  cache.pre.resize(layers.size());
  cache.post.resize(layers.size());
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    const Eigen::VectorXd& in = i == 0 ? cache.input : cache.post[i - 1];
    cache.pre[i].noalias() = l.weights * in;
    cache.pre[i] += l.biases;
    cache.post[i] = cache.pre[i].unaryExpr([a = l.activation](double v) { return activate(a, v); });
  }
  return cache.post.back();
}

Eigen::VectorXd forward(const MlpModel& m, const Eigen::Ref<const Eigen::VectorXd>& x) {
  ForwardCache cache;
  return forward(m, x, cache);
}

Eigen::VectorXd predict_rows(const MlpModel& m, const Eigen::MatrixXd& inputs) {
  Eigen::VectorXd out(inputs.rows());
  ForwardCache cache;
  Eigen::VectorXd x;
  for (Eigen::Index p = 0; p < inputs.rows(); ++p) {
    x = inputs.row(p).transpose();
    out(p) = forward(m, x, cache)(0);
  }
  return out;
}

std::int64_t predict_demand(const MlpModel& m, const RawRow& r, const Codebooks& books) {
  const auto x = encode_inputs(r, books);
  const Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
  const double y = forward(m, xv)(0);
  const double persons = std::round(denormalize(y, m.target_bounds()));
  return persons > 0.0 ? static_cast<std::int64_t>(persons) : 0;
}

std::int64_t predict_demand(const MlpModel& m, const RawRow& r) {
  if (m.codebooks().empty()) throw validation_error("model carries no codebooks");
  return predict_demand(m, r, m.codebooks());
}

}  // namespace mealcast
