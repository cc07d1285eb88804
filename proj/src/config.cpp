#include "mealcast/config.hpp"

#include <istream>
#include <sstream>

#include "mealcast/error.hpp"
#include "mealcast/search.hpp"
#include "text_util.hpp"

namespace mealcast {

namespace {

double real_value(std::string_view key, std::string_view value) {
  const auto v = detail::parse_double(value);
  if (!v) throw validation_error("config: '" + std::string(key) + "' expects a number, got '" + std::string(value) + "'");
  return *v;
}

std::int64_t int_value(std::string_view key, std::string_view value) {
  const auto v = detail::parse_int(value);
  if (!v) throw validation_error("config: '" + std::string(key) + "' expects an integer, got '" + std::string(value) + "'");
  return *v;
}

}  // namespace

void PipelineConfig::set(std::string_view key, std::string_view value) {
  key = detail::trim(key);
  value = detail::trim(value);
  if (key == "trainer") train.trainer = parse_trainer(value);
  else if (key == "eta") train.eta = real_value(key, value);
  else if (key == "alpha") train.alpha = real_value(key, value);
  else if (key == "max_epochs") train.max_epochs = static_cast<int>(int_value(key, value));
  else if (key == "goal_mse") train.goal_mse = real_value(key, value);
  else if (key == "lm_mu0") train.lm_mu0 = real_value(key, value);
  else if (key == "lm_mu_inc") train.lm_mu_inc = real_value(key, value);
  else if (key == "lm_mu_dec") train.lm_mu_dec = real_value(key, value);
  else if (key == "lm_mu_max") train.lm_mu_max = real_value(key, value);
  else if (key == "seed") {
    const auto s = int_value(key, value);
    if (s < 0) throw validation_error("config: seed must be non-negative");
    train.seed = static_cast<std::uint64_t>(s);
  }
  else if (key == "topology") topology = std::string(value);
  else if (key == "activations") activations = std::string(value);
  else if (key == "train_fraction") train_fraction = real_value(key, value);
  else if (key == "outlier_k") outlier_k = real_value(key, value);
  else if (key == "weight_range") weight_range = real_value(key, value);
  else if (key == "repeats") repeats = static_cast<int>(int_value(key, value));
  else if (key == "threads") {
    const auto t = int_value(key, value);
    if (t < 0) throw validation_error("config: threads must be non-negative");
    threads = static_cast<unsigned>(t);
  }
  else if (key == "grid") grid = std::string(value);
  else throw validation_error("config: unknown key '" + std::string(key) + "'");
}

// Trainer fields are checked by the trainers themselves, per candidate.
void PipelineConfig::validate() const {
  const auto topo = Topology::parse(topology);
  const auto acts = parse_activations(activations);
  if (acts.size() != topo.weight_layers())
    throw validation_error("config: topology " + topology + " needs " + std::to_string(topo.weight_layers()) +
                           " activations, got " + std::to_string(acts.size()));
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw validation_error("config: train_fraction must lie in (0, 1)");
  if (!(outlier_k > 0.0)) throw validation_error("config: outlier_k must be positive");
  if (!(weight_range >= 0.0)) throw validation_error("config: weight_range must be non-negative");
  if (repeats < 1) throw validation_error("config: repeats must be positive");
  if (!grid.empty()) parse_grid(grid, train.trainer, repeats, train.seed);
}

PipelineConfig parse_config(std::istream& in) {
  PipelineConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view t = line;
    t = detail::trim(t.substr(0, t.find('#')));
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos)
      throw validation_error("config line " + std::to_string(lineno) + ": expected key=value");
    try {
      cfg.set(t.substr(0, eq), t.substr(eq + 1));
    } catch (const Error& e) {
      throw validation_error("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

PipelineConfig load_config(const std::string& path) {
  std::istringstream in(detail::read_file(path));
  return parse_config(in);
}

std::string format_config(const PipelineConfig& cfg) {
  using detail::format_exact;
  std::ostringstream out;
  out << "trainer=" << to_string(cfg.train.trainer) << '\n'
      << "eta=" << format_exact(cfg.train.eta) << '\n'
      << "alpha=" << format_exact(cfg.train.alpha) << '\n'
      << "max_epochs=" << cfg.train.max_epochs << '\n'
      << "goal_mse=" << format_exact(cfg.train.goal_mse) << '\n'
      << "lm_mu0=" << format_exact(cfg.train.lm_mu0) << '\n'
      << "lm_mu_inc=" << format_exact(cfg.train.lm_mu_inc) << '\n'
      << "lm_mu_dec=" << format_exact(cfg.train.lm_mu_dec) << '\n'
      << "lm_mu_max=" << format_exact(cfg.train.lm_mu_max) << '\n'
      << "seed=" << cfg.train.seed << '\n'
      << "topology=" << cfg.topology << '\n'
      << "activations=" << cfg.activations << '\n'
      << "train_fraction=" << format_exact(cfg.train_fraction) << '\n'
      << "outlier_k=" << format_exact(cfg.outlier_k) << '\n'
      << "weight_range=" << format_exact(cfg.weight_range) << '\n'
      << "repeats=" << cfg.repeats << '\n'
      << "threads=" << cfg.threads << '\n'
      << "grid=" << cfg.grid << '\n';
  return out.str();
}

}  // namespace mealcast
