#include "mealcast/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "mealcast/error.hpp"
#include "mealcast/metrics.hpp"
#include "text_util.hpp"

namespace mealcast {

std::string CandidateSpec::label() const { return topology.to_string() + ":" + format_activations(activations); }

void CandidateSpec::validate() const {
  if (activations.size() != topology.weight_layers())
    throw validation_error("candidate " + label() + ": activation count does not match weight layers");
  if (repeats < 1) throw validation_error("candidate " + label() + ": repeats must be positive");
}

std::vector<CandidateSpec> parse_grid(std::string_view text, TrainerKind trainer, int repeats, std::uint64_t seed_base) {
  std::vector<CandidateSpec> grid;
  for (auto entry : detail::split(text, ';')) {
    entry = detail::trim(entry);
    if (entry.empty()) continue;
    const auto colon = entry.find(':');
    if (colon == std::string_view::npos)
      throw validation_error("grid entry '" + std::string(entry) + "' must be topology:activations");
    CandidateSpec s{Topology::parse(entry.substr(0, colon)), parse_activations(entry.substr(colon + 1)), trainer,
                    repeats, seed_base};
    s.validate();
    grid.push_back(std::move(s));
  }
  if (grid.empty()) throw validation_error("grid declares no candidates");
  return grid;
}

std::vector<CandidateSpec> default_grid(int repeats, std::uint64_t seed_base) {
  static constexpr std::pair<std::string_view, std::string_view> kRows[] = {
      {"8-5-1", "logsig-tansig"},
      {"8-5-1", "tansig-tansig"},
      {"8-5-5-1", "logsig-logsig-tansig"},
      {"8-5-5-1", "logsig-tansig-tansig"},
      {"8-10-5-1", "logsig-logsig-tansig"},
      {"8-10-5-1", "logsig-tansig-tansig"},
      {"8-10-10-1", "logsig-logsig-tansig"},
      {"8-10-10-1", "logsig-tansig-tansig"},
      {"8-10-15-1", "logsig-logsig-tansig"},
      {"8-10-15-1", "logsig-tansig-tansig"},
  };
  std::vector<CandidateSpec> grid;
  for (const auto& [topo, acts] : kRows)
    grid.push_back({Topology::parse(topo), parse_activations(acts), TrainerKind::levenberg_marquardt, repeats, seed_base});
  return grid;
}

namespace {

struct RepeatOutcome {
  bool ok = false;
  CandidateResult result;
  std::string error;
};

std::span<const double> view(const Eigen::VectorXd& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

RepeatOutcome run_repeat(const FeatureMatrix& train, const FeatureMatrix& test, const CandidateSpec& spec,
                         std::uint64_t seed, const TrainConfig& cfg, const GridOptions& options) {
  RepeatOutcome out;
  try {
    TrainConfig c = cfg;
    c.trainer = spec.trainer;
    c.seed = seed;
    auto model = init_model(spec.topology, spec.activations, seed, options.weight_range);
    model.set_target_bounds(train.bounds);
    model.set_codebooks(train.codebooks);
    if (options.train_observer) options.train_observer(train.inputs);
    auto trained = mealcast::train(std::move(model), train.inputs, train.targets, c);

    const Eigen::VectorXd train_pred = predict_rows(trained.model, train.inputs);
    const Eigen::VectorXd test_pred = predict_rows(trained.model, test.inputs);
    if (!train_pred.allFinite() || !test_pred.allFinite()) throw runtime_error("non-finite predictions");

    auto& r = out.result;
    r.spec = spec;
    r.seed = seed;
    r.train_r = pearson_r(view(train.targets), view(train_pred));
    r.test_r = pearson_r(view(test.targets), view(test_pred));
    r.train_mse = mse(view(train.targets), view(train_pred));
    r.test_mse = mse(view(test.targets), view(test_pred));
    r.history = std::move(trained.history);
    r.model = std::move(trained.model);
    out.ok = true;
  } catch (const std::exception& e) {
    out.error = "seed " + std::to_string(seed) + ": " + e.what();
  }
  return out;
}

bool better(const CandidateResult& a, const CandidateResult& b) {
  if (a.test_r != b.test_r) return a.test_r > b.test_r;
  return a.test_mse < b.test_mse;
}

CandidateResult run_candidate(const FeatureMatrix& train, const FeatureMatrix& test, const CandidateSpec& spec,
                              std::size_t index, const TrainConfig& cfg, const GridOptions& options) {
  CandidateResult best;
  best.spec = spec;
  best.grid_index = index;
  bool have = false;
  std::string errors;
  try {
    spec.validate();
    if (spec.topology.input_dim() != train.inputs.cols())
      throw validation_error("topology input width " + std::to_string(spec.topology.input_dim()) +
                             " does not match " + std::to_string(train.inputs.cols()) + " features");
    for (int i = 0; i < spec.repeats; ++i) {
      auto rep = run_repeat(train, test, spec, spec.seed_base + static_cast<std::uint64_t>(i), cfg, options);
      if (!rep.ok) {
        if (!errors.empty()) errors += "; ";
        errors += rep.error;
        continue;
      }
      if (!have || better(rep.result, best)) {
        best = std::move(rep.result);
        best.grid_index = index;
        have = true;
      }
    }
  } catch (const std::exception& e) {
    errors = e.what();
  }
  if (!have) best.error = errors.empty() ? "no repeat completed" : errors;
  return best;
}

}  // namespace

std::vector<CandidateResult> run_grid(const FeatureMatrix& train, const FeatureMatrix& test,
                                      const std::vector<CandidateSpec>& grid, const TrainConfig& cfg,
                                      const GridOptions& options) {
  if (train.inputs.cols() != test.inputs.cols()) throw validation_error("train and test feature counts differ");
  if (!(train.bounds == test.bounds)) throw validation_error("train and test use different target bounds");
  if (train.codebooks != test.codebooks) throw validation_error("train and test use different codebooks");
  if (train.rows() == 0 || test.rows() == 0) throw validation_error("train and test matrices must be non-empty");

  std::vector<CandidateResult> results(grid.size());
  if (grid.empty()) return results;

  unsigned workers = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(grid.size()));

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++)
      results[i] = run_candidate(train, test, grid[i], i, cfg, options);
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return results;
}

const CandidateResult& select_best(const std::vector<CandidateResult>& results) {
  const CandidateResult* best = nullptr;
  for (const auto& r : results) {
    if (!r.ok()) continue;
    if (!best || better(r, *best) ||
        (r.test_r == best->test_r && r.test_mse == best->test_mse && r.grid_index < best->grid_index))
      best = &r;
  }
  if (!best) throw runtime_error("select_best: no successfully trained candidate");
  return *best;
}

std::string format_grid_csv(const std::vector<CandidateResult>& results) {
  using detail::format_fixed;
  std::string out =
      "no,model,trainer,activations,hidden_layers,hidden_neurons,train_r,test_r,train_mse,test_mse,epochs,stop,seed,"
      "error\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    const auto& dims = r.spec.topology.dims;
    std::string hidden;
    for (std::size_t k = 1; k + 1 < dims.size(); ++k) {
      if (!hidden.empty()) hidden += '-';
      hidden += std::to_string(dims[k]);
    }
    out += std::to_string(i + 1) + ',' + r.spec.topology.to_string() + ',' +
           (r.spec.trainer == TrainerKind::levenberg_marquardt ? "trainlm" : "traingdm") + ',' +
           format_activations(r.spec.activations) + ',' + std::to_string(dims.size() >= 2 ? dims.size() - 2 : 0) +
           ',' + hidden + ',';
    if (r.ok()) {
      out += format_fixed(r.train_r, 6) + ',' + format_fixed(r.test_r, 6) + ',' + format_fixed(r.train_mse, 6) + ',' +
             format_fixed(r.test_mse, 6) + ',' + std::to_string(r.history.mse.size()) + ',' +
             std::string(to_string(r.history.stop)) + ',' + std::to_string(r.seed) + ',';
    } else {
      std::string msg = r.error;
      std::replace(msg.begin(), msg.end(), ',', ';');
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      out += ",,,,,,," + msg;
    }
    out += '\n';
  }
  return out;
}

}  // namespace mealcast
