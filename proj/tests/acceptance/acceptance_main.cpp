// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "mealcast/codebook.hpp"
#include "mealcast/dataio.hpp"
#include "mealcast/encoding.hpp"
#include "mealcast/metrics.hpp"
#include "mealcast/model_io.hpp"
#include "mealcast/rng.hpp"
#include "mealcast/search.hpp"
#include "mealcast/training.hpp"
#include "oracles.hpp"
#include "reference_tables.hpp"

using namespace mealcast;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string exact(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

// ---- 1: menu encoding ----------------------------------------------------

Outcome menu_encoding() {
  const auto books = build_codebooks();
  int matched = 0;
  std::string first_miss;
  for (const auto& e : reference::kMenuEncoding) {
    std::string got = "missing";
    for (const auto& b : books)
      if (b.feature() == e.feature && b.code(e.label) == e.code) got = fmt("%.6f", b.normalized(e.label));
    if (got == fmt("%.6f", e.normalized))
      ++matched;
    else if (first_miss.empty())
      first_miss = std::string(e.label) + " -> " + got;
  }
  const double bamya = books[kMainDish].normalized("Bamya");
  const double ezogelin = books[kSoup].normalized("Ezogelin Çorbası");
  Outcome o;
  o.pass = matched == static_cast<int>(reference::kMenuEncoding.size()) && fmt("%.6f", bamya) == "0.076923" &&
           fmt("%.6f", ezogelin) == "0.125000";
  o.detail = std::to_string(matched) + "/" + std::to_string(reference::kMenuEncoding.size()) +
             " entries equal to 6 decimals; Bamya " + fmt("%.6f", bamya) + ", Ezogelin " + fmt("%.6f", ezogelin);
  if (!first_miss.empty()) o.detail += "; first mismatch " + first_miss;
  return o;
}

// ---- 2: reference result rows ---------------------------------------------

Outcome result_rows() {
  std::vector<double> y, yhat;
  for (const auto& r : reference::kResultRows) {
    y.push_back(r.actual);
    yhat.push_back(r.predicted);
  }
  const auto rep = build_report(y, yhat, RowMetric::shifted);
  double worst = 0.0;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& w = reference::kResultRows[i];
    worst = std::max({worst, std::fabs(rep.rows[i].mape_pct - w.mape_pct), std::fabs(rep.rows[i].mse - w.mse),
                      std::fabs(rep.rows[i].r2_pct - w.r2_pct)});
  }
  const double row23 = rep.rows[22].mape_pct;
  const double dm = std::fabs(rep.averages.mape_pct - reference::kAverageMapePct);
  const double ds = std::fabs(rep.averages.mse - reference::kAverageMse);
  const double dr = std::fabs(rep.averages.r2_pct - reference::kAverageR2Pct);
  Outcome o;
  o.pass = rep.rows.size() == 31 && worst <= 5e-4 && std::fabs(row23 - 0.5) <= 5e-4 && dm <= 0.01 && ds <= 0.01 &&
           dr <= 0.01;
  o.detail = "max entry deviation " + fmt("%.2e", worst) + " (tol 5e-4); row 23 MAPE " + fmt("%.6f", row23) +
             "; averages (" + fmt("%.6f", rep.averages.mape_pct) + ", " + fmt("%.6f", rep.averages.mse) + ", " +
             fmt("%.4f", rep.averages.r2_pct) + ") tol 0.01";
  return o;
}

// ---- 3: gradient correctness -----------------------------------------------

Outcome gradient_correctness() {
  const std::vector<std::pair<const char*, const char*>> models = {
      {"8-5-1", "logsig-tansig"},           {"8-5-1", "tansig-tansig"},
      {"8-5-5-1", "logsig-logsig-tansig"},  {"8-5-5-1", "logsig-tansig-tansig"},
      {"8-10-10-1", "logsig-logsig-tansig"}, {"8-10-10-1", "logsig-tansig-tansig"},
  };
  double worst_bp = 0.0, worst_j = 0.0;
  int count = 0;
  for (std::uint64_t rep = 0; rep < 2; ++rep) {
    for (const auto& [topo, acts] : models) {
      const std::uint64_t seed = 1000 + static_cast<std::uint64_t>(count);
      const auto m = init_model(Topology::parse(topo), parse_activations(acts), seed);
      Rng rng(seed);
      Eigen::MatrixXd x(5, 8);
      Eigen::VectorXd d(5);
      for (Eigen::Index p = 0; p < 5; ++p) {
        for (Eigen::Index c = 0; c < 8; ++c) x(p, c) = rng.uniform();
        d(p) = rng.uniform();
      }
      const auto ref = oracle::fd_gradient(m, x, d);
      const auto bp = error_gradient(m, x, d);
      const auto jac = assemble_jacobian(m, x, d);
      const Eigen::VectorXd jg = -(jac.j.transpose() * jac.residual);
      for (std::size_t i = 0; i < ref.size(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        worst_bp = std::max(worst_bp, oracle::rel_err(bp(k), ref[i]));
        worst_j = std::max(worst_j, oracle::rel_err(jg(k), ref[i]));
      }
      ++count;
    }
  }
  Outcome o;
  o.pass = count >= 10 && worst_bp < 1e-6 && worst_j < 1e-6;
  o.detail = std::to_string(count) + " models; max relative error backprop " + fmt("%.2e", worst_bp) +
             ", Jacobian " + fmt("%.2e", worst_j) + " (tol 1e-6)";
  return o;
}

// ---- 4: LM sine fit ---------------------------------------------------------

struct SineRun {
  int reached = 0;
  bool monotone = true;
  std::string artifact;
};

SineRun sine_fit() {
  Eigen::MatrixXd x(20, 1);
  Eigen::VectorXd d(20);
  for (int i = 0; i < 20; ++i) {
    x(i, 0) = std::numbers::pi * i / 19.0;
    d(i) = std::sin(x(i, 0));
  }
  TrainConfig cfg;
  cfg.max_epochs = 200;
  SineRun run;
  std::ostringstream art;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto res = train_lm(init_model(Topology::parse("1-8-1"), parse_activations("tansig-purelin"), seed), x, d, cfg);
    const auto& h = res.history.mse;
    for (std::size_t i = 1; i < h.size(); ++i)
      if (h[i] > h[i - 1]) run.monotone = false;
    const bool ok = !h.empty() && h.back() < 1e-3 && h.size() <= 200;
    run.reached += ok ? 1 : 0;
    art << "seed " << seed << ' ' << to_string(res.history.stop) << ' ' << h.size();
    for (double v : h) art << ' ' << exact(v);
    art << '\n';
    write_model(art, res.model);
  }
  run.artifact = art.str();
  return run;
}

Outcome lm_competence(const SineRun& run) {
  Outcome o;
  o.pass = run.reached >= 8 && run.monotone;
  o.detail = std::to_string(run.reached) + "/10 seeds reach MSE < 1e-3 within 200 iterations; SSE " +
             (run.monotone ? "never increased" : "INCREASED on an accepted step");
  return o;
}

// ---- 5: end-to-end grid -----------------------------------------------------

struct GridRun {
  std::size_t rows = 0;
  std::vector<CandidateResult> results;
  std::string artifact;
};

GridRun grid_run() {
  const auto raw = synthesize(730, 2024, SynthProfile{.missing_defects = 150, .outlier_defects = 30});
  const auto cleaned = clean(raw);
  const auto parts = split(cleaned.data, 0.7, 1);
  const auto books = build_codebooks();
  const auto bounds = demand_bounds(parts.train);
  const auto train = encode_dataset(parts.train, books, bounds);
  const auto test = encode_dataset(parts.test, books, bounds);
  GridRun run;
  run.rows = cleaned.data.size();
  run.results = run_grid(train, test, default_grid(), TrainConfig{});
  std::ostringstream art;
  art << format_grid_csv(run.results);
  bool any = false;
  for (const auto& r : run.results) any = any || r.ok();
  if (any) write_model(art, *select_best(run.results).model);
  run.artifact = art.str();
  return run;
}

Outcome end_to_end(const GridRun& run, double seconds) {
  double best_one = -2.0, best_two = -2.0;
  bool all_ok = run.results.size() == 10;
  for (const auto& r : run.results) {
    if (!r.ok()) {
      all_ok = false;
      continue;
    }
    auto& slot = r.spec.topology.weight_layers() == 2 ? best_one : best_two;
    slot = std::max(slot, r.test_r);
  }
  double selected = -2.0;
  std::string label = "none";
  if (all_ok) {
    const auto& best = select_best(run.results);
    selected = best.test_r;
    label = best.spec.label();
  }
  Outcome o;
  o.pass = run.rows == 550 && all_ok && best_two >= best_one && selected >= 0.95 && seconds < 300.0;
  o.detail = std::to_string(run.rows) + " rows, " + std::to_string(run.results.size()) +
             " candidates; best test R one-hidden " + fmt("%.4f", best_one) + ", two-hidden " + fmt("%.4f", best_two) +
             "; selected " + label + " test R " + fmt("%.4f", selected) + " (min 0.95)";
  return o;
}

// ---- 6: uncentered R^2 ------------------------------------------------------

Outcome r2_uncentered_check() {
  std::vector<double> y, yhat;
  Rng rng(6);
  for (int i = 0; i < 40; ++i) {
    y.push_back(rng.uniform(0.2, 1.0));
    yhat.push_back(y.back() + 0.15);
  }
  const double got = r2_uncentered(y, yhat);
  const double ref = oracle::r2_uncentered(y, yhat);
  const double centered = oracle::r2_centered(y, yhat);
  Outcome o;
  o.pass = std::fabs(got - ref) <= 1e-12 && std::fabs(got - centered) > 1e-3;
  o.detail = "r2 " + fmt("%.15f", got) + ", oracle " + fmt("%.15f", ref) + " (|diff| " +
             fmt("%.1e", std::fabs(got - ref)) + ", tol 1e-12); centered R2 " + fmt("%.6f", centered);
  return o;
}

// ---- 7: determinism ---------------------------------------------------------

Outcome determinism(const SineRun& sine, const GridRun& grid, const fs::path& dir) {
  fs::create_directories(dir);
  spit(dir / "sine_run1.txt", sine.artifact);
  spit(dir / "grid_run1.txt", grid.artifact);
  spit(dir / "sine_run2.txt", sine_fit().artifact);
  spit(dir / "grid_run2.txt", grid_run().artifact);
  const bool same_sine = slurp(dir / "sine_run1.txt") == slurp(dir / "sine_run2.txt");
  const bool same_grid = slurp(dir / "grid_run1.txt") == slurp(dir / "grid_run2.txt");
  Outcome o;
  o.pass = same_sine && same_grid && !sine.artifact.empty() && !grid.artifact.empty();
  o.detail = std::string("sine-fit result files ") + (same_sine ? "identical" : "DIFFER") + ", grid result files " +
             (same_grid ? "identical" : "DIFFER") + " (" + dir.string() + ")";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path out_dir = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "mealcast_acceptance";
  int failures = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& fn, double limit_s) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit_s > 0 && s >= limit_s) {
      o.pass = false;
      o.detail += "; over time limit";
    }
    if (!o.pass) ++failures;
    std::printf("%s  %d  %-22s %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), s);
    std::fflush(stdout);
  };

  SineRun sine;
  GridRun grid;
  double grid_seconds = 0.0;

  report(1, "menu encoding", menu_encoding, 1.0);
  report(2, "result table", result_rows, 1.0);
  report(3, "gradient check", gradient_correctness, 10.0);
  report(4, "lm sine fit", [&] {
    sine = sine_fit();
    return lm_competence(sine);
  }, 30.0);
  report(5, "end-to-end grid", [&] {
    const auto t0 = std::chrono::steady_clock::now();
    grid = grid_run();
    grid_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return end_to_end(grid, grid_seconds);
  }, 300.0);
  report(6, "uncentered r2", r2_uncentered_check, 1.0);
  report(7, "determinism", [&] { return determinism(sine, grid, out_dir); }, 0.0);

  std::printf("%s: %d of 7 criteria failed\n", failures ? "FAILED" : "OK", failures);
  return failures ? 1 : 0;
}
