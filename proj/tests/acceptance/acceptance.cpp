// Acceptance suite: runs the shipped experiment configs through the same
// entry point as the command-line tool and checks each criterion. Prints one
// PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "nlts/estimate.hpp"
#include "nlts/experiments.hpp"
#include "nlts/params_json.hpp"
#include "nlts/simulate.hpp"

namespace ex = nlts::experiments;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path g_configs;
fs::path g_work;
std::vector<fs::path> g_manifests;

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool condition, const std::string& what) {
    if (!condition) ok = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (condition ? "" : " [x]");
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

struct RunResult {
  int code = 0;
  json report;
  double seconds = 0.0;
};

RunResult run_config(const std::string& name) {
  RunResult r;
  const fs::path out = g_work / name;
  fs::remove_all(out);
  ex::RunOptions o;
  o.out_dir = out;
  std::ostringstream err;
  const auto start = std::chrono::steady_clock::now();
  r.code = ex::run(g_configs / (name + ".json"), o, err);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (r.code != ex::exit_ok) {
    std::cerr << name << ": exit " << r.code << "\n" << err.str();
    return r;
  }
  std::ifstream in(out / "report.json");
  r.report = json::parse(in);
  g_manifests.push_back(out / "manifest.json");
  return r;
}

int count_verdicts(const json& report, const std::string& verdict) {
  int n = 0;
  for (const auto& s : report["per_seed"]) n += s["verdict"] == verdict;
  return n;
}

Outcome filter_consistency() {
  Outcome o;
  double total = 0.0;
  for (const char* name : {"simulate_stgarch", "simulate_agarch", "simulate_intgarch", "simulate_star"}) {
    const RunResult r = run_config(name);
    total += r.seconds;
    if (r.code != 0) {
      o.require(false, std::string(name) + " exit " + std::to_string(r.code));
      continue;
    }
    const double e = r.report["filter_consistency"]["sup_relative_error"];
    o.require(e < 1e-8, r.report["family"].get<std::string>() + " sup rel err " + fmt(e) + " < 1e-8");
  }
  o.require(total < 5.0, "runtime " + fmt(total) + " s < 5 s");
  return o;
}

Outcome stgarch_point() {
  Outcome o;
  const RunResult r = run_config("ident_stgarch");
  if (r.code != 0) return {false, "exit " + std::to_string(r.code)};
  const int point = count_verdicts(r.report, "point-identified");
  const double dist = r.report["summary"]["max_minimizer_distance"];
  o.require(point >= 19, std::to_string(point) + "/20 point-identified (>= 19)");
  o.require(dist <= 0.05, "max minimizer distance " + fmt(dist) + " <= 0.05");
  o.require(r.seconds < 600.0, "runtime " + fmt(r.seconds) + " s < 600 s");
  return o;
}

Outcome stgarch_partial() {
  Outcome o;
  const RunResult r = run_config("partial_stgarch");
  if (r.code != 0) return {false, "exit " + std::to_string(r.code)};
  const json& p = r.report["probe"];
  const double grid = p["max_grid_D"];
  const double dev = p["subvector_max_deviation"];
  const double eps = p["ident"]["eps"];
  double omega_d = -1.0;
  for (const auto& q : p["perturbations"]) {
    if (q["manifold"] == "omega") omega_d = q["D"];
  }
  o.require(p["ident"]["verdict"] == "ridge", "verdict " + p["ident"]["verdict"].get<std::string>());
  o.require(grid < 1e-12, "max grid D " + fmt(grid) + " < 1e-12");
  o.require(dev <= 1e-6, "(omega, alpha1, beta) deviation " + fmt(dev) + " <= 1e-6");
  o.require(omega_d > eps, "omega+0.02 D " + fmt(omega_d) + " > eps " + fmt(eps));
  o.require(r.seconds < 120.0, "runtime " + fmt(r.seconds) + " s < 120 s");
  return o;
}

Outcome intgarch() {
  Outcome o;
  const RunResult a = run_config("ident_intgarch");
  const RunResult b = run_config("ident_intgarch_equal");
  if (a.code != 0 || b.code != 0) return {false, "exit " + std::to_string(a.code) + "/" + std::to_string(b.code)};
  const int point = count_verdicts(a.report, "point-identified");
  o.require(point >= 18, std::to_string(point) + "/20 point-identified incl. l (>= 18)");
  const int ridge = count_verdicts(b.report, "ridge");
  const int seeds = static_cast<int>(b.report["per_seed"].size());
  o.require(ridge == seeds, "equal slopes: " + std::to_string(ridge) + "/" + std::to_string(seeds) + " ridge");
  bool flat = !b.report["profile"].empty();
  std::string spread;
  for (const auto& p : b.report["profile"]) {
    flat = flat && p["flat"].get<bool>();
    spread = "profile spread " + (p["spread"].is_null() ? std::string("n/a") : fmt(p["spread"])) + " <= 2 se " +
             fmt(2.0 * p["mc_std_error"].get<double>());
  }
  o.require(flat, spread);
  const double t = a.seconds + b.seconds;
  o.require(t < 600.0, "runtime " + fmt(t) + " s < 600 s");
  return o;
}

Outcome star() {
  Outcome o;
  const RunResult r = run_config("ident_star");
  if (r.code != 0) return {false, "exit " + std::to_string(r.code)};
  const int point = count_verdicts(r.report, "point-identified");
  o.require(point >= 19, std::to_string(point) + "/20 point-identified incl. d (>= 19)");
  o.require(r.seconds < 600.0, "runtime " + fmt(r.seconds) + " s < 600 s");
  return o;
}

Outcome lemma_sweep() {
  Outcome o;
  const RunResult r = run_config("lemma_sweep");
  if (r.code != 0) return {false, "exit " + std::to_string(r.code)};
  const json& s = r.report["summary"];
  const int indep = s["distinct_independent"];
  const int dep = s["duplicates_dependent"];
  const double lo = s["min_distinct_eigenvalue"];
  const double hi = s["max_duplicate_eigenvalue"];
  o.require(indep == 200 && lo > 1e-8, std::to_string(indep) + "/200 independent, min eig " + fmt(lo) + " > 1e-8");
  o.require(dep == 20 && hi < 1e-12, std::to_string(dep) + "/20 dependent, max eig " + fmt(hi) + " < 1e-12");
  o.require(r.seconds < 60.0, "runtime " + fmt(r.seconds) + " s < 60 s");
  return o;
}

Outcome laplace() {
  Outcome o;
  const RunResult r = run_config("laplace");
  if (r.code != 0) return {false, "exit " + std::to_string(r.code)};
  const json& s = r.report["summary"];
  const double e0 = s["max_F0_relative_error"];
  const double e1 = s["max_F1_relative_error"];
  o.require(s["points"] == 50, "50 grid points");
  o.require(e0 <= 1e-6 && e1 <= 1e-6, "max rel err F0 " + fmt(e0) + ", F1 " + fmt(e1) + " <= 1e-6");
  const json& f = r.report["fixed"];
  o.require(f["F0_vs_pi_relative_error"].get<double>() <= 1e-6, "F0(1/2;1,0) = pi");
  o.require(f["F1_closed_zero_error"].get<double>() <= 1e-6 && f["F1_quadrature_zero_error"].get<double>() <= 1e-6,
            "F1(1/2;1,0) = 0");
  o.require(r.seconds < 30.0, "runtime " + fmt(r.seconds) + " s < 30 s");
  return o;
}

Outcome agarch_demo() {
  Outcome o;
  const RunResult r = run_config("agarch_demo");
  if (r.code != 0) return {false, "exit " + std::to_string(r.code)};
  const json& s = r.report["summary"];
  const double e = s["max_error"];
  o.require(s["truths"] == 20 && e <= 1e-10, "20 truths, max error " + fmt(e) + " <= 1e-10");
  o.require(s["one_signed_always_underdetermined"].get<bool>(), "one-signed grids underdetermined");
  o.require(r.seconds < 1.0, "runtime " + fmt(r.seconds) + " s < 1 s");
  return o;
}

// Recomputes the curvature at both truths on the runs' first data seed, timed,
// and checks the values recorded in the two reports.
double curvature_min(const std::string& name, const json& report, double& seconds, std::string& note) {
  std::ifstream in(g_configs / (name + ".json"));
  const json config = json::parse(in);
  const json& run = config["run"];
  const nlts::AnyParams theta = nlts::params_from_json(config["model"]);
  nlts::SimulationRequest req;
  req.n = run["n"];
  req.seed = run.contains("seeds") ? run["seeds"][0].get<std::uint64_t>() : run["seed"].get<std::uint64_t>();
  const auto start = std::chrono::steady_clock::now();
  const nlts::SimPath path = nlts::simulate(theta, req);
  const nlts::Curvature c = nlts::curvature_at(theta, path.x);
  seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const json& recorded = report["curvature_at_truth"];
  if (!recorded.contains("min_eigenvalue") || recorded["min_eigenvalue"].get<double>() != c.min_eigenvalue) {
    note += name + " report disagrees; ";
  }
  return c.min_eigenvalue;
}

Outcome local_rank() {
  Outcome o;
  std::ifstream a(g_work / "ident_stgarch" / "report.json");
  std::ifstream b(g_work / "partial_stgarch" / "report.json");
  if (!a || !b) return {false, "criterion 2/3 reports missing"};
  const json full_report = json::parse(a);
  const json flat_report = json::parse(b);
  double seconds = 0.0;
  std::string note;
  const double full = curvature_min("ident_stgarch", full_report, seconds, note);
  const double flat = curvature_min("partial_stgarch", flat_report, seconds, note);
  o.require(full > 1e3 * flat, "min eig " + fmt(full) + " > 1e3 x flat-case " + fmt(flat));
  o.require(note.empty(), "matches recorded reports");
  o.require(seconds < 60.0, "runtime " + fmt(seconds) + " s < 60 s");
  return o;
}

Outcome stationarity() {
  Outcome o;
  const RunResult r = run_config("stationarity");
  if (r.code != 0) return {false, "exit " + std::to_string(r.code)};
  const json& m = r.report["models"];
  const std::vector<std::string> expected{"pass", "pass", "fail"};
  for (std::size_t i = 0; i < 3; ++i) {
    const json& lm = m[i]["log_moment"];
    bool same = true;
    for (const auto& v : lm["verdicts"]) same = same && v == expected[i];
    o.require(lm["stable"].get<bool>() && same, "STGARCH #" + std::to_string(i + 1) + " " + expected[i] + " x5");
  }
  auto exact = [&](const json& rep, double value, const char* verdict) {
    return rep["value"].get<double>() == value && rep["verdict"] == verdict;
  };
  o.require(exact(m[3]["condition"], 0.8, "pass") && exact(m[4]["condition"], 1.1, "fail"),
            "INTGARCH 0.8 pass, 1.1 fail");
  const bool s1 = std::abs(m[5]["sup_condition"]["value"].get<double>() - 0.8) < 1e-12 &&
                  exact(m[5]["partial_sum_condition"], 0.8, "pass");
  const bool s2 = std::abs(m[6]["sup_condition"]["value"].get<double>() - 0.5) < 1e-12 &&
                  exact(m[6]["partial_sum_condition"], 0.5, "pass");
  o.require(s1 && s2, "STAR sup 0.8 / 0.5, partial sums 0.8 / 0.5");
  o.require(r.seconds < 60.0, "runtime " + fmt(r.seconds) + " s < 60 s");
  return o;
}

Outcome determinism() {
  Outcome o;
  int same = 0;
  for (const auto& m : g_manifests) {
    std::ostringstream err;
    const int code = ex::replay(m, err);
    if (code == ex::exit_ok) {
      ++same;
    } else {
      o.require(false, m.parent_path().filename().string() + " exit " + std::to_string(code));
      std::cerr << err.str();
    }
  }
  o.require(same == static_cast<int>(g_manifests.size()) && same > 0,
            std::to_string(same) + "/" + std::to_string(g_manifests.size()) + " replays identical");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: acceptance <config-dir> <work-dir>\n";
    return 2;
  }
  g_configs = argv[1];
  g_work = argv[2];
  fs::create_directories(g_work);

  int failed = 0;
  auto report = [&](int id, const std::string& title, const Outcome& o) {
    std::cout << (o.ok ? "PASS " : "FAIL ") << id << ". " << title << ": " << o.detail << std::endl;
    failed += o.ok ? 0 : 1;
  };

  report(1, "filter-simulator consistency", filter_consistency());

  report(2, "STGARCH point identification", stgarch_point());
  report(3, "STGARCH partial identification at alpha2 = 0", stgarch_partial());
  report(4, "INTGARCH threshold identification", intgarch());
  report(5, "STAR identification", star());
  report(6, "logistic-family Gram sweep", lemma_sweep());
  report(7, "Laplace transform closed forms", laplace());
  report(8, "AGARCH news-impact deduction", agarch_demo());
  report(9, "local identifiability rank", local_rank());
  report(10, "stationarity conditions", stationarity());
  report(11, "replay determinism", determinism());

  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
