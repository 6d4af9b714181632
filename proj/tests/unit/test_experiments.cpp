#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "nlts/errors.hpp"
#include "nlts/experiments.hpp"
#include "schema_check.hpp"

namespace ex = nlts::experiments;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Sandbox {
  fs::path root;
  explicit Sandbox(const std::string& name) : root(fs::temp_directory_path() / ("nlts_test_" + name)) {
    fs::remove_all(root);
    fs::create_directories(root);
  }
  ~Sandbox() { fs::remove_all(root); }

  fs::path write(const std::string& file, const json& doc) const {
    const fs::path p = root / file;
    std::ofstream(p) << doc.dump(2);
    return p;
  }
};

json simulate_config() {
  return json::parse(R"({
    "schema_version": 1,
    "command": "simulate",
    "model": {"family": "stgarch", "gamma": 2.0, "omega": 0.1, "alpha1": [0.15], "alpha2": [0.2], "beta": [0.5]},
    "run": {"n": 2000, "burn_in": 500, "seed": 7},
    "output_dir": "out"
  })");
}

json read(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

}  // namespace

TEST_SUITE("cli_experiments") {
  TEST_CASE("unknown keys are rejected") {
    json c = simulate_config();
    c["extra"] = 1;
    CHECK_THROWS_AS(ex::validate_config(c), nlts::ValidationError);
    c = simulate_config();
    c["run"]["n_paths"] = 1;
    CHECK_THROWS_AS(ex::validate_config(c), nlts::ValidationError);
    CHECK_NOTHROW(ex::validate_config(simulate_config()));
  }

  TEST_CASE("seeds are required") {
    json c = simulate_config();
    c["run"].erase("seed");
    Sandbox box("seed");
    std::ostringstream err;
    CHECK(ex::run(box.write("c.json", c), {}, err) == ex::exit_validation);
  }

  TEST_CASE("simulate writes report, manifest and CSV inside the output directory") {
    Sandbox box("simulate");
    const fs::path cfg = box.write("c.json", simulate_config());
    std::ostringstream err;
    REQUIRE(ex::run(cfg, {}, err) == ex::exit_ok);
    const fs::path out = box.root / "out";
    CHECK(fs::exists(out / "report.json"));
    CHECK(fs::exists(out / "path.csv"));
    const json manifest = read(out / "manifest.json");
    CHECK(manifest["config_hash"] == ex::config_hash(simulate_config()));
    CHECK(manifest["tool_version"] == ex::tool_version());
    CHECK(manifest.contains("wall_time_seconds"));
    const json report = read(out / "report.json");
    CHECK(report["filter_consistency"]["sup_relative_error"].get<double>() < 1e-8);
    std::size_t entries = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(box.root)) ++entries;
    CHECK(entries == 2);  // c.json and out/
  }

  TEST_CASE("--out overrides output_dir") {
    Sandbox box("out_flag");
    ex::RunOptions o;
    o.out_dir = box.root / "elsewhere";
    std::ostringstream err;
    REQUIRE(ex::run(box.write("c.json", simulate_config()), o, err) == ex::exit_ok);
    CHECK(fs::exists(box.root / "elsewhere" / "report.json"));
    CHECK_FALSE(fs::exists(box.root / "out"));
  }

  TEST_CASE("replay: identical, edited seed, missing report") {
    Sandbox box("replay");
    std::ostringstream err;
    REQUIRE(ex::run(box.write("c.json", simulate_config()), {}, err) == ex::exit_ok);
    const fs::path manifest = box.root / "out" / "manifest.json";
    CHECK(ex::replay(manifest, err) == ex::exit_ok);

    json m = read(manifest);
    m["config"]["run"]["seed"] = 8;
    std::ofstream(manifest) << m.dump(2);
    std::ostringstream diff;
    CHECK(ex::replay(manifest, diff) == ex::exit_replay_mismatch);
    CHECK(diff.str().find("replace") != std::string::npos);

    fs::remove(box.root / "out" / "report.json");
    CHECK(ex::replay(manifest, err) == ex::exit_validation);
  }

  TEST_CASE("command on the command line must match the config") {
    Sandbox box("mismatch");
    ex::RunOptions o;
    o.command = "fit";
    std::ostringstream err;
    CHECK(ex::run(box.write("c.json", simulate_config()), o, err) == ex::exit_validation);
  }

  TEST_CASE("cone violation exits with a validation error naming the cone") {
    Sandbox box("cone");
    json c = simulate_config();
    c["model"]["alpha2"] = {0.45};
    std::ostringstream err;
    CHECK(ex::run(box.write("c.json", c), {}, err) == ex::exit_validation);
    CHECK(err.str().find("cone") != std::string::npos);
  }

  TEST_CASE("missing config file") {
    std::ostringstream err;
    CHECK(ex::run("/nonexistent/config.json", {}, err) == ex::exit_validation);
  }

  TEST_CASE("lemma-check with a duplicated pair is dependent") {
    Sandbox box("lemma");
    const json c = json::parse(R"({"schema_version": 1, "command": "lemma-check",
      "run": {"pairs": [[1.0, 0.0], [1.0, 0.0]]}, "output_dir": "out"})");
    std::ostringstream err;
    REQUIRE(ex::run(box.write("c.json", c), {}, err) == ex::exit_ok);
    const json r = read(box.root / "out" / "report.json");
    CHECK(r["verdict"] == "dependent");
    CHECK(r["null_vector"].is_object());
  }

  TEST_CASE("theorem-condition refusal exits 4") {
    Sandbox box("refuse");
    json c = json::parse(R"({"schema_version": 1, "command": "partial-ident",
      "model": {"family": "stgarch", "gamma": 2.0, "omega": 0.1, "alpha1": [0.15], "alpha2": [0.2], "beta": [0.5]},
      "run": {"n": 5000, "seed": 1}, "output_dir": "out"})");
    std::ostringstream err;
    CHECK(ex::run(box.write("c.json", c), {}, err) == ex::exit_condition);
  }

  TEST_CASE("numerical failure exits 3") {
    Sandbox box("numerical");
    json c = json::parse(R"({"schema_version": 1, "command": "lemma-check",
      "run": {"pairs": [[5.0, 0.3], [4.9, -0.2], [0.2, 2.0]], "initial_order": 8, "max_order": 8},
      "output_dir": "out"})");
    std::ostringstream err;
    CHECK(ex::run(box.write("c.json", c), {}, err) == ex::exit_numerical);
  }

  TEST_CASE("agarch-demo and laplace-check succeed") {
    Sandbox box("small");
    std::ostringstream err;
    json a = json::parse(R"({"schema_version": 1, "command": "agarch-demo", "run": {"seed": 1}, "output_dir": "a"})");
    REQUIRE(ex::run(box.write("a.json", a), {}, err) == ex::exit_ok);
    CHECK(read(box.root / "a" / "report.json")["summary"]["all_recovered"] == true);
    json l = json::parse(R"({"schema_version": 1, "command": "laplace-check", "run": {"seed": 1, "count": 5},
      "output_dir": "l"})");
    REQUIRE(ex::run(box.write("l.json", l), {}, err) == ex::exit_ok);
    CHECK(read(box.root / "l" / "report.json")["summary"]["pass"] == true);
  }

  TEST_CASE("every command's report validates against its published schema") {
    Sandbox box("schemas");
    const fs::path dir = NLTS_SCHEMA_DIR;
    const json manifest_schema = read(dir / "manifest.schema.json");
    CHECK(schema_check::violation(json{{"tool", "nlts-ident"}}, manifest_schema) != "");
    CHECK(schema_check::violation(json{{"schema_version", 2}}, json{{"properties", {{"schema_version", {{"enum", {1}}}}}}}) != "");
    const std::string stg =
        R"("model": {"family": "stgarch", "gamma": 2.0, "omega": 0.1, "alpha1": [0.15], "alpha2": [0.2], "beta": [0.5]})";
    const std::string stg0 =
        R"("model": {"family": "stgarch", "gamma": 2.0, "omega": 0.1, "alpha1": [0.15], "alpha2": [0.0], "beta": [0.5]})";
    const std::vector<std::pair<std::string, std::string>> cases = {
        {"simulate", simulate_config().dump()},
        {"fit", R"({"schema_version": 1, "command": "fit", )" + stg +
                    R"(, "run": {"n": 3000, "seed": 2, "starts": 2, "search_seed": 3}})"},
        {"ident-scan", R"({"schema_version": 1, "command": "ident-scan",
            "model": {"family": "intgarch", "omega": 1.0, "alpha1": [0.5], "alpha2": [0.2], "beta": [0.2], "l": 4},
            "run": {"n": 3000, "starts": 3, "search_seed": 4, "seeds": [1]}})"},
        {"partial-ident", R"({"schema_version": 1, "command": "partial-ident", )" + stg0 +
                              R"(, "run": {"n": 3000, "seed": 1}})"},
        {"lemma-check", R"({"schema_version": 1, "command": "lemma-check", "run": {"pairs": [[1.0, 0.0], [2.0, 0.5]]}})"},
        {"lemma-check", R"({"schema_version": 1, "command": "lemma-check",
            "run": {"sweep": {"count": 4, "duplicates": 2, "seed": 5}}})"},
        {"laplace-check", R"({"schema_version": 1, "command": "laplace-check", "run": {"seed": 1, "count": 3}})"},
        {"stationarity", R"({"schema_version": 1, "command": "stationarity",
            "models": [{"family": "stgarch", "gamma": 2.0, "omega": 0.1, "alpha1": [0.2], "alpha2": [0.2], "beta": [0.5]},
                       {"family": "intgarch", "omega": 1.0, "alpha1": [0.3], "alpha2": [0.2], "beta": [0.5], "l": 4},
                       {"family": "star", "regimes": [[0.0, 0.5], [0.0, 0.3]], "gamma": [2.0], "c": [0.0]}],
            "run": {"mc_n": 2000, "seeds": [1]}})"},
        {"agarch-demo", R"({"schema_version": 1, "command": "agarch-demo", "run": {"seed": 1}})"},
    };
    int i = 0;
    for (const auto& [command, text] : cases) {
      CAPTURE(command);
      const std::string name = "c" + std::to_string(i++);
      const fs::path out = box.root / name;
      ex::RunOptions o;
      o.out_dir = out;
      std::ostringstream err;
      REQUIRE(ex::run(box.write(name + ".json", json::parse(text)), o, err) == ex::exit_ok);
      const json schema = read(dir / ("report." + command + ".schema.json"));
      CHECK(schema_check::violation(read(out / "report.json"), schema) == "");
      CHECK(schema_check::violation(read(out / "manifest.json"), manifest_schema) == "");
    }
  }
}
