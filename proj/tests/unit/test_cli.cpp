#include <doctest.h>

#include <cli.hpp>

#include <sipstab/builtins.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "sipstab");
  std::ostringstream out, err;
  const int code = sipstab::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("lip-bound on Example 1") {
    auto r = cli({"lip-bound", "--builtin", "example1_countable", "--N", "50"});
    CHECK(r.code == 0);
    CHECK(r.out == "0.7071067811865475\n");
    r = cli({"lip-bound", "--builtin", "example1_countable", "--N", "50", "--with-closure"});
    CHECK(r.code == 0);
    CHECK(std::stod(r.out) == doctest::Approx(1.0).epsilon(1e-12));
    r = cli({"lip-bound", "--builtin", "parabola"});
    CHECK(std::stod(r.out) == doctest::Approx(0.5).epsilon(1e-12));
  }

  TEST_CASE("check-ssc") {
    auto r = cli({"check-ssc", "--builtin", "parabola_raw"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("SSC: NOT satisfied\n", 0) == 0);
    r = cli({"check-ssc", "--builtin", "example2_unbounded", "--M", "100"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("SSC: satisfied\n", 0) == 0);
  }

  TEST_CASE("exit codes") {
    CHECK(cli({"lip-bound", "--builtin", "parabola_raw"}).code == sipstab::cli::kPrerequisite);
    CHECK(cli({"distance", "--builtin", "parabola_raw", "--x", "1"}).code == sipstab::cli::kPrerequisite);
    CHECK(cli({"lip-bound", "--builtin", "nope"}).code == sipstab::cli::kValidation);
    CHECK(cli({"lip-bound", "--builtin", "parabola", "--bogus"}).code == sipstab::cli::kValidation);
    CHECK(cli({"lip-bound"}).code == sipstab::cli::kValidation);
    CHECK(cli({"lip-bound", "--builtin", "parabola", "--scenario", "x.yaml"}).code == sipstab::cli::kValidation);
    CHECK(cli({"lip-bound", "--builtin", "parabola", "--grid-points", "abc"}).code == sipstab::cli::kValidation);
    CHECK(cli({"lip-bound", "--scenario", "/nonexistent/s.yaml"}).code == sipstab::cli::kValidation);
    CHECK(cli({"distance", "--builtin", "halfspace", "--x", "1,2,3"}).code == sipstab::cli::kValidation);
    CHECK(cli({}).code == sipstab::cli::kValidation);
    const auto r = cli({"lip-bound", "--builtin", "parabola_raw"});
    CHECK(r.out.empty());
    CHECK_FALSE(r.err.empty());
  }

  TEST_CASE("distance, farkas, coderivative, stationarity") {
    auto r = cli({"distance", "--builtin", "halfspace", "--x", "1,1"});
    CHECK(r.code == 0);
    std::istringstream is(r.out);
    double dual = 0, primal = 0;
    is >> dual >> primal;
    CHECK(dual == doctest::Approx(std::sqrt(2.0)));
    CHECK(primal == doctest::Approx(std::sqrt(2.0)));

    r = cli({"farkas", "--builtin", "halfspace", "--v", "1,1", "--alpha", "0"});
    CHECK(r.out.rfind("holds ", 0) == 0);
    CHECK(r.out.find("soundness 1000/1000") != std::string::npos);
    r = cli({"farkas", "--builtin", "halfspace", "--v", "1,0", "--alpha", "0"});
    CHECK(r.out.rfind("does-not-hold", 0) == 0);

    r = cli({"coderivative", "--builtin", "example1_countable"});
    CHECK(std::stod(r.out) == doctest::Approx(1 / std::sqrt(2.0)));
    r = cli({"coderivative", "--builtin", "halfspace", "--p-star", "-2", "--x-star", "-2,-2"});
    CHECK(r.out.rfind("member ", 0) == 0);

    r = cli({"stationarity", "--builtin", "unit_disk"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("satisfied ", 0) == 0);
    r = cli({"stationarity", "--builtin", "halfspace", "--grad-p", "0", "--grad-x", "1,0"});
    CHECK(r.out.rfind("violated ", 0) == 0);
  }

  TEST_CASE("lip-sample is reproducible across runs and threads") {
    const std::vector<std::string> base{"lip-sample", "--builtin", "unit_disk", "--radii", "0.01", "--samples", "200",
                                        "--seed", "5"};
    const auto a = cli(base);
    const auto b = cli(base);
    auto threaded = base;
    threaded.insert(threaded.end(), {"--threads", "3"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == cli(threaded).out);
  }

  TEST_CASE("run output is byte-identical for a fixed seed") {
    const auto a = cli({"run", "--builtin", "example1_countable", "--seed", "7"});
    const auto b = cli({"run", "--builtin", "example1_countable", "--seed", "7"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("\"timings\"") == std::string::npos);
  }

  TEST_CASE("run matches the committed golden reports") {
    for (const auto& name : sipstab::builtin_names()) {
      const fs::path golden = fs::path(SIPSTAB_GOLDEN_DIR) / (name + ".json");
      REQUIRE_MESSAGE(fs::exists(golden), golden.string());
      const auto r = cli({"run", "--builtin", name});
      CHECK_MESSAGE(r.code == 0, name);
      CHECK_MESSAGE(r.out == slurp(golden), name);
    }
  }

  TEST_CASE("run writes files") {
    const fs::path dir = fs::temp_directory_path() / "sipstab_cli_run";
    fs::remove_all(dir);
    fs::create_directories(dir);
    auto r = cli({"run", "--builtin", "halfspace", "--out", (dir / "h.json").string()});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    CHECK(slurp(dir / "h.json") == cli({"run", "--builtin", "halfspace"}).out);
    r = cli({"run", "--builtin", "halfspace", "--format", "csv", "--out", (dir / "bundle").string()});
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "bundle" / "trend.csv"));
    CHECK(cli({"run", "--builtin", "halfspace", "--format", "xml"}).code == sipstab::cli::kValidation);
  }

  TEST_CASE("config file from the environment") {
    const fs::path cfg = fs::temp_directory_path() / "sipstab_cli_config.yaml";
    {
      std::ofstream out(cfg);
      out << "seed: 5\nthreads: 2\n";
    }
    const std::vector<std::string> args{"lip-sample", "--builtin", "unit_disk", "--radii", "0.01", "--samples", "100"};
    const auto plain = cli(args);
    ::setenv(sipstab::cli::kConfigEnv, cfg.string().c_str(), 1);
    const auto configured = cli(args);
    auto seeded = args;
    seeded.insert(seeded.end(), {"--seed", "5"});
    const auto flagged = cli(seeded);
    ::setenv(sipstab::cli::kConfigEnv, (cfg.string() + ".missing").c_str(), 1);
    const auto missing = cli(args);
    ::unsetenv(sipstab::cli::kConfigEnv);
    CHECK(configured.code == 0);
    CHECK(configured.out == flagged.out);
    CHECK(configured.out != plain.out);
    CHECK(missing.code == sipstab::cli::kValidation);
  }

  TEST_CASE("list-builtins") {
    const auto r = cli({"list-builtins"});
    CHECK(r.code == 0);
    for (const auto& name : sipstab::builtin_names()) CHECK(r.out.find(name) != std::string::npos);
  }
}
