#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "pgir/cli.hpp"
#include "pgir/graph.hpp"
#include "pgir/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run pgir_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = pgir::cli::run(args, out, err);
  return Run{code, out.str(), err.str()};
}

fs::path workdir(const std::string& name) {
  const char* base = std::getenv("PGIR_CLI_TMP");
  const fs::path dir = fs::path(base ? base : fs::temp_directory_path().string()) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string str(const fs::path& p) { return p.string(); }

} // namespace

TEST_CASE("analyze on K2 with one sample") {
  const auto dir = workdir("analyze");
  pgir::io::write_file_atomic(dir / "k2.edges", pgir::format_edge_list(pgir::Graph(2, {{0, 1}}), {}));
  pgir::io::write_file_atomic(dir / "mask.txt", "0\n");
  const auto r = pgir_cli({"analyze", "--graph", str(dir / "k2.edges"), "--mask", str(dir / "mask.txt"), "--omega", "1"});
  REQUIRE(r.code == 0);
  const auto doc = json::parse(r.out);
  CHECK(doc["sigma_min"].get<double>() == doctest::Approx(1.41421356).epsilon(1e-8));
  CHECK(doc["rho_A1"].get<double>() == doctest::Approx(0.5));
  CHECK(doc["mu_opt"].get<double>() == doctest::Approx(4.0 / 3.0));
  CHECK(doc["omega_within_sigma_min"].get<bool>());
}

TEST_CASE("generate, sample, reconstruct pipeline") {
  const auto dir = workdir("pipeline");
  const auto graph = str(dir / "g.edges");
  REQUIRE(pgir_cli({"gen-graph", "--model", "er", "--n", "80", "--m", "320", "--seed", "5", "--out", graph}).code == 0);
  const auto reloaded = pgir::load_edge_list(pgir::io::read_file(graph));
  CHECK(reloaded == pgir::erdos_renyi(80, 320, 5));

  REQUIRE(pgir_cli({"sample", "--graph", graph, "--fraction", "0.4", "--seed", "2", "--out", str(dir / "mask.txt")}).code == 0);
  const auto an = pgir_cli({"analyze", "--graph", graph, "--mask", str(dir / "mask.txt")});
  REQUIRE(an.code == 0);
  const double omega = json::parse(an.out)["omega"].get<double>();
  REQUIRE(pgir_cli({"gen-signal", "--graph", graph, "--omega", pgir::io::format_double(omega), "--seed", "3", "--out",
                    str(dir / "truth.csv")})
              .code == 0);

  auto rows_to = [&](const std::string& method) {
    const auto r = pgir_cli({"reconstruct", "--graph", graph, "--signal", str(dir / "truth.csv"), "--mask",
                             str(dir / "mask.txt"), "--omega", "auto", "--method", method, "--truth",
                             str(dir / "truth.csv"), "--trace", str(dir / (method + ".trace.csv")), "--out",
                             str(dir / (method + ".csv")), "--report", str(dir / (method + ".json"))});
    REQUIRE(r.code == 0);
    const auto doc = json::parse(r.out);
    CHECK(doc["final_relative_error"].get<double>() < 1e-7);
    CHECK(json::parse(pgir::io::read_file(dir / (method + ".json"))) == doc);
    std::istringstream trace(pgir::io::read_file(dir / (method + ".trace.csv")));
    std::string line;
    std::getline(trace, line);
    CHECK(line == "iteration,relative_update,relative_error");
    int row = 0;
    while (std::getline(trace, line)) {
      ++row;
      if (std::stod(line.substr(line.rfind(',') + 1)) <= 1e-6) return row;
    }
    return -1;
  };
  const int ilsr = rows_to("ilsr");
  const int opgir = rows_to("opgir");
  CHECK(opgir > 0);
  CHECK(opgir < ilsr);
}

TEST_CASE("unknown subcommand and bad flags") {
  const auto r = pgir_cli({"frobnicate"});
  CHECK(r.code != 0);
  CHECK(r.err.find("Usage") != std::string::npos);
  CHECK(pgir_cli({}).code != 0);
  CHECK(pgir_cli({"analyze", "--graph", "x"}).code != 0);
  CHECK(pgir_cli({"--help"}).code == 0);
}

TEST_CASE("validity diagnostics reach stderr") {
  const auto dir = workdir("validity");
  pgir::io::write_file_atomic(dir / "k2.edges", pgir::format_edge_list(pgir::Graph(2, {{0, 1}}), {}));
  pgir::io::write_file_atomic(dir / "mask.txt", "0\n");
  pgir::io::write_file_atomic(dir / "obs.csv", "vertex,value\n0,1\n1,0\n");
  const auto r = pgir_cli({"reconstruct", "--graph", str(dir / "k2.edges"), "--signal", str(dir / "obs.csv"), "--mask",
                           str(dir / "mask.txt"), "--omega", "2", "--trace", str(dir / "t.csv"), "--out",
                           str(dir / "o.csv")});
  CHECK(r.code == 1);
  CHECK(r.err.find("omega exceeds sigma_min") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "o.csv"));

  const auto bad = pgir_cli({"reconstruct", "--graph", str(dir / "k2.edges"), "--signal", str(dir / "obs.csv"), "--mask",
                             str(dir / "mask.txt"), "--omega", "1", "--method", "mu=3", "--trace", str(dir / "t.csv"),
                             "--out", str(dir / "o.csv")});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("mu must lie in (0,2)") != std::string::npos);
}

TEST_CASE("parse errors report the line") {
  const auto dir = workdir("parse");
  pgir::io::write_file_atomic(dir / "bad.edges", "0 1\n1 x\n");
  pgir::io::write_file_atomic(dir / "mask.txt", "0\n");
  const auto r = pgir_cli({"analyze", "--graph", str(dir / "bad.edges"), "--mask", str(dir / "mask.txt")});
  CHECK(r.code == 1);
  CHECK(r.err.find("line 2") != std::string::npos);
}

TEST_CASE("benchmark output is deterministic") {
  const auto dir = workdir("benchmark");
  auto bench = [&](const std::string& name, const std::string& threads) {
    const auto out = str(dir / name);
    const auto r = pgir_cli({"benchmark", "--er", "60,240", "--fraction", "0.5", "--trials", "5", "--seed", "11",
                             "--snr", "inf,20", "--threads", threads, "--keep-traces", "--out", out});
    REQUIRE(r.code == 0);
    return out;
  };
  const auto a = bench("a.csv", "1");
  const auto b = bench("b.csv", "2");
  CHECK(pgir::io::read_file(a) == pgir::io::read_file(b));
  CHECK(pgir::io::read_file(a + ".noise.csv") == pgir::io::read_file(b + ".noise.csv"));
  CHECK(pgir::io::read_file(a + ".traces.csv") == pgir::io::read_file(b + ".traces.csv"));
  CHECK(pgir::io::read_file(a).rfind("iteration,ilsr_mean_err,opgir_mean_err\n", 0) == 0);
  const auto meta = json::parse(pgir::io::read_file(a + ".meta.json"));
  CHECK(meta["base_seed"] == 11);
  CHECK(meta["graph"]["n"] == 60);
  CHECK(meta["signal_seeds"].size() == 5);

  const auto cached = workdir("cache");
  setenv("PGIR_BASIS_CACHE", cached.c_str(), 1);
  const auto c = bench("c.csv", "1");
  const auto d = bench("d.csv", "1");
  unsetenv("PGIR_BASIS_CACHE");
  CHECK(std::distance(fs::directory_iterator(cached), fs::directory_iterator{}) == 1);
  CHECK(pgir::io::read_file(a) == pgir::io::read_file(c));
  CHECK(pgir::io::read_file(a) == pgir::io::read_file(d));
}

TEST_CASE("benchmark needs a graph source") {
  const auto dir = workdir("nosource");
  const auto r = pgir_cli({"benchmark", "--fraction", "0.5", "--trials", "2", "--seed", "1", "--out", str(dir / "x.csv")});
  CHECK(r.code == 1);
  CHECK(r.err.find("--er") != std::string::npos);
}
