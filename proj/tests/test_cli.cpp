// End-to-end tests driving the installed binary through a shell. Exit codes:
// 0 success, 1 input error, 2 maximally-mixed verdict, 3 unsupported
// dimension for the weak-basis search.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "doctest.h"

namespace {

using Json = nlohmann::json;

struct CmdResult {
  int status;
  std::string out;
};

CmdResult run_cli(const std::string& args) {
  const std::string cmd = std::string(LOCREAL_BIN) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int rc = pclose(pipe);
  return {WEXITSTATUS(rc), out};
}

std::string write_doc(const std::string& name, const std::string& body) {
  const auto dir = std::filesystem::temp_directory_path() / "locreal_cli_tests";
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream f(path);
  f << body;
  return path.string();
}

const double kHalfRoot = 0.7071067811865476;

std::string ket0() {
  return write_doc("ket0.json", R"({"dims":[2],"matrix":[[[1,0]],[[0,0]]]})");
}

std::string bell() {
  return write_doc("bell.json",
                   Json{{"dims", {2, 2}},
                        {"matrix",
                         {{{kHalfRoot, 0.0}},
                          {{0.0, 0.0}},
                          {{0.0, 0.0}},
                          {{kHalfRoot, 0.0}}}}}
                       .dump());
}

std::string classical() {
  return write_doc(
      "classical.json",
      R"({"dims":[2,2],"matrix":[
        [[0.5,0],[0,0],[0,0],[0,0]],
        [[0,0],[0,0],[0,0],[0,0]],
        [[0,0],[0,0],[0,0],[0,0]],
        [[0,0],[0,0],[0,0],[0.5,0]]]})");
}

std::string product() {
  // diag(0.7, 0.3) x diag(0.6, 0.4).
  return write_doc(
      "product.json",
      R"({"dims":[2,2],"matrix":[
        [[0.42,0],[0,0],[0,0],[0,0]],
        [[0,0],[0.28,0],[0,0],[0,0]],
        [[0,0],[0,0],[0.18,0],[0,0]],
        [[0,0],[0,0],[0,0],[0.12,0]]]})");
}

std::string maximally_mixed_qubit() {
  return write_doc("mm.json",
                   R"({"dims":[2],"matrix":[[[0.5,0],[0,0]],[[0,0],[0.5,0]]]})");
}

}  // namespace

TEST_CASE("witness on a pure state") {
  CmdResult r = run_cli("witness --state " + ket0());
  REQUIRE(r.status == 0);
  Json doc = Json::parse(r.out);
  CHECK(doc["verdict"] == "witness");
  CHECK(doc["predicted_gap"][0].get<double>() == 0.0);
  CHECK(doc["predicted_gap"][1].get<double>() == -2.0);
  // A = sigma_x for |0>.
  CHECK(doc["a"]["matrix"][0][1][0].get<double>() == 1.0);
}

TEST_CASE("witness flags the maximally mixed state with exit code 2") {
  CmdResult r = run_cli("witness --state " + maximally_mixed_qubit());
  CHECK(r.status == 2);
  Json doc = Json::parse(r.out);
  CHECK(doc["verdict"] == "maximally-mixed");
  CHECK(doc["dim"] == 2);
}

TEST_CASE("witness rejects malformed input with exit code 1") {
  std::string ragged =
      write_doc("ragged.json", R"({"matrix":[[[1,0],[0,0]],[[0,0]]]})");
  CHECK(run_cli("witness --state " + ragged).status == 1);
  CHECK(run_cli("witness --state /nonexistent/state.json").status == 1);
}

TEST_CASE("classify the classical pair") {
  CmdResult r = run_cli("classify --state " + classical());
  REQUIRE(r.status == 0);
  Json doc = Json::parse(r.out);
  CHECK(doc["strong_local"] == false);
  REQUIRE(doc["weak_verdict"]["found"] == true);
  CHECK(std::abs(doc["weak_verdict"]["theta"].get<double>() -
                 1.5707963267948966) <= 1e-6);
  CHECK(doc["weak_verdict"]["residual"].get<double>() <= 1e-9);
  REQUIRE(doc.contains("separable_decomposition"));
  double total = 0.0;
  for (const auto& term : doc["separable_decomposition"]["terms"])
    total += term["weight"].get<double>();
  CHECK(std::abs(total - 1.0) <= 1e-9);
}

TEST_CASE("classify the Bell pair") {
  CmdResult r = run_cli("classify --state " + bell());
  REQUIRE(r.status == 0);
  Json doc = Json::parse(r.out);
  CHECK(doc["strong_local"] == false);
  CHECK(doc["pure_entangled"] == true);
  CHECK(doc["weak_verdict"]["found"] == false);
  CHECK(std::abs(doc["weak_verdict"]["residual"].get<double>() -
                 kHalfRoot) <= 1e-9);
  CHECK_FALSE(doc.contains("separable_decomposition"));
}

TEST_CASE("classify a product state") {
  CmdResult r = run_cli("classify --state " + product());
  REQUIRE(r.status == 0);
  Json doc = Json::parse(r.out);
  CHECK(doc["strong_local"] == true);
  CHECK(doc["weak_verdict"]["found"] == true);
}

TEST_CASE("classify with a measurement reports information gain") {
  std::string meas = write_doc(
      "meas.json",
      R"({"dims":[2],"operators":[[[[1,0],[0,0]],[[0,0],[0,0]]],[[[0,0],[0,0]],[[0,0],[1,0]]]]})");
  CmdResult r = run_cli("classify --state " + classical() + " --measurement " + meas);
  REQUIRE(r.status == 0);
  Json doc = Json::parse(r.out);
  REQUIRE(doc.contains("info_gain_bits"));
  // Learning which branch of the correlated mixture gains one full bit.
  CHECK(std::abs(doc["info_gain_bits"][0].get<double>() - 1.0) <= 1e-9);
  CHECK(std::abs(doc["outcome_probs"][0].get<double>() - 0.5) <= 1e-12);
}

TEST_CASE("weak search refuses a non-qubit A side unless skipped") {
  // I/6 with dims (3, 2).
  std::string wide = write_doc(
      "wide.json",
      R"({"dims":[3,2],"matrix":[
        [[0.16666666666666669,0],[0,0],[0,0],[0,0],[0,0],[0,0]],
        [[0,0],[0.16666666666666669,0],[0,0],[0,0],[0,0],[0,0]],
        [[0,0],[0,0],[0.16666666666666669,0],[0,0],[0,0],[0,0]],
        [[0,0],[0,0],[0,0],[0.16666666666666669,0],[0,0],[0,0]],
        [[0,0],[0,0],[0,0],[0,0],[0.16666666666666669,0],[0,0]],
        [[0,0],[0,0],[0,0],[0,0],[0,0],[0.16666666666666669,0]]]})");
  CHECK(run_cli("classify --state " + wide).status == 3);

  CmdResult skipped = run_cli("classify --state " + wide + " --no-weak");
  REQUIRE(skipped.status == 0);
  Json doc = Json::parse(skipped.out);
  CHECK(doc["strong_local"] == true);
  CHECK_FALSE(doc.contains("weak_verdict"));
}

TEST_CASE("scheme reports") {
  CmdResult r = run_cli("scheme single-qubit --p 0.8");
  REQUIRE(r.status == 0);
  Json doc = Json::parse(r.out);
  CHECK(std::abs(doc["gap"][1].get<double>() - 1.2) <= 1e-12);
  CHECK(std::abs(doc["d_expectation"].get<double>() - 1.2) <= 1e-12);

  CHECK(run_cli("scheme single-qubit --p 1.5").status == 1);

  CmdResult tq = run_cli("scheme two-qubit --alpha 0.5235987755982988");
  REQUIRE(tq.status == 0);
  Json tq_doc = Json::parse(tq.out);
  CHECK(std::abs(tq_doc["gap"][1].get<double>() - 1.0) <= 1e-9);
}

TEST_CASE("scheme sweeps emit csv by default") {
  CmdResult r = run_cli("scheme single-qubit --sweep 0:1:3");
  REQUIRE(r.status == 0);
  CHECK(r.out == "param,gap_imag,d_expectation\n0,-2,-2\n0.5,0,0\n1,2,2\n");

  CmdResult tq = run_cli("scheme two-qubit --sweep 0:1.5707963267948966:3");
  REQUIRE(tq.status == 0);
  CHECK(tq.out.substr(0, 29) == "param,gap_imag,d_expectation\n");
  // 1 header + 3 rows.
  int lines = 0;
  for (char c : tq.out)
    if (c == '\n') ++lines;
  CHECK(lines == 4);

  CmdResult js = run_cli("scheme single-qubit --sweep 0:1:3 --format json");
  REQUIRE(js.status == 0);
  Json doc = Json::parse(js.out);
  CHECK(doc["rows"].size() == 3);

  CHECK(run_cli("scheme single-qubit --sweep 0:1:1").status == 1);
  CHECK(run_cli("scheme single-qubit --sweep nonsense").status == 1);
}

TEST_CASE("standalone sweep subcommand") {
  CmdResult r = run_cli("sweep --scheme single-qubit --from 0 --to 1 --steps 3");
  REQUIRE(r.status == 0);
  CHECK(r.out == "param,gap_imag,d_expectation\n0,-2,-2\n0.5,0,0\n1,2,2\n");

  CmdResult jobs = run_cli(
      "sweep --scheme two-qubit --from 0 --to 1.5 --steps 101 --jobs 4");
  CmdResult serial = run_cli(
      "sweep --scheme two-qubit --from 0 --to 1.5 --steps 101 --jobs 1");
  REQUIRE(jobs.status == 0);
  CHECK(jobs.out == serial.out);
}

TEST_CASE("sampling is reproducible from the command line") {
  const std::string args =
      "sample --scheme two-qubit --alpha 0.5 --shots 20000 --seed 42";
  CmdResult a = run_cli(args);
  CmdResult b = run_cli(args);
  REQUIRE(a.status == 0);
  CHECK(a.out == b.out);

  Json doc = Json::parse(a.out);
  CHECK(doc["shots"] == 20000);
  CHECK(doc["seed"] == 42);
  double est = doc["estimate"][1].get<double>();
  double exact = doc["exact_gap"][1].get<double>();
  double err = doc["std_error"].get<double>();
  CHECK(std::abs(est - exact) <= 5.0 * err);

  CmdResult other = run_cli(
      "sample --scheme two-qubit --alpha 0.5 --shots 20000 --seed 43");
  CHECK(other.out != a.out);

  CmdResult single = run_cli(
      "sample --scheme single-qubit --p 0.8 --shots 1 --seed 9");
  REQUIRE(single.status == 0);
  CHECK(Json::parse(single.out)["std_error"].get<double>() == 0.0);
}

TEST_CASE("sampling from state and observable files") {
  std::string obs = write_doc(
      "sz.json", R"({"dims":[2],"matrix":[[[1,0],[0,0]],[[0,0],[-1,0]]]})");
  CmdResult r = run_cli("sample --state " + ket0() + " --obs " + obs +
                        " --shots 100 --seed 2");
  REQUIRE(r.status == 0);
  Json doc = Json::parse(r.out);
  CHECK(doc["mean"].get<double>() == 1.0);
  CHECK(doc["exact_mean"].get<double>() == 1.0);

  std::string sx = write_doc(
      "sx.json", R"({"dims":[2],"matrix":[[[0,0],[1,0]],[[1,0],[0,0]]]})");
  std::string sy = write_doc(
      "sy.json", R"({"dims":[2],"matrix":[[[0,0],[0,-1]],[[0,1],[0,0]]]})");
  std::string biased = write_doc(
      "biased.json", R"({"dims":[2],"matrix":[[[0.8,0],[0,0]],[[0,0],[0.2,0]]]})");
  CmdResult gap = run_cli("sample --state " + biased + " --obs-a " + sx +
                          " --obs-b " + sy + " --shots 200000 --seed 5");
  REQUIRE(gap.status == 0);
  Json gd = Json::parse(gap.out);
  CHECK(std::abs(gd["exact_gap"][1].get<double>() - 1.2) <= 1e-12);
  CHECK(std::abs(gd["estimate"][1].get<double>() - 1.2) <=
        5.0 * gd["std_error"].get<double>());

  CHECK(run_cli("sample --state " + ket0() + " --obs-a " + sx +
                " --shots 10 --seed 1")
            .status == 1);
}

TEST_CASE("decomposition connector from files") {
  std::string dec1 = write_doc(
      "dec1.json",
      R"({"dims":[2],"vectors":[[[0.7071067811865476,0],[0,0]],[[0,0],[0.7071067811865476,0]]]})");
  std::string dec2 = write_doc(
      "dec2.json",
      R"({"dims":[2],"vectors":[[[0.5,0],[0.5,0]],[[0.5,0],[-0.5,0]]]})");
  CmdResult r = run_cli("hjw --dec1 " + dec1 + " --dec2 " + dec2);
  REQUIRE(r.status == 0);
  Json doc = Json::parse(r.out);
  CHECK(std::abs(doc["u0"]["matrix"][0][0][0].get<double>() - kHalfRoot) <= 1e-9);
  CHECK(std::abs(doc["u0"]["matrix"][1][1][0].get<double>() + kHalfRoot) <= 1e-9);
  CHECK(doc["map_residual"].get<double>() <= 1e-9);
  REQUIRE(doc.contains("lambda"));
  // Eigenphases of the connector are unimodular.
  double l00_re = doc["lambda"]["matrix"][0][0][0].get<double>();
  double l00_im = doc["lambda"]["matrix"][0][0][1].get<double>();
  CHECK(std::abs(std::hypot(l00_re, l00_im) - 1.0) <= 1e-9);

  std::string other = write_doc(
      "dec_other.json",
      R"({"dims":[2],"vectors":[[[0.9,0],[0,0]],[[0,0],[0.4358898943540673,0]]]})");
  CHECK(run_cli("hjw --dec1 " + dec1 + " --dec2 " + other).status == 1);
}

TEST_CASE("usage errors and help") {
  CHECK(run_cli("--help").status == 0);
  CHECK(run_cli("witness --help").status == 0);
  CHECK(run_cli("").status == 1);
  CHECK(run_cli("witness").status == 1);
  CHECK(run_cli("witness --bogus x").status == 1);
  CHECK(run_cli("scheme single-qubit --p 0.5 --format yaml").status == 1);
  CHECK(run_cli("frobnicate").status == 1);
}
