#include "lieint/cli.hpp"
#include "lieint/csv.hpp"

#include <doctest.h>

#include <filesystem>
#include <sstream>

using namespace lieint;
namespace fs = std::filesystem;

namespace {

const std::string kSource = LIEINT_SOURCE_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("lieint_cli_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string config(const std::string& name) { return kSource + "/configs/" + name; }

}  // namespace

TEST_CASE("usage errors exit with 1") {
  const Run unknown = run({"frobnicate"});
  CHECK(unknown.code == 1);
  CHECK(unknown.err.find("unknown subcommand") != std::string::npos);
  CHECK(unknown.err.find("Usage") != std::string::npos);
  CHECK(run({}).code == 1);
  CHECK(run({"algebra"}).code == 1);
  CHECK(run({"algebra", "check"}).code == 1);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("algebra check") {
  const Run ok = run({"algebra", "check", "--config", config("so3_half_turn.json")});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("semisimple: yes") != std::string::npos);
  const Run bare = run({"algebra", "check", config("heisenberg_center.json")});
  CHECK(bare.code == 0);
  CHECK(bare.out.find("center dimension: 1") != std::string::npos);
  const Run bad = run({"algebra", "check", config("sp1R_bad_tensor.json")});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("(1,2,3)") != std::string::npos);
}

TEST_CASE("missing files are I/O errors") {
  CHECK(run({"floquet", "analyze", "/nonexistent/run.json"}).code == 3);
}

TEST_CASE("unwritable output directory is an I/O error") {
  const fs::path blocker = scratch("blocker");
  write_text_file(blocker, "not a directory");
  CHECK(run({"floquet", "analyze", config("so3_half_turn.json"), "--out", (blocker / "sub").string()}).code == 3);
  fs::remove_all(blocker);
}

TEST_CASE("numerical failures exit with 2") {
  const fs::path dir = scratch("domain");
  const std::string cfg = (dir / "escape.json").string();
  write_text_file(cfg, R"j({"algebra": "abelian1", "hamiltonians": ["-p"], "coefficients": ["1"],
                          "domain": {"q": [">", 0]}, "numerics": {"x0": [0.5, 0], "alpha": [1], "steps_per_period": 100}})j");
  const Run r = run({"integral", "verify", cfg, "--out", dir.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("left the admissible region") != std::string::npos);
}

TEST_CASE("mp demo writes its tables and is deterministic") {
  const fs::path a = scratch("mp_a"), b = scratch("mp_b");
  const Run first = run({"mp", "demo", "--out", a.string()});
  REQUIRE(first.code == 0);
  CHECK(first.out.find("conservation:") != std::string::npos);
  const Run second = run({"mp", "demo", "--out", b.string()});
  REQUIRE(second.code == 0);
  for (const char* f : {"mp_classification.csv", "mp_xi.csv", "mp_trajectory.csv"}) {
    CAPTURE(f);
    REQUIRE(fs::exists(a / f));
    CHECK(read_text_file(a / f) == read_text_file(b / f));
  }
  const std::string cls = read_text_file(a / "mp_classification.csv");
  CHECK(cls.rfind("re_lambda,im_lambda,abs_lambda,admissibility,tag\n", 0) == 0);
  CHECK(read_text_file(a / "mp_xi.csv").rfind("t,xi_1,xi_2,xi_3\n", 0) == 0);
  CHECK(read_text_file(a / "mp_trajectory.csv").rfind("t,q_1,p_1,I_1\n", 0) == 0);
}

TEST_CASE("every float cell carries 17 significant digits") {
  const fs::path dir = scratch("digits");
  REQUIRE(run({"floquet", "analyze", config("so3_half_turn.json"), "--out", dir.string()}).code == 0);
  std::istringstream in(read_text_file(dir / "classification.csv"));
  std::string line;
  std::getline(in, line);
  int cells = 0;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string cell;
    for (int c = 0; c < 4 && std::getline(row, cell, ','); ++c, ++cells) {
      const auto mantissa = cell.substr(0, cell.find('e'));
      std::size_t digits = 0;
      for (char ch : mantissa) digits += std::isdigit(static_cast<unsigned char>(ch)) ? 1 : 0;
      CHECK(digits == 17);
    }
  }
  CHECK(cells == 12);
}

TEST_CASE("integral find and verify on a generic config") {
  const fs::path dir = scratch("rigid");
  const Run find = run({"integral", "find", config("rigid_body_kinematics.json"), "--out", dir.string(), "--steps", "1000"});
  REQUIRE(find.code == 0);
  CHECK(fs::exists(dir / "xi.csv"));
  CHECK(read_text_file(dir / "generators.csv").rfind("period_multiple,provenance,residual,v_1,v_2,v_3\n", 0) == 0);
  const Run verify = run({"integral", "verify", config("rigid_body_kinematics.json"), "--out", dir.string(), "--steps", "1000"});
  REQUIRE(verify.code == 0);
  CHECK(fs::exists(dir / "trajectory.csv"));
  CHECK(run({"euler", "run", config("so3_half_turn.json"), "--out", dir.string(), "--steps", "200"}).code == 0);
  CHECK(run({"euler", "run", config("so3_half_turn.json"), "--steps", "8"}).code == 1);
}

TEST_CASE("sweep over c gives identical spectra") {
  const fs::path dir = scratch("sweep_c");
  REQUIRE(run({"sweep", config("mp_sweep_c.json"), "--out", dir.string()}).code == 0);
  std::istringstream in(read_text_file(dir / "sweep.csv"));
  std::string header, row1, row2;
  std::getline(in, header);
  std::getline(in, row1);
  std::getline(in, row2);
  CHECK(header.rfind("c,max_modulus_deviation", 0) == 0);
  CHECK(row1.substr(row1.find(',')) == row2.substr(row2.find(',')));
}

TEST_CASE("sweep output does not depend on the job count") {
  const fs::path a = scratch("sweep_j1"), b = scratch("sweep_j4");
  REQUIRE(run({"sweep", config("mp_sweep_omega0.json"), "--out", a.string(), "--jobs", "1", "--steps", "400"}).code == 0);
  REQUIRE(run({"sweep", config("mp_sweep_omega0.json"), "--out", b.string(), "--jobs", "4", "--steps", "400"}).code == 0);
  CHECK(read_text_file(a / "sweep.csv") == read_text_file(b / "sweep.csv"));
}

TEST_CASE("sweep needs at least two points per axis") {
  const fs::path dir = scratch("sweep_bad");
  const std::string cfg = (dir / "bad.json").string();
  write_text_file(cfg, R"j({"preset": "milne_pinney", "sweep": {"axes": [{"parameter": "c", "min": 1, "max": 2, "count": 1}]}})j");
  const Run r = run({"sweep", cfg});
  CHECK(r.code == 1);
  CHECK(r.err.find("count >= 2") != std::string::npos);
}
