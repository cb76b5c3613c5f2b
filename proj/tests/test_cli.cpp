#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run cli(const std::string& args) {
  const std::string cmd = std::string(ORLICZ_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

struct Fixture {
  fs::path dir = fs::temp_directory_path() / "orlicz_cli_test";
  std::string space, rv, far_rv, vertices, broken;
  Fixture() {
    fs::create_directories(dir);
    space = (dir / "space.csv").string();
    rv = (dir / "rv.csv").string();
    far_rv = (dir / "far.csv").string();
    vertices = (dir / "vertices.csv").string();
    broken = (dir / "broken.csv").string();
    std::ofstream(space) << "atom_id,weight,block_id\n1,0.25,0\n2,0.25,0\n3,0.5,1\n";
    std::ofstream(rv) << "atom_id,value\n1,0.3\n2,-1\n3,0.8\n";
    std::ofstream(far_rv) << "atom_id,value\n1,9\n2,9\n3,9\n";
    std::ofstream(vertices) << "term_index,atom_id,value\n0,1,1\n0,2,-1\n0,3,1\n1,1,-0.4\n1,2,-1\n1,3,0.6\n";
    std::ofstream(broken) << "atom_id,value\n1,abc\n";
  }
  std::string base() const { return "--space " + space + " --rv " + rv + " --orlicz power:p=2"; }
};

}  // namespace

TEST_CASE_FIXTURE(Fixture, "norm emits json and csv") {
  const auto j = cli("norm " + base());
  REQUIRE(j.code == 0);
  const auto rec = json::parse(j.out);
  CHECK(rec["command"] == "norm");
  CHECK(rec["luxemburg"].get<double>() == doctest::Approx(0.7697402159683406).epsilon(1e-9));
  CHECK(rec["sandwich_ok"] == true);
  const auto c = cli("norm " + base() + " --format csv");
  REQUIRE(c.code == 0);
  CHECK(c.out.rfind("key,value\n", 0) == 0);
}

TEST_CASE_FIXTURE(Fixture, "input errors exit with 2") {
  CHECK(cli("norm --space " + space + " --rv " + rv + " --orlicz cosh").code == 2);
  CHECK(cli("norm --space " + (dir / "missing.csv").string() + " --rv " + rv + " --orlicz power:p=2").code == 2);
  CHECK(cli("norm --space " + space + " --rv " + broken + " --orlicz power:p=2").code == 2);
  CHECK(cli("norm " + base() + " --tol -1").code == 2);
  CHECK(cli("norm " + base() + " --format xml").code == 2);
  CHECK(cli("transmogrify").code == 2);
  CHECK(cli("").code == 2);
}

TEST_CASE_FIXTURE(Fixture, "represent exit codes") {
  CHECK(cli("represent " + base() + " --risk entropic:beta=1").code == 0);
  const auto numeric = cli("represent " + base() + " --risk avar:alpha=0.5 --numeric");
  REQUIRE(numeric.code == 0);
  CHECK(json::parse(numeric.out)["gap"].get<double>() <= 1e-6);
  CHECK(cli("represent " + base() + " --risk entropic:beta=1 --numeric --gap-tol 0").code == 3);
  CHECK(cli("represent --space " + space + " --rv " + rv + " --orlicz linear --risk entropic:beta=1").code == 4);
  CHECK(cli("represent " + base() + " --risk control:square").code == 4);
}

TEST_CASE_FIXTURE(Fixture, "conjugate and classify") {
  const auto c = cli("conjugate --orlicz power:p=2 --s-max 3 --points 4");
  REQUIRE(c.code == 0);
  const auto psi = json::parse(c.out)["psi"];
  REQUIRE(psi.size() == 4);
  CHECK(psi[3].get<double>() == doctest::Approx(2.25));
  const auto r = cli("classify --orlicz exp_young --measure finite");
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["reflexive"] == "fails");
  CHECK(cli("classify --orlicz power:p=2 --measure sideways").code == 2);
}

TEST_CASE_FIXTURE(Fixture, "fatou, extraction and closure") {
  const auto f = cli("fatou-test " + base() + " --risk entropic:beta=1 --mode traveling_spike --count 4");
  REQUIRE(f.code == 0);
  CHECK(json::parse(f.out)["violations"] == 0);
  CHECK(cli("fatou-test " + base() + " --risk entropic:beta=1 --mode escaping_spike --count 2").code == 4);
  CHECK(cli("fatou-test " + base() + " --risk entropic:beta=1").code == 2);

  const auto e = cli("extract-subseq --orlicz power:p=2 --mode norm_convergent --truncation 64");
  REQUIRE(e.code == 0);
  CHECK(json::parse(e.out)["verdict"] == "holds");

  const auto out = (dir / "hull.csv").string();
  fs::remove(out);
  const auto c = cli("closure-demo " + base() + " --vertices " + vertices + " --length 20 --out " + out);
  REQUIRE(c.code == 0);
  CHECK(json::parse(c.out)["certified"] == true);
  CHECK(fs::exists(out));
  CHECK(cli("closure-demo --space " + space + " --rv " + far_rv + " --orlicz power:p=2 --vertices " + vertices).code == 4);
}

TEST_CASE("verify-all is byte-identical across runs and stable across seeds") {
  const auto a = cli("verify-all");
  const auto b = cli("verify-all");
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto ja = json::parse(a.out);
  CHECK(ja["all_pass"] == true);
  CHECK(ja["criteria"] == 10);

  const auto c = cli("verify-all --seed 7");
  REQUIRE(c.code == 0);
  const auto jc = json::parse(c.out);
  for (const auto& [key, value] : ja.items())
    if (key.size() > 5 && key.compare(key.size() - 5, 5, ".pass") == 0) CHECK(jc[key] == value);

  const auto z = cli("verify-all --tol 0");
  CHECK(z.code == 5);
  const auto jz = json::parse(z.out);
  CHECK(jz["all_pass"] == false);
  int failed = 0;
  for (const auto& [key, value] : jz.items()) {
    if (key.size() <= 5 || key.compare(key.size() - 5, 5, ".pass") != 0 || value == true) continue;
    ++failed;
    CAPTURE(key);
    CHECK(jz[key.substr(0, key.size() - 5) + ".tolerance_induced"] == true);
  }
  CHECK(failed > 0);
}
