#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <json.hpp>

#include "oracles.hpp"
#include "orlicz/commands.hpp"
#include "orlicz/error.hpp"
#include "orlicz/verify.hpp"

using namespace orlicz;
using nlohmann::json;

TEST_CASE("records render sorted json") {
  Record r;
  r.set("zeta", 1);
  r.set("alpha", true);
  r.set("mid", 2.5);
  r.set("name", "x,y");
  r.set("vec", std::vector<double>{1.0, oracle::inf});
  r.set("ids", std::vector<std::size_t>{3, 4});
  const auto j = json::parse(r.to_json());
  CHECK(j["zeta"] == 1);
  CHECK(j["alpha"] == true);
  CHECK(j["mid"] == 2.5);
  CHECK(j["vec"][1] == "inf");
  CHECK(j["ids"] == json::array({3, 4}));
  const auto text = r.to_json();
  CHECK(text.find("\"alpha\"") < text.find("\"zeta\""));
  CHECK(r.render(Format::Json) == text);
}

TEST_CASE("records render two-column csv") {
  Record r;
  r.set("b", false);
  r.set("a", "plain");
  r.set("c", "needs,quote");
  r.set("v", std::vector<long long>{1, 2, 3});
  r.set("x", -oracle::inf);
  const auto csv = r.to_csv();
  CHECK(csv.rfind("key,value\n", 0) == 0);
  CHECK(csv.find("a,plain\n") != std::string::npos);
  CHECK(csv.find("b,false\n") != std::string::npos);
  CHECK(csv.find("c,\"needs,quote\"\n") != std::string::npos);
  CHECK(csv.find("v,1;2;3\n") != std::string::npos);
  CHECK(csv.find("x,-inf\n") != std::string::npos);
  CHECK(csv.find("a,") < csv.find("b,"));
}

TEST_CASE("record merge and format parsing") {
  Record inner, outer;
  inner.set("k", 1);
  outer.merge("p.", inner);
  CHECK(outer.contains("p.k"));
  CHECK(parse_format("csv") == Format::Csv);
  CHECK(parse_format("json") == Format::Json);
  CHECK_THROWS_AS((void)parse_format("xml"), ParseError);
}

TEST_CASE("run config validation") {
  RunConfig cfg;
  CHECK_NOTHROW(cfg.check());
  CHECK(cfg.gap() == 1e-6);
  cfg.tol = 1e-3;
  CHECK(cfg.gap() == 1e-3);
  cfg.gap_tol = 1e-4;
  CHECK(cfg.gap() == 1e-4);
  CHECK(cfg.fatou() == 1e-3);
  cfg.tol = -1.0;
  CHECK_THROWS_AS(cfg.check(), DomainError);
  RunConfig caps;
  caps.max_iterations = 0;
  CHECK_THROWS_AS(caps.check(), DomainError);
}

TEST_CASE("norm command") {
  const auto s = share(MeasureSpace::uniform_probability(2));
  const Rv f(s, {3.0, 4.0});
  const auto out = cmd_norm(f, OrliczFunction::power(2.0), RunConfig{});
  CHECK(out.exit_code == 0);
  const auto& rec = out.record;
  CHECK(std::get<std::string>(rec.at("command")) == "norm");
  CHECK(std::get<double>(rec.at("luxemburg")) == doctest::Approx(oracle::weighted_p_norm({0.5, 0.5}, {3, 4}, 2)).epsilon(1e-9));
  CHECK(std::get<bool>(rec.at("sandwich_ok")));
}

TEST_CASE("represent command exit codes") {
  const auto s = share(MeasureSpace::uniform_probability(3));
  const Rv f(s, {0.1, -0.4, 0.9});
  const auto phi = OrliczFunction::power(2.0);
  const auto closed = cmd_represent(f, *entropic(1.0, s), phi, false, RunConfig{});
  CHECK(closed.exit_code == 0);
  CHECK(std::get<std::string>(closed.record.at("method")) == "closed_form");
  const auto numeric = cmd_represent(f, *entropic(1.0, s), phi, true, RunConfig{});
  CHECK(numeric.exit_code == 0);
  CHECK(std::get<double>(numeric.record.at("gap")) <= 1e-6);
  CHECK_THROWS_AS((void)cmd_represent(f, *entropic(1.0, s), OrliczFunction::linear(), false, RunConfig{}), HypothesisError);
  CHECK_THROWS_AS((void)cmd_represent(f, *non_monotone_control(s), phi, false, RunConfig{}), PreconditionError);
}

TEST_CASE("conjugate and classify commands") {
  const auto c = cmd_conjugate(OrliczFunction::power(2.0), 3.0, 7, RunConfig{});
  CHECK(c.exit_code == 0);
  const auto& psi = std::get<std::vector<double>>(c.record.at("psi"));
  REQUIRE(psi.size() == 7);
  CHECK(psi.back() == doctest::Approx(2.25));
  CHECK(std::get<double>(c.record.at("max_abs_difference")) < 1e-6);
  CHECK_THROWS_AS((void)cmd_conjugate(OrliczFunction::power(2.0), -1.0, 7, RunConfig{}), DomainError);
  CHECK_THROWS_AS((void)cmd_conjugate(OrliczFunction::power(2.0), 1.0, 1, RunConfig{}), DomainError);

  const auto sq = cmd_classify(OrliczFunction::power(2.0), true, RunConfig{});
  CHECK(std::get<std::string>(sq.record.at("reflexive")) == "holds");
  const auto step = cmd_classify(OrliczFunction::linf_step(), false, RunConfig{});
  CHECK(std::get<std::string>(step.record.at("reflexive")) == "fails");
}

TEST_CASE("fatou, extraction and closure commands") {
  const auto s = share(MeasureSpace::uniform_probability(4));
  const auto phi = OrliczFunction::power(2.0);
  const auto limit = Rv::constant(s, 0.5);
  std::vector<SequenceFamily> fams{generate_sequence(s, phi, limit, SequenceMode::NormConvergent, 64, 1)};
  CHECK(cmd_fatou(*entropic(1.0, s), fams, limit, RunConfig{}).exit_code == 0);
  const auto jumpy = point_jump(entropic(1.0, s), {0.5, 0.5, 0.5, 0.5}, 1.0);
  const auto bad = cmd_fatou(*jumpy, fams, limit, RunConfig{});
  CHECK(bad.exit_code == 5);
  CHECK(std::get<long long>(bad.record.at("violations")) == 1);
  CHECK_THROWS_AS((void)cmd_fatou(*jumpy, {}, limit, RunConfig{}), PreconditionError);

  const auto ex = cmd_extract(fams[0], limit, phi, RunConfig{});
  CHECK(ex.exit_code == 0);
  CHECK(std::get<std::string>(ex.record.at("verdict")) == "holds");
  const auto flat = make_family(std::vector<Rv>(20, Rv::constant(s, 1.0)), phi, limit);
  const auto stalled = cmd_extract(flat, limit, phi, RunConfig{});
  CHECK(stalled.exit_code == 0);
  CHECK(std::get<std::string>(stalled.record.at("verdict")) == "inconclusive");

  const std::vector<Rv> verts{Rv(s, {1, 0, 0, 0}), Rv(s, {0, 1, 0, 0})};
  std::vector<Rv> seq;
  const auto cl = cmd_closure(verts, Rv(s, {0.25, 0.75, 0, 0}), phi, 32, RunConfig{}, &seq);
  CHECK(cl.exit_code == 0);
  CHECK(seq.size() == 32);
  CHECK(std::get<bool>(cl.record.at("certified")));
  CHECK_THROWS_AS((void)cmd_closure(verts, Rv(s, {1, 1, 0, 0}), phi, 32, RunConfig{}), PreconditionError);
}

TEST_CASE("verification suite passes and zero tolerances are flagged") {
  const auto a = verify_all(VerifyConfig{});
  CHECK(a.all_pass);
  REQUIRE(a.criteria.size() == 10);
  for (const auto& c : a.criteria) {
    CAPTURE(c.key);
    CHECK(c.pass);
    CHECK_FALSE(c.tolerance_induced);
    CHECK(c.cases > 0);
  }
  const auto rec = a.to_record();
  CHECK(std::get<long long>(rec.at("criteria")) == 10);

  VerifyConfig zero;
  zero.gap_tol = 0.0;
  zero.norm_tol = 0.0;
  zero.fatou_tol = 0.0;
  const auto b = verify_all(zero);
  CHECK_FALSE(b.all_pass);
  for (const auto& c : b.criteria)
    if (!c.pass) {
      CAPTURE(c.key);
      CHECK(c.tolerance_induced);
    }
  CHECK_THROWS_AS((void)verify_all(VerifyConfig{.norm_tol = -1.0}), DomainError);
}
