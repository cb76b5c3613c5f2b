#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "orlicz/convergence.hpp"
#include "orlicz/duality.hpp"
#include "orlicz/error.hpp"
#include "orlicz/norms.hpp"

using namespace orlicz;

namespace {

const OrliczFunction kSquare = OrliczFunction::power(2.0);

SpacePtr harmonic(std::size_t n) {
  return share(MeasureSpace::truncated_countable(n, [](long long k) { return 1.0 / double(k * (k + 1)); }, "tail"));
}

Rv random_rv(oracle::Gen& gen, const SpacePtr& s, double a = -2, double b = 2) { return Rv(s, gen.vec(s->size(), a, b)); }

}  // namespace

TEST_CASE("sequence modes parse and print") {
  for (auto m : {SequenceMode::NormConvergent, SequenceMode::TravelingSpike, SequenceMode::OrderConvergent,
                 SequenceMode::EscapingSpike})
    CHECK(parse_sequence_mode(to_string(m)) == m);
  CHECK(parse_sequence_mode("ae_only_traveling_spike") == SequenceMode::TravelingSpike);
  CHECK_THROWS_AS((void)parse_sequence_mode("wiggle"), ParseError);
}

TEST_CASE("norm-convergent families shrink geometrically") {
  oracle::Gen gen(61);
  const auto s = share(MeasureSpace::uniform_probability(8));
  const auto f = random_rv(gen, s);
  const auto fam = generate_sequence(s, kSquare, f, SequenceMode::NormConvergent, 40, 3);
  REQUIRE(fam.terms.size() == 40);
  CHECK(fam.limit);
  CHECK(fam.declared_bounded);
  for (std::size_t n = 1; n <= 40; ++n) {
    const double d = luxemburg_norm(fam.terms[n - 1] - f, kSquare).value;
    CHECK(d <= std::ldexp(1.0, -int(n)) + 1e-15);
  }
  for (const auto& t : fam.terms) CHECK(luxemburg_norm(t, kSquare).value <= fam.norm_bound + 1e-12);
}

TEST_CASE("traveling spike keeps unit distance until it leaves") {
  const std::size_t N = 30;
  const auto s = share(MeasureSpace::counting(N));
  const auto f = Rv::zero(s);
  const auto fam = generate_sequence(s, kSquare, f, SequenceMode::TravelingSpike, 2 * N, 1);
  for (std::size_t n = 1; n <= N; ++n) CHECK(luxemburg_norm(fam.terms[n - 1] - f, kSquare).value == doctest::Approx(1.0));
  for (std::size_t n = N + 1; n <= 2 * N; ++n) CHECK(fam.terms[n - 1] == f);
  CHECK(ae_converges(fam.terms, f, 1e-9).converges);
  CHECK(fam.norm_bound == doctest::Approx(1.0));
}

TEST_CASE("order-convergent families are dominated by a fixed majorant") {
  oracle::Gen gen(62);
  const auto s = share(MeasureSpace::uniform_probability(6));
  const auto f = random_rv(gen, s);
  const auto fam = generate_sequence(s, kSquare, f, SequenceMode::OrderConvergent, 30, 9);
  std::vector<double> F(6);
  for (std::size_t i = 0; i < 6; ++i) F[i] = (fam.terms[0][i] - f[i]) * 2.0;
  for (double x : F) {
    CHECK(x >= 0.5 - 1e-12);
    CHECK(x <= 1.5 + 1e-12);
  }
  for (std::size_t n = 1; n <= 30; ++n)
    for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(fam.terms[n - 1][i] - f[i]) <= std::ldexp(F[i], -int(n)) * (1 + 1e-12) + 1e-15 * (1 + std::abs(f[i])));
}

TEST_CASE("escaping spike is declared unbounded") {
  const auto s = share(MeasureSpace::counting(4));
  const auto fam = generate_sequence(s, kSquare, Rv::zero(s), SequenceMode::EscapingSpike, 12, 1);
  CHECK_FALSE(fam.declared_bounded);
  CHECK_FALSE(fam.limit);
  CHECK(fam.terms[11][3] == 12.0);
}

TEST_CASE("generators are deterministic in the seed") {
  const auto s = share(MeasureSpace::uniform_probability(5));
  const auto f = Rv::constant(s, 0.25);
  const auto a = generate_sequence(s, kSquare, f, SequenceMode::NormConvergent, 10, 42);
  const auto b = generate_sequence(s, kSquare, f, SequenceMode::NormConvergent, 10, 42);
  const auto c = generate_sequence(s, kSquare, f, SequenceMode::NormConvergent, 10, 43);
  CHECK(a.terms == b.terms);
  CHECK_FALSE(a.terms == c.terms);
  CHECK_THROWS_AS((void)generate_sequence(s, kSquare, f, SequenceMode::NormConvergent, 0, 1), PreconditionError);
  CHECK_THROWS_AS((void)generate_sequence(s, kSquare, f, SequenceMode::Custom, 5, 1), PreconditionError);
}

TEST_CASE("extraction on a norm-convergent family") {
  oracle::Gen gen(63);
  const auto s = harmonic(64);
  const auto f = random_rv(gen, s);
  const auto g0 = strictly_positive_witness(s, conjugate(kSquare));
  const auto f0 = strictly_positive_witness(s, kSquare);
  const auto fam = generate_sequence(s, kSquare, f, SequenceMode::NormConvergent, 64, 5);
  const auto rep = extract_ae_subsequence(fam, f, g0, f0);
  CHECK(rep.success);
  CHECK(rep.trace_bound_ok);
  CHECK(rep.pointwise_ok);
  REQUIRE(!rep.indices.empty());
  for (std::size_t k = 1; k < rep.indices.size(); ++k) CHECK(rep.indices[k] > rep.indices[k - 1]);
  for (std::size_t n = 0; n < rep.indices.size(); ++n) {
    CHECK(rep.pairings[rep.indices[n]] <= std::ldexp(1.0, -int(n + 1)));
    if (n < rep.trace.size()) CHECK(rep.trace[n] <= std::ldexp(1.0, -int(n)) + 1e-12);
  }
}

TEST_CASE("extraction on a constant family picks every index") {
  const auto s = share(MeasureSpace::uniform_probability(4));
  const auto f = Rv::constant(s, 1.0);
  const auto fam = make_family(std::vector<Rv>(12, f), kSquare, f);
  const auto one = Rv::constant(s, 1.0);
  const auto rep = extract_ae_subsequence(fam, f, one, one);
  CHECK(rep.success);
  REQUIRE(rep.indices.size() == 12);
  for (std::size_t n = 0; n < 12; ++n) CHECK(rep.indices[n] == n);
  for (double p : rep.pairings) CHECK(p == 0.0);
}

TEST_CASE("extraction on a traveling spike thins the sequence") {
  const std::size_t N = 64;
  const auto s = share(MeasureSpace::uniform_probability(N));
  const auto f = Rv::zero(s);
  const auto g0 = Rv::constant(s, 1.0);
  const auto fam = generate_sequence(s, kSquare, f, SequenceMode::TravelingSpike, N + 32, 1);
  const auto rep = extract_ae_subsequence(fam, f, g0, Rv::constant(s, 1.0));
  CHECK(rep.success);
  CHECK(rep.pointwise_ok);
  // Each spike has pairing 1/N; only levels with 2⁻ⁿ ≥ 1/N may use spike terms.
  for (std::size_t k = 0; k < N; ++k) CHECK(rep.pairings[k] == doctest::Approx(1.0 / N));
  for (std::size_t n = 0; n < rep.indices.size(); ++n)
    if (std::ldexp(1.0, -int(n + 1)) < 1.0 / N) CHECK(rep.indices[n] >= N);
}

TEST_CASE("extraction stalls when pairings do not decay") {
  const auto s = share(MeasureSpace::uniform_probability(3));
  const auto f = Rv::zero(s);
  const auto fam = make_family(std::vector<Rv>(20, Rv::constant(s, 0.1)), kSquare, f);
  const auto one = Rv::constant(s, 1.0);
  const auto rep = extract_ae_subsequence(fam, f, one, one);
  CHECK_FALSE(rep.success);
  CHECK(rep.stalled_level == 4);
  CHECK(!rep.reason.empty());
  CHECK_THROWS_AS((void)extract_ae_subsequence(fam, f, Rv::zero(s), one), PreconditionError);
}

TEST_CASE("property: the witness pairing is strictly positive") {
  oracle::Gen gen(64);
  const auto s = harmonic(200);
  const auto g0 = strictly_positive_witness(s, conjugate(OrliczFunction::exp_young()));
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> h(200, 0.0);
    if (trial % 5 != 0) h[gen.index(200)] = gen.uniform(-1, 1) * std::pow(10.0, -gen.integer(0, 8));
    const Rv hv(s, h);
    const double p = dual_pairing(abs(hv), g0);
    CHECK((p == 0.0) == hv.is_zero());
  }
}

TEST_CASE("weak-star checks") {
  oracle::Gen gen(65);
  const auto s = share(MeasureSpace::uniform_probability(32));
  const auto psi = conjugate(kSquare);
  const auto f = random_rv(gen, s);
  std::vector<Rv> tests;
  for (int k = 0; k < 10; ++k) tests.push_back(random_rv(gen, s, -3, 3));
  const auto nc = generate_sequence(s, kSquare, f, SequenceMode::NormConvergent, 64, 2);
  const auto r1 = wstar_limit_check(nc, f, tests, psi);
  CHECK(r1.converges);
  CHECK(r1.tail_max.size() == 10);
  CHECK(r1.worst_tail <= 1e-8);

  const auto spike = generate_sequence(s, kSquare, f, SequenceMode::TravelingSpike, 64, 2);
  const std::vector<Rv> uniform{Rv::constant(s, 1.0)};
  CHECK(wstar_limit_check(spike, f, uniform, psi).converges);
  CHECK(wstar_limit_check(spike, f, tests, psi).converges);

  // The decomposition |fₙ − f| = (|fₙ − f| − f₀)⁺ + |fₙ − f| ∧ f₀ bounds each pairing.
  WstarOptions wo;
  wo.f0 = Rv::constant(s, 0.5);
  const auto early = make_family(std::vector<Rv>(spike.terms.begin(), spike.terms.begin() + 8), kSquare, f);
  const auto r2 = wstar_limit_check(early, f, uniform, psi, wo);
  REQUIRE(r2.truncation_tail.size() == 1);
  CHECK(std::abs(dual_pairing(early.terms.back() - f, uniform[0])) <= r2.truncation_tail[0] + r2.dominated[0] + 1e-15);
  CHECK(r2.dominated[0] > 0.0);
  CHECK(r2.truncation_tail[0] > 0.0);

  const auto esc = generate_sequence(s, kSquare, f, SequenceMode::EscapingSpike, 64, 2);
  CHECK_THROWS_AS((void)wstar_limit_check(esc, f, tests, psi), PreconditionError);
  const std::vector<Rv> outside{Rv::constant(s, 1.0)};
  CHECK_THROWS_AS((void)wstar_limit_check(nc, f, outside, OrliczFunction::linf_step()), PreconditionError);
}

TEST_CASE("property: weak-star convergence for every bounded generated family") {
  oracle::Gen gen(66);
  for (int trial = 0; trial < 12; ++trial) {
    const auto s = share(MeasureSpace::finite(gen.probability(16)));
    const auto phi = trial % 2 ? OrliczFunction::exp_young() : kSquare;
    const auto psi = conjugate(phi);
    const auto f = random_rv(gen, s);
    std::vector<Rv> tests;
    for (int k = 0; k < 10; ++k) tests.push_back(random_rv(gen, s, -2, 2));
    for (auto m : {SequenceMode::NormConvergent, SequenceMode::TravelingSpike, SequenceMode::OrderConvergent}) {
      const auto fam = generate_sequence(s, phi, f, m, 64, trial);
      CAPTURE(to_string(m));
      CHECK(wstar_limit_check(fam, f, tests, psi).converges);
    }
  }
}

TEST_CASE("Fatou check for entropic risk") {
  oracle::Gen gen(67);
  const auto s = share(MeasureSpace::uniform_probability(8));
  const auto phi = entropic(1.0, s);
  std::vector<SequenceFamily> fams;
  for (int k = 0; k < 100; ++k) {
    const auto m = std::array{SequenceMode::NormConvergent, SequenceMode::TravelingSpike,
                              SequenceMode::OrderConvergent}[k % 3];
    fams.push_back(generate_sequence(s, kSquare, random_rv(gen, s), m, 64, k));
  }
  const auto rep = fatou_check(*phi, fams, 1e-9);
  CHECK(rep.ok);
  CHECK(rep.violations == 0);
  CHECK(rep.margins.size() == 100);
}

TEST_CASE("Fatou check for expectation along a traveling spike") {
  oracle::Gen gen(68);
  const std::size_t N = 16;
  const auto s = share(MeasureSpace::uniform_probability(N));
  const auto f = random_rv(gen, s);
  const auto fam = generate_sequence(s, kSquare, f, SequenceMode::TravelingSpike, 2 * N, 1, 3.0);
  const auto ex = expectation(s);
  for (std::size_t n = 0; n < N; ++n)
    CHECK(ex->evaluate(fam.terms[n].values()) == doctest::Approx(ex->evaluate(f.values()) + 3.0 / N));
  const std::vector<SequenceFamily> fams{fam};
  const auto rep = fatou_check(*ex, fams, 1e-9);
  CHECK(rep.ok);
  CHECK(std::abs(rep.worst_margin) <= 1e-15);
}

TEST_CASE("Fatou check catches a non-lsc control") {
  const auto s = share(MeasureSpace::uniform_probability(4));
  const std::vector<double> hat{0.2, -0.1, 0.4, 0.0};
  const auto jumpy = point_jump(entropic(1.0, s), hat, 1.0);
  const Rv limit(s, hat);
  const auto fam = generate_sequence(s, kSquare, limit, SequenceMode::OrderConvergent, 40, 4);
  const std::vector<SequenceFamily> fams{fam};
  const auto rep = fatou_check(*jumpy, fams, 1e-9);
  CHECK_FALSE(rep.ok);
  CHECK(rep.violations == 1);
  CHECK(rep.worst_family == 0);
  CHECK(rep.worst_margin < -0.9);

  const std::vector<SequenceFamily> esc{generate_sequence(s, kSquare, limit, SequenceMode::EscapingSpike, 40, 4)};
  CHECK_THROWS_AS((void)fatou_check(*jumpy, esc, 1e-9), PreconditionError);
  const std::vector<SequenceFamily> nolimit{make_family(fam.terms, kSquare)};
  CHECK_THROWS_AS((void)fatou_check(*jumpy, nolimit, 1e-9), PreconditionError);
}

TEST_CASE("property: every catalog functional satisfies Fatou on every mode") {
  oracle::Gen gen(69);
  for (int trial = 0; trial < 5; ++trial) {
    const auto s = share(MeasureSpace::finite(gen.probability(10)));
    std::vector<SequenceFamily> fams;
    for (auto m : {SequenceMode::NormConvergent, SequenceMode::TravelingSpike, SequenceMode::OrderConvergent})
      for (int k = 0; k < 5; ++k) fams.push_back(generate_sequence(s, kSquare, random_rv(gen, s), m, 64, 10 * trial + k));
    for (const auto& phi : {entropic(2.0, s), average_value_at_risk(0.25, s), worst_case(s), expectation(s)}) {
      CAPTURE(phi->name());
      CHECK(fatou_check(*phi, fams, 1e-9).violations == 0);
    }
  }
}

TEST_CASE("property: level sets are closed along bounded a.e. limits") {
  oracle::Gen gen(70);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = share(MeasureSpace::finite(gen.probability(6)));
    const auto f = random_rv(gen, s);
    for (const auto& phi : {entropic(1.0, s), average_value_at_risk(0.5, s), worst_case(s), expectation(s)}) {
      const double level = phi->evaluate(f.values());
      std::vector<Rv> approach;
      for (int n = 1; n <= 40; ++n) approach.push_back(f - Rv::constant(s, std::ldexp(1.0, -n)));
      CAPTURE(phi->name());
      CHECK(level_set_probe(*phi, level, f, approach, kSquare).verdict == Verdict::Holds);
    }
  }
}

TEST_CASE("closure demo on a vertex and a midpoint") {
  const auto s = share(MeasureSpace::uniform_probability(3));
  const std::vector<Rv> verts{Rv(s, {1, 0, 0}), Rv(s, {0, 1, 0}), Rv(s, {0, 0, 1})};
  const auto v = closure_demo(verts, verts[1], kSquare);
  CHECK(v.certified);
  for (const auto& t : v.family.terms) CHECK(t == verts[1]);
  CHECK(v.barycentric == std::vector<double>{0, 1, 0});

  const Rv mid(s, {0.5, 0.5, 0});
  const auto m = closure_demo(verts, mid, kSquare);
  CHECK(m.certified);
  CHECK(m.distance <= 1e-9);
  CHECK(m.distance_bound_ok);
  for (std::size_t k = 1; k < m.distances.size(); ++k) CHECK(m.distances[k] <= m.distances[k - 1] + 1e-15);
  CHECK(m.distances.back() <= 1e-12);

  CHECK_THROWS_AS((void)closure_demo(verts, Rv(s, {1, 1, 1}), kSquare), PreconditionError);
  CHECK_THROWS_AS((void)closure_demo(std::vector<Rv>{}, mid, kSquare), PreconditionError);
}

TEST_CASE("closure demo at the barycenter of a random polytope") {
  oracle::Gen gen(71);
  const auto s = share(MeasureSpace::finite(gen.probability(10)));
  std::vector<Rv> verts;
  for (int k = 0; k < 5; ++k) verts.push_back(random_rv(gen, s, -1, 1));
  std::vector<double> centre(10, 0.0);
  for (const auto& v : verts)
    for (std::size_t i = 0; i < 10; ++i) centre[i] += v[i] / 5.0;
  const Rv f(s, centre);
  const auto demo = closure_demo(verts, f, kSquare);
  CHECK(demo.certified);
  CHECK(demo.extraction.success);
  REQUIRE(demo.family.terms.size() >= 50);
  for (std::size_t i = 0; i < 10; ++i) CHECK(std::abs(demo.family.terms[49][i] - f[i]) < 1e-6);

  // A generic point inside the hull, away from the barycenter.
  std::vector<double> lam{0.1, 0.4, 0.2, 0.25, 0.05}, inside(10, 0.0);
  for (int k = 0; k < 5; ++k)
    for (std::size_t i = 0; i < 10; ++i) inside[i] += lam[k] * verts[k][i];
  const auto demo2 = closure_demo(verts, Rv(s, inside), kSquare);
  CHECK(demo2.certified);
  CHECK(demo2.distance <= 1e-9);
}

TEST_CASE("family csv round trip") {
  oracle::Gen gen(72);
  const auto s = share(MeasureSpace::uniform_probability(4));
  const auto fam = generate_sequence(s, kSquare, random_rv(gen, s), SequenceMode::NormConvergent, 5, 1);
  const auto path = (std::filesystem::temp_directory_path() / "orl_family.csv").string();
  save_family_csv(fam.terms, path);
  const auto back = load_family_csv(s, path);
  REQUIRE(back.size() == 5);
  for (std::size_t k = 0; k < 5; ++k) CHECK(back[k] == fam.terms[k]);
  const auto bad = (std::filesystem::temp_directory_path() / "orl_family_bad.csv").string();
  std::ofstream(bad) << "term_index,atom_id,value\n0,1,1\n0,2,1\n";
  CHECK_THROWS_AS((void)load_family_csv(s, bad), ParseError);
}
