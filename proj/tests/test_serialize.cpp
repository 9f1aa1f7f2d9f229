#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <bit>
#include <filesystem>
#include <sstream>

#include "lemnis/domain.hpp"
#include "lemnis/error.hpp"
#include "lemnis/pl_approx.hpp"
#include "lemnis/serialize.hpp"
#include "lemnis/verifier.hpp"

using namespace lemnis;

namespace {

ReinhardtDomain corner_domain() {
  return require_valid(ReinhardtDomain::polyhedral(
      2, {{{1, 0}, 1.0, Rational(0)}, {{0, 1}, 1.0, Rational(0)}, {{1, 1}, 0.5, std::nullopt}}));
}

template <class T, class To, class From>
void check_round_trip(const T& value, To to, From from) {
  const Json first = to(value);
  const Json second = to(from(Json::parse(first.dump())));
  CHECK(first.dump() == second.dump());
}

}  // namespace

TEST_CASE("doubles survive text") {
  for (double x : {0.1, -1.0 / 3, 1e-300, 6.02214076e23, std::nextafter(1.0, 2.0), -0.0}) {
    const Json j = Json::parse(double_to_json(x).dump());
    CHECK(std::bit_cast<std::uint64_t>(double_from_json(j)) == std::bit_cast<std::uint64_t>(x));
  }
  CHECK(double_from_json(Json::parse(double_to_json(kNegInf).dump())) == kNegInf);
  CHECK(std::isnan(double_from_json(double_to_json(std::nan("")))));
  CHECK(format_double(kNegInf) == "-inf");
  CHECK_THROWS_AS(double_from_json(Json("oops")), InputError);
}

TEST_CASE("domain round trip") {
  check_round_trip(corner_domain(), domain_to_json, domain_from_json);
  check_round_trip(unit_ball(3), domain_to_json, domain_from_json);
  auto weighted = ReinhardtDomain::weighted_ball(1.5, {0.3, 2.0});
  check_round_trip(weighted, domain_to_json, domain_from_json);
  auto back = domain_from_json(domain_to_json(corner_domain()));
  CHECK_FALSE(back.validated());
  CHECK(back.constraints()[2].bound == 0.5);
  CHECK(*back.constraints()[0].log_bound == 0);
}

TEST_CASE("domain parsing errors") {
  CHECK_THROWS_AS(domain_from_json(Json::parse(R"({"dim": 2})")), InputError);
  CHECK_THROWS_AS(domain_from_json(Json::parse(R"({"dim": 2, "kind": "torus"})")), InputError);
  CHECK_THROWS_AS(domain_from_json(Json::parse(R"({"dim": 2, "kind": "weighted_ball", "p": 2, "weights": [1]})")),
                  InputError);
  CHECK_THROWS_AS(domain_from_json(Json::parse(
                      R"({"dim": 2, "kind": "polyhedral", "constraints": [{"alpha": ["x", "1"], "bound": 1}]})")),
                  InputError);
}

TEST_CASE("rational PL and monomial system round trip") {
  RationalizeOptions opts;
  opts.seed = 3;
  std::vector<SupportPiece> pieces{{{1, 0}, 0.0, RationalVector{1, 0}},
                                   {{0, 1}, 0.0, RationalVector{0, 1}},
                                   {{0.5, 0.5}, 0.0, RationalVector{Rational(1, 2), Rational(1, 2)}}};
  const auto pl = rationalize(pieces, Rational(-1), opts);
  check_round_trip(pl, rational_pl_to_json, rational_pl_from_json);
  const auto back = rational_pl_from_json(rational_pl_to_json(pl));
  for (std::size_t j = 0; j < 3; ++j) CHECK(back.pieces[j].b_tilde == pl.pieces[j].b_tilde);
  CHECK(back.perturbation_norm == pl.perturbation_norm);

  const auto sys = emit_monomials(pl);
  check_round_trip(sys, monomial_system_to_json, monomial_system_from_json);
  auto j = monomial_system_to_json(sys);
  j["q"] = sys.q + 1;
  CHECK_THROWS_AS(monomial_system_from_json(j), InputError);
}

TEST_CASE("map round trip checks the degree") {
  const auto sys = emit_monomials(rationalize(exact_pieces_polyhedral(corner_domain()), Rational(-1)));
  const auto map = build_map(sys, 5);
  check_round_trip(map, map_to_json, map_from_json);
  auto j = map_to_json(map);
  j["q_s"] = 7;
  CHECK_THROWS_AS(map_from_json(j), InputError);
}

TEST_CASE("certificate round trip") {
  const auto pd = unit_polydisk(2);
  const auto sys = emit_monomials(rationalize(exact_pieces_polyhedral(pd), Rational(-1)));
  SandwichCounts counts{500, 500, 500};
  const auto good = build_sandwich(build_map(sys, 8), pd, 0.25, counts);
  const auto bad = build_sandwich(build_map(sys, 1), pd, 0.25, counts);
  REQUIRE(bad.counterexample.has_value());
  check_round_trip(good, certificate_to_json, certificate_from_json);
  check_round_trip(bad, certificate_to_json, certificate_from_json);
  const auto back = certificate_from_json(certificate_to_json(good));
  CHECK(back.delta == good.delta);
  CHECK(back.scale_log == good.scale_log);
  CHECK(back.inner_margin == good.inner_margin);
  CHECK(back.passed);
}

TEST_CASE("files") {
  const auto dir = std::filesystem::temp_directory_path() / "lemnis_serialize_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "domain.json";
  write_json_file(path, domain_to_json(corner_domain()));
  CHECK(read_json_file(path).dump() == domain_to_json(corner_domain()).dump());
  CHECK_THROWS(read_json_file(dir / "missing.json"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("samples csv") {
  const auto pd = unit_polydisk(2);
  const auto sys = emit_monomials(rationalize(exact_pieces_polyhedral(pd), Rational(-1)));
  const auto map = build_map(sys, 3);
  SampleSet s;
  s.points = {CVector{Complex(1, 0), Complex(-1, 0)}, CVector{Complex(0.5, 0), Complex(0.5, 0)}};
  std::ostringstream out;
  write_samples_csv(out, s, pd, map);
  const std::string text = out.str();
  CHECK(text.find("re1,im1,re2,im2,v,G,v_s,log_g1,log_g2") == 0);
  CHECK(text.find("-inf") != std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
}
