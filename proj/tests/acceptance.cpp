// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "lemnis/combiner.hpp"
#include "lemnis/domain.hpp"
#include "lemnis/green.hpp"
#include "lemnis/pipeline.hpp"
#include "lemnis/pl_approx.hpp"
#include "lemnis/serialize.hpp"
#include "lemnis/verifier.hpp"

using namespace lemnis;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void run(int id, const char* title, double limit_seconds, const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.require(false, std::string("exception: ") + e.what());
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_seconds > 0) out.require(elapsed < limit_seconds, "runtime limit");
  if (!out.pass) ++failures;
  std::printf("%s criterion %d: %s |%s | %.2fs\n", out.pass ? "PASS" : "FAIL", id, title, out.detail.str().c_str(),
              elapsed);
  std::fflush(stdout);
}

ReinhardtDomain corner_domain() {
  return require_valid(ReinhardtDomain::polyhedral(
      2, {{{1, 0}, 1.0, Rational(0)}, {{0, 1}, 1.0, Rational(0)}, {{1, 1}, 0.5, std::nullopt}}));
}

MonomialSystem exact_system(const ReinhardtDomain& d) {
  return emit_monomials(rationalize(exact_pieces_polyhedral(d), Rational(-1)));
}

MonomialSystem ball_system(std::size_t grid, double eps) {
  SelectionBudget budget;
  budget.initial_grid = grid;
  const auto sel = select_support_pieces(unit_ball(2), eps, -1.0, budget);
  return emit_monomials(rationalize(sel.pieces, Rational(-1)));
}

// Random points of C^n with moduli spread over several orders of magnitude.
CVector random_point(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> scale(-3.0, 3.0);
  CVector z = random_unit_sphere(rng, n);
  const double c = std::exp(scale(rng));
  for (auto& x : z) x *= c;
  return z;
}

bool close_log(double a, double b, double rel) {
  if (a == kNegInf || b == kNegInf) return a == b;
  return std::abs(a - b) <= rel * std::max(1.0, std::abs(a));
}

template <class T, class To, class From>
bool round_trip(const T& value, To to, From from) {
  const std::string first = to(value).dump();
  return to(from(Json::parse(first))).dump() == first;
}

}  // namespace

int main() {
  const CVector diag = diagonal_direction(2);

  run(1, "polydisk exactness chain", 5.0, [&](Outcome& o) {
    const auto pd = unit_polydisk(2);
    const auto sys = exact_system(pd);
    o.require(sys.m() == 2 && sys.q == 1 && sys.N == 1, "monomials are z1, z2");
    o.require(sys.monomials[0].k_vec == std::vector<std::int64_t>{1, 0} &&
                  sys.monomials[1].k_vec == std::vector<std::int64_t>{0, 1},
              "exponents");
    o.require(sys.monomials[0].log_coef == 0 && sys.monomials[1].log_coef == 0, "coefficients");
    std::mt19937_64 rng(1);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const CVector z = random_point(rng, 2);
      worst = std::max(worst, std::abs(eval_v(sys, std::span<const Complex>(z)).value - green(pd, z)));
    }
    o.require(worst <= 1e-12, "v == G");
    o.detail << " max|v-G|=" << worst;
    const auto level = sample_level_set(v_evaluable(sys), 2, -1.0, 1000, 2, {diag});
    for (std::int64_t s : {1, 2, 4, 8}) {
      const auto stat = sup_error(vs_evaluable(build_map(sys, s)), green_evaluable(pd), level);
      const double target = std::log(2.0) / static_cast<double>(s);
      o.require(std::abs(stat.sup_error - target) <= 1e-9, "sup|v_s-G| = log2/s");
      o.detail << " s=" << s << ":" << stat.sup_error;
    }
  });

  run(2, "ball convergence (d=8, eps=0.2)", 60.0, [&](Outcome& o) {
    const auto ball = unit_ball(2);
    SelectionBudget budget;
    budget.initial_grid = 8;
    budget.max_grid = 8;
    const auto sel8 = select_support_pieces(ball, 0.2, -1.0, budget);
    const auto sys = emit_monomials(rationalize(sel8.pieces, Rational(-1)));
    const auto s0 = find_s0(ball, sys, 0.2, -1.0, {}, 7);
    const auto fresh = sample_level_set(v_evaluable(sys), 2, -1.0, 500, 20260101);
    const auto stat = sup_error(vs_evaluable(s0.map), green_evaluable(ball), fresh);
    o.require(stat.sup_error < 0.2, "fresh sup error < 0.2");
    std::vector<SupportPiece> pieces16;
    for (const auto& th : simplex_grid(2, 16)) {
      const auto t = to_doubles(th);
      pieces16.push_back({t, support_h(ball, t), th});
    }
    const double err8 = measure_shell_error(ball, sel8.pieces, -1.0, 4000, 99);
    const double err16 = measure_shell_error(ball, pieces16, -1.0, 4000, 99);
    o.require(err16 < err8, "d=16 reduces the PL error");
    o.detail << " m=" << sys.m() << " q=" << sys.q << " s=" << s0.s << " fresh_sup=" << stat.sup_error
             << " pl_err(d=8)=" << err8 << " pl_err(d=16)=" << err16;
  });

  run(3, "polyhedral oracle equivalence", 0, [&](Outcome& o) {
    const auto d = corner_domain();
    const std::size_t res = 256;
    const SupportGrid grid(d, res);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> level(-1.0, 0.0);
    double worst_ratio = 0.0, worst_excess = -1e300;
    for (int i = 0; i < 1000; ++i) {
      CVector z = random_unit_sphere(rng, 2);
      const double shift = level(rng) - green(d, z);
      for (auto& c : z) c *= std::exp(shift);
      const auto x = log_moduli(std::span<const Complex>(z));
      const double g = eval_green(d, x).value;
      const double oracle = grid.lower_bound(x);
      double max_abs_x = 0.0;
      for (double xi : x) max_abs_x = std::max(max_abs_x, std::abs(xi));
      const double tol = 2.0 / res * (max_abs_x + grid.max_abs_support());
      worst_ratio = std::max(worst_ratio, std::abs(g - oracle) / tol);
      worst_excess = std::max(worst_excess, oracle - g);
    }
    o.require(worst_ratio <= 1.0, "within 2/d (max|x| + |h|)");
    o.require(worst_excess <= 1e-12, "oracle is a lower bound");
    const double hand = green(d, CVector{Complex(0.8, 0), Complex(0.5, 0)});
    o.require(std::abs(hand - (-0.11157)) <= 1e-5, "hand value");
    o.detail << " max gap/tol=" << worst_ratio << " G(0.8,0.5)=" << hand;
  });

  run(4, "homogeneity suite", 0, [&](Outcome& o) {
    const auto pd = unit_polydisk(2);
    const auto corner = corner_domain();
    const auto ball = unit_ball(2);
    struct Case {
      const ReinhardtDomain* domain;
      MonomialSystem system;
      std::int64_t s;
    };
    std::vector<Case> cases{{&pd, exact_system(pd), 3}, {&corner, exact_system(corner), 2},
                            {&ball, ball_system(8, 0.2), 2}};
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    double worst = 0.0;
    for (const auto& c : cases) {
      const auto map = build_map(c.system, c.s);
      for (int i = 0; i < 1000; ++i) {
        const CVector z = random_point(rng, 2);
        const Complex factor = std::polar(std::exp(u(rng)), u(rng));
        CVector w = z;
        for (auto& x : w) x *= factor;
        const double lc = std::log(std::abs(factor));
        worst = std::max(worst, std::abs(green(*c.domain, w) - green(*c.domain, z) - lc));
        worst = std::max(worst, std::abs(eval_v(c.system, std::span<const Complex>(w)).value -
                                         eval_v(c.system, std::span<const Complex>(z)).value - lc));
        worst = std::max(worst, std::abs(eval_vs(map, w) - eval_vs(map, z) - lc));
      }
      // Uniform-convergence surrogate on the same directions.
      const auto level = sample_level_set(v_evaluable(c.system), 2, -1.0, 1000, 5, {diag});
      const double on_level = sup_error(vs_evaluable(map), green_evaluable(*c.domain), level).sup_error;
      const auto gplus = [&](std::span<const Complex> z) { return green_plus(*c.domain, z); };
      double on_spheres = 0.0;
      for (double radius : {0.5, 1.0, 2.0}) {
        const auto sphere = rescale_to_sphere(level, radius);
        on_spheres = std::max(on_spheres, sup_error(vs_evaluable(map, true), gplus, sphere).sup_error);
      }
      o.require(on_spheres <= on_level + 1e-9, "sup |v_s+ - G+| bounded by the level-set error");
      o.detail << " sphere/level=" << on_spheres << "/" << on_level;
    }
    o.require(worst < 1e-9, "homogeneity");
    o.detail << " max homogeneity defect=" << worst;
  });

  run(5, "general position", 0, [&](Outcome& o) {
    const auto d = corner_domain();
    auto pl = rationalize(exact_pieces_polyhedral(d), Rational(-1));
    const auto pass = check_general_position(pl, Rational(-1));
    o.require(pass.pass, "rationalized example passes");
    o.require(pl.pieces[2].b_tilde == Rational(-34657, 100000), "b3 rounding");
    pl.pieces[2].b_tilde = 0;
    const auto fail = check_general_position(pl, Rational(-1));
    o.require(!fail.pass && fail.witness == std::vector<std::size_t>{0, 1, 2}, "witness {1,2,3} when b3 = 0");
    std::size_t worst = 0;
    for (const auto& sys : {exact_system(unit_polydisk(2)), exact_system(d), ball_system(8, 0.2)}) {
      // The diagonal is a genuine two-way tie for the polydisk.
      const auto level = sample_level_set(v_evaluable(sys), 2, -1.0, 1000, 6, {diag});
      const auto hist = active_index_histogram(sys, level, 1e-9);
      worst = std::max(worst, hist.size() - 1);
    }
    o.require(worst <= 2, "active set size <= n");
    o.detail << " max active=" << worst;
  });

  run(6, "sandwich certificate (eps=0.25)", 120.0, [&](Outcome& o) {
    RunConfig cfg;
    cfg.epsilon = 0.25;
    cfg.samples = 10000;
    cfg.seed = 42;
    for (const auto& d : {unit_polydisk(2), corner_domain()}) {
      const auto res = run_pipeline(d, cfg);
      o.require(res.ok(), d.summary() + " passes");
      if (!res.certificate) continue;
      const auto& c = *res.certificate;
      o.require(c.counts.boundary == 10000 && c.counts.dilated == 10000, "sample counts");
      o.require(std::abs(c.delta - 0.11157) < 1e-5, "delta");
      o.detail << " [" << d.summary() << ": s=" << c.s << " inner=" << c.inner_margin << " outer=" << c.outer_margin
               << " zero_margin=" << c.zero_locus_margin << "]";
      if (d.constraints().size() == 2) o.require(c.zero_locus_margin > 0.5, "polydisk zero-locus margin > 0.5");
    }
  });

  run(7, "combiner oracle", 0, [&](Outcome& o) {
    std::vector<HomogeneousMap> maps;
    for (std::int64_t s : {1, 2, 3}) maps.push_back(build_map(exact_system(unit_polydisk(2)), s));
    maps.push_back(build_map(exact_system(corner_domain()), 1));
    std::mt19937_64 rng(7);
    double worst = 0.0;
    for (const auto& map : maps) {
      const auto expansion = expand_symbolic(map);
      for (int i = 0; i < 1000; ++i) {
        const CVector z = random_point(rng, 2);
        for (std::size_t k = 1; k <= 2; ++k) {
          const double a = eval_component(map, k, z).log_modulus;
          const double b = eval_expansion(expansion, k, z).log_modulus;
          if (!close_log(a, b, 1e-9)) o.require(false, "component mismatch");
          if (a != kNegInf) worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(a)));
        }
      }
      if (map.m() == 2 && map.s() % 2 == 1) {
        const CVector z{Complex(1, 0), Complex(-1, 0)};
        o.require(eval_component(map, 1, z).log_modulus == kNegInf &&
                      eval_expansion(expansion, 1, z).log_modulus == kNegInf,
                  "joint -inf at (1,-1)");
      }
    }
    o.detail << " max relative deviation=" << worst;
  });

  run(8, "upper-envelope inequality", 0, [&](Outcome& o) {
    std::vector<HomogeneousMap> maps;
    for (std::int64_t s : {1, 2, 4, 8}) maps.push_back(build_map(exact_system(unit_polydisk(2)), s));
    for (std::int64_t s : {1, 3, 4}) maps.push_back(build_map(exact_system(corner_domain()), s));
    for (std::int64_t s : {1, 2, 4}) maps.push_back(build_map(ball_system(8, 0.2), s));
    std::mt19937_64 rng(8);
    double worst = -1e300;
    for (const auto& map : maps) {
      const double slack = upper_envelope_slack(map);
      for (int i = 0; i < 1000; ++i) {
        const CVector z = random_point(rng, 2);
        const double excess = eval_vs(map, z) - eval_v(map.system(), std::span<const Complex>(z)).value - slack;
        worst = std::max(worst, excess);
      }
    }
    o.require(worst <= 1e-12, "v_s <= v + slack");
    double eq = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      const CVector one{Complex(1, 0), Complex(1, 0)};
      eq = std::max(eq, std::abs(eval_vs(maps[i], one) - upper_envelope_slack(maps[i])));
    }
    o.require(eq <= 1e-12, "equality for the polydisk at (1,1)");
    o.detail << " max excess=" << worst << " equality defect=" << eq;
  });

  run(9, "degree invariants and round trips", 0, [&](Outcome& o) {
    std::vector<HomogeneousMap> maps;
    for (std::int64_t s : {1, 2, 3}) maps.push_back(build_map(exact_system(unit_polydisk(2)), s));
    for (std::int64_t s : {1, 2}) maps.push_back(build_map(exact_system(corner_domain()), s));
    maps.push_back(build_map(exact_system(unit_polydisk(3)), 2));
    maps.push_back(build_map(ball_system(8, 0.2), 1));
    std::size_t terms = 0;
    for (const auto& map : maps) {
      const auto e = expand_symbolic(map);
      o.require(e.q_s == map.system().q * map.s() * map.n_factorial(), "q_s = q s n!");
      for (const auto& comp : e.components) {
        for (const auto& t : comp) {
          std::int64_t deg = 0;
          for (auto k : t.exponent) deg += k;
          if (deg != e.q_s) o.require(false, "term degree");
          ++terms;
        }
      }
    }
    const auto corner = corner_domain();
    const auto pl = rationalize(exact_pieces_polyhedral(corner), Rational(-1));
    const auto sys = emit_monomials(pl);
    const auto cert = build_sandwich(build_map(sys, 4), corner, 0.25, {1000, 1000, 1000});
    const auto bad = build_sandwich(build_map(sys, 1), corner, 0.25, {1000, 1000, 1000});
    o.require(round_trip(corner, domain_to_json, domain_from_json), "domain");
    o.require(round_trip(unit_ball(2), domain_to_json, domain_from_json), "ball domain");
    o.require(round_trip(pl, rational_pl_to_json, rational_pl_from_json), "rational PL");
    o.require(round_trip(sys, monomial_system_to_json, monomial_system_from_json), "monomial system");
    o.require(round_trip(cert, certificate_to_json, certificate_from_json), "certificate");
    o.require(round_trip(bad, certificate_to_json, certificate_from_json), "failed certificate");
    const auto back = certificate_from_json(Json::parse(certificate_to_json(cert).dump()));
    o.require(back.delta == cert.delta && back.inner_margin == cert.inner_margin &&
                  back.outer_margin == cert.outer_margin && back.zero_locus_margin == cert.zero_locus_margin,
              "certificate doubles bit-exact");
    o.detail << " terms checked=" << terms;
  });

  std::printf("%s: %d criteria failed\n", failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED", failures);
  return failures == 0 ? 0 : 1;
}
