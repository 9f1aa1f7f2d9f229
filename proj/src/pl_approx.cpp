#include "lemnis/pl_approx.hpp"

#include "lemnis/green.hpp"
#include "lemnis/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace lemnis {

namespace {

std::int64_t to_int64(const mpz_class& v, const char* what) {
  if (!v.fits_slong_p()) throw ComputationError(std::string(what) + " does not fit in 64 bits");
  return v.get_si();
}

Rational make_fraction(std::int64_t num, std::int64_t den) {
  Rational out(static_cast<long>(num), static_cast<long>(den));
  out.canonicalize();
  return out;
}

Rational ceil_to_grid(const Rational& value, std::int64_t denom) {
  mpz_class scaled_num = value.get_num() * denom;
  mpz_class c;
  mpz_cdiv_q(c.get_mpz_t(), scaled_num.get_mpz_t(), value.get_den().get_mpz_t());
  Rational out(c, denom);
  out.canonicalize();
  return out;
}

// Nearest point of the simplex grid 1/denom (largest-remainder rounding);
// zero entries stay zero.
RationalVector round_to_simplex(std::span<const double> theta, std::int64_t denom) {
  const std::size_t n = theta.size();
  std::vector<std::int64_t> k(n);
  std::vector<std::pair<double, std::size_t>> remainders;
  std::int64_t total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double scaled = std::max(theta[i], 0.0) * static_cast<double>(denom);
    k[i] = static_cast<std::int64_t>(std::floor(scaled));
    total += k[i];
    if (theta[i] > 0.0) remainders.emplace_back(scaled - static_cast<double>(k[i]), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; total < denom && !remainders.empty(); ++i, ++total) {
    ++k[remainders[i % remainders.size()].second];
  }
  for (std::size_t i = n; total > denom && i-- > 0;) {
    const std::int64_t take = std::min(k[i], total - denom);
    k[i] -= take;
    total -= take;
  }
  RationalVector out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = Rational(static_cast<long>(k[i]), static_cast<unsigned long>(denom));
    out[i].canonicalize();
  }
  return out;
}

std::size_t rank(std::vector<RationalVector> rows) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t pivot = r;
    while (pivot < rows.size() && sgn(rows[pivot][c]) == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[r], rows[pivot]);
    for (std::size_t i = r + 1; i < rows.size(); ++i) {
      if (sgn(rows[i][c]) == 0) continue;
      const Rational f = rows[i][c] / rows[r][c];
      for (std::size_t j = c; j < cols; ++j) rows[i][j] -= f * rows[r][j];
    }
    ++r;
  }
  return r;
}

bool next_combination(std::vector<std::size_t>& idx, std::size_t m) {
  const std::size_t k = idx.size();
  for (std::size_t i = k; i-- > 0;) {
    if (idx[i] < m - k + i) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

VValue max_with_ties(const std::vector<double>& values, double scale, double tie_tol) {
  VValue out;
  for (double v : values) out.value = std::max(out.value, v * scale);
  if (out.value == kNegInf) return out;
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (values[j] * scale >= out.value - tie_tol) out.active.push_back(j);
  }
  return out;
}

}  // namespace

double eval_pieces(const std::vector<SupportPiece>& pieces, std::span<const double> x) {
  double u = kNegInf;
  for (const auto& p : pieces) u = std::max(u, log_dot(p.theta, x) - p.b);
  return u;
}

std::vector<SupportPiece> exact_pieces_polyhedral(const ReinhardtDomain& domain) {
  if (!domain.is_polyhedral()) throw InputError("exact pieces need a polyhedral domain");
  if (!domain.validated()) throw InputError("domain has not been validated");
  std::vector<SupportPiece> pieces;
  for (const auto& c : domain.constraints()) {
    Rational norm = 0;
    for (const auto& a : c.alpha) norm += a;
    SupportPiece p;
    RationalVector theta;
    for (const auto& a : c.alpha) theta.push_back(a / norm);
    p.theta = to_doubles(theta);
    p.exact_theta = std::move(theta);
    p.b = c.log_c() / to_double(norm);
    pieces.push_back(std::move(p));
  }
  return pieces;
}

std::vector<SupportPiece> prune_redundant_pieces(const std::vector<SupportPiece>& pieces) {
  auto exact_theta = [](const SupportPiece& p) {
    if (p.exact_theta) return *p.exact_theta;
    RationalVector t;
    for (double v : p.theta) t.push_back(rational_from_double(v));
    return t;
  };

  std::vector<RationalVector> thetas;
  std::vector<Rational> bs;
  std::vector<std::size_t> unique;
  for (std::size_t j = 0; j < pieces.size(); ++j) {
    auto t = exact_theta(pieces[j]);
    Rational b = rational_from_double(pieces[j].b);
    bool duplicate = false;
    for (std::size_t u : unique) {
      if (thetas[u] == t && bs[u] == b) duplicate = true;
    }
    thetas.push_back(std::move(t));
    bs.push_back(std::move(b));
    if (!duplicate) unique.push_back(j);
  }
  if (unique.size() <= 1) {
    std::vector<SupportPiece> out;
    for (std::size_t j : unique) out.push_back(pieces[j]);
    return out;
  }

  const std::size_t n = pieces.front().theta.size();
  std::vector<SupportPiece> kept;
  for (std::size_t j : unique) {
    // maximize y  s.t.  <theta_i - theta_j, x> + y <= b_i - b_j  for every other i
    LinearProgram lp;
    lp.objective.assign(n + 1, Rational(0));
    lp.objective[n] = 1;
    for (std::size_t i : unique) {
      if (i == j) continue;
      RationalVector row(n + 1);
      for (std::size_t k = 0; k < n; ++k) row[k] = thetas[i][k] - thetas[j][k];
      row[n] = 1;
      lp.constraints.push_back(std::move(row));
      lp.rhs.push_back(bs[i] - bs[j]);
    }
    auto result = solve_lp_exact(lp);
    if (result.status == LPStatus::unbounded ||
        (result.status == LPStatus::optimal && sgn(*result.value) > 0)) {
      kept.push_back(pieces[j]);
    }
  }
  return kept;
}

SelectionBudgetExhausted::SelectionBudgetExhausted(double best_error_, std::size_t best_grid_)
    : ComputationError("piece selection budget exhausted; best error " + std::to_string(best_error_) +
                       " at grid " + std::to_string(best_grid_)),
      best_error(best_error_),
      best_grid(best_grid_) {}

double measure_shell_error(const ReinhardtDomain& domain, const std::vector<SupportPiece>& pieces, double t,
                           std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> level(t, 0.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    auto w = random_unit_sphere(rng, domain.dim());
    const double scale = std::exp(level(rng) - green(domain, w));
    for (auto& c : w) c *= scale;
    const auto x = log_moduli(w);
    const double g = eval_green(domain, std::span<const double>(x)).value;
    worst = std::max(worst, g - eval_pieces(pieces, x));
  }
  return worst;
}

Selection select_support_pieces(const ReinhardtDomain& domain, double epsilon, double t,
                                const SelectionBudget& budget) {
  if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
  if (!(t < 0.0)) throw InputError("shell level t must be negative");
  if (!domain.validated()) throw InputError("domain has not been validated");
  if (budget.initial_grid == 0) throw InputError("initial grid resolution must be positive");

  double best_error = std::numeric_limits<double>::infinity();
  std::size_t best_grid = 0;
  for (std::size_t d = budget.initial_grid; d <= budget.max_grid; d *= 2) {
    std::vector<SupportPiece> pieces;
    for (auto& theta : simplex_grid(domain.dim(), d)) {
      SupportPiece p;
      p.b = support_h(domain, theta);
      p.theta = to_doubles(theta);
      p.exact_theta = std::move(theta);
      pieces.push_back(std::move(p));
    }
    pieces = prune_redundant_pieces(pieces);
    if (pieces.size() > budget.max_pieces) break;

    const double err = measure_shell_error(domain, pieces, t, budget.samples, budget.seed);
    if (err < best_error) {
      best_error = err;
      best_grid = d;
    }
    if (err < epsilon / 2.0) {
      return Selection{std::move(pieces), d, err, budget.samples, budget.seed};
    }
  }
  throw SelectionBudgetExhausted(best_error, best_grid);
}

GeneralPosition check_general_position(const RationalPL& pl, const Rational& t) {
  GeneralPosition out;
  const std::size_t n = pl.n;
  const std::size_t m = pl.pieces.size();
  if (m <= n) return out;

  std::vector<std::size_t> idx(n + 1);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  const Rational shift = pl.r * t;
  do {
    std::vector<RationalVector> coeff, augmented;
    for (std::size_t j : idx) {
      const auto& p = pl.pieces[j];
      coeff.push_back(p.a_tilde);
      RationalVector row = p.a_tilde;
      row.push_back(p.b_tilde + shift);
      augmented.push_back(std::move(row));
    }
    if (rank(coeff) == rank(augmented)) {
      out.pass = false;
      out.witness = idx;
      return out;
    }
  } while (next_combination(idx, m));
  return out;
}

GeneralPositionFailure::GeneralPositionFailure(std::vector<std::size_t> witness_)
    : ComputationError("general position not reached; last violating set has " +
                       std::to_string(witness_.size()) + " pieces"),
      witness(std::move(witness_)) {}

RationalPL rationalize(const std::vector<SupportPiece>& pieces, const Rational& t,
                       const RationalizeOptions& options) {
  if (pieces.empty()) throw InputError("rationalize needs at least one piece");
  if (sgn(t) >= 0) throw InputError("certification level t must be negative");
  if (options.denom_bound < 1) throw InputError("denominator bound must be positive");
  const std::int64_t B = options.denom_bound;
  const std::size_t n = pieces.front().theta.size();

  std::vector<RationalVector> base_a;
  std::vector<Rational> b_exact;
  for (const auto& p : pieces) {
    if (p.theta.size() != n) throw InputError("pieces have inconsistent dimensions");
    RationalVector a;
    if (p.exact_theta) {
      a = *p.exact_theta;
      Rational sum = 0;
      for (const auto& v : a) {
        if (sgn(v) < 0) throw InputError("exact theta has a negative entry");
        sum += v;
      }
      if (sum != 1) throw InputError("exact theta is not on the simplex");
    } else {
      a = round_to_simplex(p.theta, B);
    }
    base_a.push_back(std::move(a));
    b_exact.push_back(rational_from_double(p.b));
  }

  std::mt19937_64 rng(options.seed);
  std::vector<std::int64_t> bumps(pieces.size(), 0);
  RationalPL pl;
  pl.n = n;
  pl.t = t;
  pl.r = 1;

  for (std::size_t attempt = 1;; ++attempt) {
    pl.pieces.clear();
    for (std::size_t j = 0; j < pieces.size(); ++j) {
      RationalPiece rp;
      for (const auto& v : base_a[j]) rp.a_tilde.push_back(pl.r * v);
      rp.b_tilde = ceil_to_grid(pl.r * b_exact[j], B) + make_fraction(bumps[j], B);
      pl.pieces.push_back(std::move(rp));
    }
    pl.attempts = attempt;
    auto gp = check_general_position(pl, t);
    if (gp.pass) {
      pl.gp_certified = true;
      break;
    }
    if (attempt >= options.max_attempts) throw GeneralPositionFailure(gp.witness);
    if (attempt == options.max_attempts / 2 && !pl.used_r_fallback) {
      pl.used_r_fallback = true;
      pl.r = make_fraction(B + 1, B);
      pl.r.canonicalize();
      std::fill(bumps.begin(), bumps.end(), 0);
      continue;
    }
    const std::size_t pick = gp.witness[rng() % gp.witness.size()];
    bumps[pick] += 1 + static_cast<std::int64_t>(rng() % 16);
  }

  pl.max_b_rounding = 0.0;
  pl.perturbation_norm = 0.0;
  for (std::size_t j = 0; j < pieces.size(); ++j) {
    const auto& rp = pl.pieces[j];
    const double db = to_double(rp.b_tilde / pl.r - b_exact[j]);
    pl.max_b_rounding = std::max(pl.max_b_rounding, db);
    double da = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const Rational ref = pieces[j].exact_theta ? (*pieces[j].exact_theta)[k] : rational_from_double(pieces[j].theta[k]);
      da = std::max(da, std::abs(to_double(rp.a_tilde[k] / pl.r - ref)));
    }
    pl.perturbation_norm = std::max({pl.perturbation_norm, std::abs(db), da});
  }
  return pl;
}

MonomialSystem emit_monomials(const RationalPL& pl) {
  if (!pl.gp_certified) throw InputError("rational approximant is not certified in general position");
  if (pl.pieces.empty()) throw InputError("rational approximant has no pieces");

  mpz_class N = pl.r.get_den();
  for (const auto& p : pl.pieces) {
    const mpz_class d = common_denominator(p.a_tilde);
    mpz_lcm(N.get_mpz_t(), N.get_mpz_t(), d.get_mpz_t());
  }
  const Rational q_exact = pl.r * Rational(N);
  if (q_exact.get_den() != 1) throw ComputationError("degree r N is not integral");

  MonomialSystem sys;
  sys.n = pl.n;
  sys.r = pl.r;
  sys.N = to_int64(N, "N");
  sys.q = to_int64(q_exact.get_num(), "degree q");
  for (const auto& p : pl.pieces) {
    Monomial mono;
    std::int64_t degree = 0;
    for (const auto& a : p.a_tilde) {
      const Rational k = a * Rational(N);
      mono.k_vec.push_back(to_int64(k.get_num(), "exponent"));
      degree += mono.k_vec.back();
    }
    if (degree != sys.q) throw ComputationError("monomial degree differs from q");
    mono.log_coef = -Rational(N) * p.b_tilde;
    sys.monomials.push_back(std::move(mono));
  }
  return sys;
}

VValue eval_v(const MonomialSystem& system, std::span<const double> x, double tie_tol) {
  std::vector<double> values;
  values.reserve(system.m());
  std::vector<double> k(system.n);
  for (const auto& mono : system.monomials) {
    for (std::size_t i = 0; i < system.n; ++i) k[i] = static_cast<double>(mono.k_vec[i]);
    values.push_back(log_dot(k, x) + to_double(mono.log_coef));
  }
  return max_with_ties(values, 1.0 / static_cast<double>(system.q), tie_tol);
}

VValue eval_v(const MonomialSystem& system, std::span<const Complex> z, double tie_tol) {
  const auto x = log_moduli(z);
  return eval_v(system, std::span<const double>(x), tie_tol);
}

VValue eval_v(const RationalPL& pl, std::span<const double> x, double tie_tol) {
  std::vector<double> values;
  values.reserve(pl.pieces.size());
  for (const auto& p : pl.pieces) {
    const auto a = to_doubles(p.a_tilde);
    values.push_back(log_dot(a, x) - to_double(p.b_tilde));
  }
  return max_with_ties(values, 1.0 / to_double(pl.r), tie_tol);
}

VValue eval_v(const RationalPL& pl, std::span<const Complex> z, double tie_tol) {
  const auto x = log_moduli(z);
  return eval_v(pl, std::span<const double>(x), tie_tol);
}

}  // namespace lemnis
