#include "lemnis/verifier.hpp"

#include "lemnis/green.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace lemnis {

const char* to_string(SampleKind kind) {
  switch (kind) {
    case SampleKind::sphere: return "sphere";
    case SampleKind::torus_ray: return "torus_ray";
    case SampleKind::level_set: return "level_set";
    case SampleKind::boundary: return "boundary";
    case SampleKind::dilated_boundary: return "dilated_boundary";
  }
  return "?";
}

CVector diagonal_direction(std::size_t n) {
  return CVector(n, Complex(1.0 / std::sqrt(static_cast<double>(n)), 0.0));
}

SampleSet sample_sphere(std::size_t n, std::size_t count, std::uint64_t seed, double radius) {
  std::mt19937_64 rng(seed);
  SampleSet out;
  out.provenance = {SampleKind::sphere, radius, seed, count, 0};
  for (std::size_t i = 0; i < count; ++i) {
    auto w = random_unit_sphere(rng, n);
    for (auto& c : w) c *= radius;
    out.points.push_back(std::move(w));
  }
  return out;
}

namespace {

bool place_on_level(const Evaluable& u, CVector& w, double t) {
  const double uw = u(w);
  if (!std::isfinite(uw)) return false;
  const double scale = std::exp(t - uw);
  for (auto& c : w) c *= scale;
  return true;
}

}  // namespace

SampleSet sample_level_set(const Evaluable& u, std::size_t n, double t, std::size_t count, std::uint64_t seed,
                           const std::vector<CVector>& extra_directions) {
  std::mt19937_64 rng(seed);
  SampleSet out;
  out.provenance = {SampleKind::level_set, t, seed, count, 0};
  for (auto w : extra_directions) {
    if (out.points.size() >= count) break;
    if (place_on_level(u, w, t)) {
      out.points.push_back(std::move(w));
    } else {
      ++out.provenance.redraws;
    }
  }
  constexpr std::size_t kMaxRedraws = 1000000;
  while (out.points.size() < count) {
    auto w = random_unit_sphere(rng, n);
    if (place_on_level(u, w, t)) {
      out.points.push_back(std::move(w));
    } else if (++out.provenance.redraws > kMaxRedraws) {
      throw ComputationError("level-set sampler keeps drawing directions where u = -inf");
    }
  }
  return out;
}

SampleSet project_to_level(const Evaluable& u, const SampleSet& directions, double t) {
  SampleSet out;
  out.provenance = directions.provenance;
  out.provenance.kind = SampleKind::level_set;
  out.provenance.parameter = t;
  for (auto w : directions.points) {
    if (place_on_level(u, w, t)) {
      out.points.push_back(std::move(w));
    } else {
      ++out.provenance.redraws;
    }
  }
  return out;
}

SampleSet rescale_to_sphere(const SampleSet& samples, double radius) {
  SampleSet out;
  out.provenance = samples.provenance;
  out.provenance.kind = SampleKind::sphere;
  out.provenance.parameter = radius;
  for (auto w : samples.points) {
    const double norm = euclidean_norm(w);
    if (norm == 0.0) continue;
    for (auto& c : w) c *= radius / norm;
    out.points.push_back(std::move(w));
  }
  return out;
}

ErrorStat sup_error(const Evaluable& f, const Evaluable& g, const SampleSet& samples) {
  ErrorStat stat;
  double total = 0.0;
  for (const auto& z : samples.points) {
    const double a = f(z);
    const double b = g(z);
    const double err = (a == b) ? 0.0 : std::abs(a - b);
    total += err;
    if (stat.count == 0 || err > stat.sup_error) {
      stat.sup_error = err;
      stat.argmax_point = z;
    }
    ++stat.count;
  }
  stat.mean_error = stat.count ? total / static_cast<double>(stat.count) : 0.0;
  return stat;
}

Evaluable green_evaluable(const ReinhardtDomain& domain) {
  return [domain](std::span<const Complex> z) { return green(domain, z); };
}

Evaluable v_evaluable(const MonomialSystem& system) {
  return [system](std::span<const Complex> z) { return eval_v(system, z).value; };
}

Evaluable vs_evaluable(const HomogeneousMap& map, bool clamp_plus) {
  return [map, clamp_plus](std::span<const Complex> z) { return eval_vs(map, z, clamp_plus); };
}

S0Failure::S0Failure(std::int64_t best_s_, double best_error_, std::vector<SScheduleRow> table_)
    : ComputationError("s cap reached; best s = " + std::to_string(best_s_) + " with error " +
                       std::to_string(best_error_)),
      best_s(best_s_),
      best_error(best_error_),
      table(std::move(table_)) {}

S0Result find_s0(const ReinhardtDomain& domain, const MonomialSystem& system, double epsilon, double t,
                 const S0Schedule& schedule, std::uint64_t seed) {
  if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
  if (schedule.s_start < 1 || schedule.s_cap < schedule.s_start) throw InputError("bad s schedule");

  const auto G = green_evaluable(domain);
  std::vector<CVector> extra;
  if (schedule.include_diagonal) extra.push_back(diagonal_direction(system.n));
  const auto level = sample_level_set(v_evaluable(system), system.n, t, schedule.samples, seed, extra);
  const auto sphere = sample_sphere(system.n, schedule.samples, seed ^ 0x9e3779b97f4a7c15ULL);

  std::vector<SScheduleRow> table;
  bool monotone = true;
  std::int64_t best_s = 0;
  double best_error = std::numeric_limits<double>::infinity();
  for (std::int64_t s = schedule.s_start; s <= schedule.s_cap; s *= 2) {
    HomogeneousMap map = build_map(system, s);
    const auto vs = vs_evaluable(map);
    SScheduleRow row{s, sup_error(vs, G, level), sup_error(vs, G, sphere)};
    if (!table.empty() && row.level_set.sup_error >= table.back().level_set.sup_error) monotone = false;
    if (row.level_set.sup_error < best_error) {
      best_error = row.level_set.sup_error;
      best_s = s;
    }
    table.push_back(row);
    if (row.level_set.sup_error < epsilon) {
      return S0Result{s, std::move(map), std::move(table), monotone};
    }
  }
  throw S0Failure(best_s, best_error, std::move(table));
}

double zero_locus_margin(const HomogeneousMap& map, const SampleSet& samples) {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& z : samples.points) {
    double best = kNegInf;
    for (const auto& c : eval_components(map, z)) best = std::max(best, c.log_modulus);
    worst = std::min(worst, best / static_cast<double>(map.q_s()));
  }
  return std::exp(worst);
}

double zero_locus_margin(const HomogeneousMap& map, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw InputError("zero-locus margin needs at least one sample");
  return zero_locus_margin(map, sample_sphere(map.n(), count, seed));
}

double sandwich_delta(double epsilon) { return 0.5 * std::log(1.0 + epsilon); }

double scaled_log_max(const HomogeneousMap& map, double delta, std::span<const Complex> z) {
  const double scale_log = -delta * static_cast<double>(map.q_s());
  double best = kNegInf;
  for (const auto& c : eval_components(map, z)) best = std::max(best, c.log_modulus + scale_log);
  return best / static_cast<double>(map.q_s());
}

SandwichCertificate build_sandwich(const HomogeneousMap& map, const ReinhardtDomain& domain, double epsilon,
                                   const SandwichCounts& counts, const SandwichSeeds& seeds,
                                   bool include_diagonal) {
  if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
  SandwichCertificate cert;
  cert.epsilon = epsilon;
  cert.delta = sandwich_delta(epsilon);
  cert.s = map.s();
  cert.q_s = map.q_s();
  cert.scale_log = -cert.delta * static_cast<double>(map.q_s());
  cert.counts = counts;
  cert.seeds = seeds;
  cert.include_diagonal = include_diagonal;

  const auto G = green_evaluable(domain);
  std::vector<CVector> extra;
  if (include_diagonal) extra.push_back(diagonal_direction(map.n()));

  auto boundary = sample_level_set(G, map.n(), 0.0, counts.boundary, seeds.boundary, extra);
  boundary.provenance.kind = SampleKind::boundary;
  cert.inner_margin = kNegInf;
  const CVector* inner_worst = nullptr;
  for (const auto& z : boundary.points) {
    const double v = scaled_log_max(map, cert.delta, z);
    if (inner_worst == nullptr || v > cert.inner_margin) {
      cert.inner_margin = v;
      inner_worst = &z;
    }
  }

  auto dilated = sample_level_set(G, map.n(), std::log(1.0 + epsilon), counts.dilated, seeds.dilated, extra);
  dilated.provenance.kind = SampleKind::dilated_boundary;
  cert.outer_margin = std::numeric_limits<double>::infinity();
  const CVector* outer_worst = nullptr;
  for (const auto& z : dilated.points) {
    const double v = scaled_log_max(map, cert.delta, z);
    if (outer_worst == nullptr || v < cert.outer_margin) {
      cert.outer_margin = v;
      outer_worst = &z;
    }
  }

  cert.zero_locus_margin = zero_locus_margin(map, counts.sphere, seeds.sphere);

  cert.passed = true;
  if (!(cert.inner_margin < 0.0)) {
    cert.passed = false;
    cert.failure = "inner inclusion fails: max_k |p_k| >= 1 on the boundary of D";
    cert.counterexample = *inner_worst;
  } else if (!(cert.outer_margin >= 0.0)) {
    cert.passed = false;
    cert.failure = "outer inclusion fails: max_k |p_k| < 1 on the dilated boundary";
    cert.counterexample = *outer_worst;
  } else if (!(cert.zero_locus_margin > 0.0)) {
    cert.passed = false;
    cert.failure = "common zero found on the unit sphere";
  }
  return cert;
}

CertificateCheck recheck_certificate(const SandwichCertificate& stored, const HomogeneousMap& map,
                                     const ReinhardtDomain& domain, const SandwichSeeds& seeds) {
  CertificateCheck check;
  if (stored.delta != sandwich_delta(stored.epsilon)) {
    check.reason = "delta does not equal log(1 + epsilon) / 2";
    return check;
  }
  if (stored.q_s != map.q_s() || stored.s != map.s()) {
    check.reason = "certificate degree does not match the map";
    return check;
  }
  if (stored.scale_log != -stored.delta * static_cast<double>(map.q_s())) {
    check.reason = "scale_log does not equal -delta q_s";
    return check;
  }
  if (!stored.passed) {
    check.reason = "stored certificate is not a passing certificate";
    return check;
  }
  check.recomputed = build_sandwich(map, domain, stored.epsilon, stored.counts, seeds, stored.include_diagonal);
  if (!check.recomputed.passed) {
    check.reason = check.recomputed.failure;
    return check;
  }
  check.confirmed = true;
  return check;
}

std::vector<std::size_t> active_index_histogram(const MonomialSystem& system, const SampleSet& samples,
                                                double tie_tol) {
  std::vector<std::size_t> hist(system.m() + 1, 0);
  for (const auto& z : samples.points) ++hist[eval_v(system, z, tie_tol).active.size()];
  while (hist.size() > 1 && hist.back() == 0) hist.pop_back();
  return hist;
}

}  // namespace lemnis
