#pragma once

#include "lemnis/combiner.hpp"
#include "lemnis/domain.hpp"
#include "lemnis/error.hpp"
#include "lemnis/pl_approx.hpp"
#include "lemnis/types.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lemnis {

// A function with u(cz) = u(z) + log|c|.
using Evaluable = std::function<double(std::span<const Complex>)>;

enum class SampleKind { sphere, torus_ray, level_set, boundary, dilated_boundary };
const char* to_string(SampleKind kind);

struct SampleProvenance {
  SampleKind kind = SampleKind::sphere;
  double parameter = 0.0;  // level t, dilation factor, or sphere radius
  std::uint64_t seed = 0;
  std::size_t count = 0;
  std::size_t redraws = 0;  // directions discarded because u(w) = -inf
};

struct SampleSet {
  std::vector<CVector> points;
  SampleProvenance provenance;
};

// Uniform points on the sphere of the given radius.
SampleSet sample_sphere(std::size_t n, std::size_t count, std::uint64_t seed, double radius = 1.0);

// Points e^{t - u(w)} w for random unit directions w (plus the given extra
// directions, placed first); they lie on {u = t} by homogeneity.
SampleSet sample_level_set(const Evaluable& u, std::size_t n, double t, std::size_t count, std::uint64_t seed,
                           const std::vector<CVector>& extra_directions = {});

// Same directions as `directions`, radially projected onto {u = t}.
SampleSet project_to_level(const Evaluable& u, const SampleSet& directions, double t);

// Every point rescaled to Euclidean norm `radius`.
SampleSet rescale_to_sphere(const SampleSet& samples, double radius);

// (1, ..., 1) / sqrt(n).
CVector diagonal_direction(std::size_t n);

struct ErrorStat {
  double sup_error = 0.0;
  CVector argmax_point;
  double mean_error = 0.0;
  std::size_t count = 0;
};

// max and mean of |f - g|; points where both are -inf count as zero error.
ErrorStat sup_error(const Evaluable& f, const Evaluable& g, const SampleSet& samples);

Evaluable green_evaluable(const ReinhardtDomain& domain);
Evaluable v_evaluable(const MonomialSystem& system);
Evaluable vs_evaluable(const HomogeneousMap& map, bool clamp_plus = false);

struct SScheduleRow {
  std::int64_t s = 0;
  ErrorStat level_set;  // |v_s - G| on the level set of v
  ErrorStat sphere;     // |v_s - G| on the unit sphere
};

struct S0Schedule {
  std::int64_t s_start = 1;
  std::int64_t s_cap = 1024;
  std::size_t samples = 500;
  bool include_diagonal = true;
};

struct S0Result {
  std::int64_t s = 0;
  HomogeneousMap map;
  std::vector<SScheduleRow> table;
  bool monotone = true;  // errors decreased at every doubling
};

class S0Failure : public ComputationError {
public:
  S0Failure(std::int64_t best_s, double best_error, std::vector<SScheduleRow> table);
  std::int64_t best_s;
  double best_error;
  std::vector<SScheduleRow> table;
};

// Doubles s from schedule.s_start until sup |v_s - G| over a level-t sample of
// v is below epsilon.
S0Result find_s0(const ReinhardtDomain& domain, const MonomialSystem& system, double epsilon, double t,
                 const S0Schedule& schedule, std::uint64_t seed);

// min over the samples of (max_k |g_k^(s)(z)|)^{1/q_s}. Zero if any sample is
// a common zero.
double zero_locus_margin(const HomogeneousMap& map, const SampleSet& samples);
double zero_locus_margin(const HomogeneousMap& map, std::size_t count, std::uint64_t seed);

// delta = log(1 + epsilon) / 2
double sandwich_delta(double epsilon);

// q_s^{-1} max_k log|p_k(z)| with p_k(z) = P_k(e^{-delta} z) realized as the
// coefficient shift -delta q_s.
double scaled_log_max(const HomogeneousMap& map, double delta, std::span<const Complex> z);

struct SandwichCounts {
  std::size_t boundary = 10000;
  std::size_t dilated = 10000;
  std::size_t sphere = 10000;
};

struct SandwichSeeds {
  std::uint64_t boundary = 1;
  std::uint64_t dilated = 2;
  std::uint64_t sphere = 3;
};

struct SandwichCertificate {
  double epsilon = 0.0;
  double delta = 0.0;
  std::int64_t s = 0;
  std::int64_t q_s = 0;
  double scale_log = 0.0;
  double inner_margin = 0.0;  // max over the boundary sample; must be < 0
  double outer_margin = 0.0;  // min over the dilated boundary sample; must be >= 0
  double zero_locus_margin = 0.0;
  SandwichCounts counts;
  SandwichSeeds seeds;
  bool include_diagonal = true;
  bool passed = false;
  std::string failure;  // empty on pass
  std::optional<CVector> counterexample;
};

SandwichCertificate build_sandwich(const HomogeneousMap& map, const ReinhardtDomain& domain, double epsilon,
                                   const SandwichCounts& counts = {}, const SandwichSeeds& seeds = {},
                                   bool include_diagonal = true);

struct CertificateCheck {
  bool confirmed = false;
  std::string reason;
  SandwichCertificate recomputed;
};

// Re-derives delta, scale and degree from the stored certificate and re-runs
// the margin checks with the given seeds.
CertificateCheck recheck_certificate(const SandwichCertificate& stored, const HomogeneousMap& map,
                                     const ReinhardtDomain& domain, const SandwichSeeds& seeds);

// Histogram of |active set| of v over the samples (index = count).
std::vector<std::size_t> active_index_histogram(const MonomialSystem& system, const SampleSet& samples,
                                                double tie_tol = 1e-9);

}  // namespace lemnis
