#pragma once

#include "lemnis/combiner.hpp"
#include "lemnis/domain.hpp"
#include "lemnis/green.hpp"
#include "lemnis/pl_approx.hpp"
#include "lemnis/serialize.hpp"
#include "lemnis/verifier.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace lemnis {

// Process exit codes, one per failing stage.
enum class ExitCode : int {
  ok = 0,
  usage = 1,
  input = 2,
  validation = 3,
  selection = 4,
  general_position = 5,
  convergence = 6,
  certificate = 7,
  io = 8,
  refuted = 9,
};

const char* stage_name(ExitCode code);

struct RunConfig {
  double epsilon = 0.25;          // dilation of the sandwich (1 + epsilon) D
  Rational t = -1;                // certification level of general position
  std::size_t grid = 1;           // initial simplex grid for smooth domains
  std::int64_t denom_bound = 100000;
  std::int64_t s_cap = 1024;
  std::size_t samples = 10000;    // per certificate sample set
  std::size_t selection_samples = 2000;
  std::size_t s0_samples = 500;
  std::uint64_t seed = 42;
};

// Independent seed streams derived from the run seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

struct ApproximationReport {
  std::string domain_summary;
  Json domain;
  double epsilon = 0.0;
  double delta = 0.0;
  std::string piece_source;  // "exact" or "grid"
  std::size_t grid = 0;
  std::optional<ClosedFormCheck> closed_form_check;
  double selection_error = 0.0;
  std::size_t m = 0;
  std::int64_t q = 0;
  std::int64_t N = 0;
  Rational r = 1;
  double max_b_rounding = 0.0;
  double perturbation_norm = 0.0;
  std::size_t gp_attempts = 0;
  bool used_r_fallback = false;
  std::int64_t s = 0;
  bool monotone_decay = true;
  std::vector<SScheduleRow> s_table;
  std::vector<std::size_t> active_histogram;
  SandwichCertificate certificate;
  Json config;
  Json timings;
};

Json report_to_json(const ApproximationReport& report);

struct PipelineResult {
  ExitCode code = ExitCode::ok;
  std::string message;
  std::optional<ReinhardtDomain> domain;  // validated
  std::optional<ApproximationReport> report;
  std::optional<RationalPL> pl;
  std::optional<MonomialSystem> system;
  std::optional<HomogeneousMap> map;
  std::optional<SandwichCertificate> certificate;
  std::optional<SampleSet> level_samples;
  Json error;  // machine-readable error block, null on success

  bool ok() const { return code == ExitCode::ok; }
};

// validate -> pieces -> rationalize -> emit_monomials -> find_s0 -> build_sandwich.
// The approximation tolerance of the Green function is delta = log(1 + epsilon) / 2.
PipelineResult run_pipeline(ReinhardtDomain domain, const RunConfig& config);

// report.json, certificate.json (with the domain), map.json, pl.json, samples.csv.
void write_artifacts(const PipelineResult& result, const std::filesystem::path& out_dir);

Json config_to_json(const RunConfig& config);

}  // namespace lemnis
