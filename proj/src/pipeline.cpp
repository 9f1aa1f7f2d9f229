#include "lemnis/pipeline.hpp"

#include "lemnis/error.hpp"

#include <chrono>
#include <fstream>

namespace lemnis {

const char* stage_name(ExitCode code) {
  switch (code) {
    case ExitCode::ok: return "ok";
    case ExitCode::usage: return "usage";
    case ExitCode::input: return "input";
    case ExitCode::validation: return "validation";
    case ExitCode::selection: return "selection";
    case ExitCode::general_position: return "general_position";
    case ExitCode::convergence: return "convergence";
    case ExitCode::certificate: return "certificate";
    case ExitCode::io: return "io";
    case ExitCode::refuted: return "refuted";
  }
  return "?";
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 of the combined state
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Json config_to_json(const RunConfig& config) {
  return Json{{"epsilon", double_to_json(config.epsilon)},
              {"t", to_string(config.t)},
              {"grid", config.grid},
              {"denom_bound", config.denom_bound},
              {"s_cap", config.s_cap},
              {"samples", config.samples},
              {"selection_samples", config.selection_samples},
              {"s0_samples", config.s0_samples},
              {"seed", config.seed}};
}

Json report_to_json(const ApproximationReport& r) {
  Json j;
  j["domain"] = r.domain;
  j["domain_summary"] = r.domain_summary;
  j["epsilon"] = double_to_json(r.epsilon);
  j["delta"] = double_to_json(r.delta);

  Json pieces;
  pieces["source"] = r.piece_source;
  pieces["grid"] = r.grid;
  pieces["selection_error"] = double_to_json(r.selection_error);
  if (r.closed_form_check) {
    const auto& c = *r.closed_form_check;
    pieces["closed_form_check"] = Json{{"count", c.count},
                                       {"max_excess", double_to_json(c.max_excess)},
                                       {"max_gap", double_to_json(c.max_gap)},
                                       {"tolerance", double_to_json(c.tolerance)},
                                       {"passed", c.passed}};
  }
  j["pieces"] = std::move(pieces);

  j["rationalization"] = Json{{"max_b_rounding", double_to_json(r.max_b_rounding)},
                              {"perturbation_norm", double_to_json(r.perturbation_norm)},
                              {"attempts", r.gp_attempts},
                              {"used_r_fallback", r.used_r_fallback}};
  j["monomials"] = Json{{"m", r.m}, {"q", r.q}, {"N", r.N}, {"r", to_string(r.r)}};

  Json table = Json::array();
  for (const auto& row : r.s_table) {
    table.push_back(Json{{"s", row.s},
                         {"level_set", error_stat_to_json(row.level_set)},
                         {"sphere", error_stat_to_json(row.sphere)}});
  }
  j["convergence"] = Json{{"s", r.s}, {"monotone", r.monotone_decay}, {"table", std::move(table)}};
  j["active_index_histogram"] = r.active_histogram;
  j["certificate"] = certificate_to_json(r.certificate);
  j["config"] = r.config;
  j["timings"] = r.timings;
  return j;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

PipelineResult failure(ExitCode code, const std::string& message, Json details = Json::object()) {
  PipelineResult r;
  r.code = code;
  r.message = message;
  r.error = Json{{"stage", stage_name(code)}, {"exit_code", static_cast<int>(code)}, {"message", message}};
  r.error["details"] = std::move(details);
  return r;
}

}  // namespace

PipelineResult run_pipeline(ReinhardtDomain domain, const RunConfig& config) {
  if (!(config.epsilon > 0.0)) return failure(ExitCode::input, "epsilon must be positive");
  if (sgn(config.t) >= 0) return failure(ExitCode::input, "t must be negative");

  Json timings;
  auto clock = Clock::now();
  auto validation = validate(domain);
  timings["validate"] = seconds_since(clock);
  if (!validation.ok) {
    Json failures = Json::array();
    for (const auto& f : validation.failures) {
      Json w = Json::array();
      for (double x : f.witness) w.push_back(double_to_json(x));
      failures.push_back(Json{{"code", f.code}, {"message", f.message}, {"witness", w}});
    }
    return failure(ExitCode::validation, validation.failures.front().message, Json{{"failures", failures}});
  }

  ApproximationReport report;
  report.domain = domain_to_json(domain);
  report.domain_summary = domain.summary();
  report.epsilon = config.epsilon;
  report.delta = sandwich_delta(config.epsilon);
  report.config = config_to_json(config);
  const double t = to_double(config.t);

  clock = Clock::now();
  std::vector<SupportPiece> pieces;
  bool exact = false;
  if (domain.is_polyhedral()) {
    const std::size_t d = domain.dim() == 2 ? 64 : 16;
    report.closed_form_check = check_green_closed_form(domain, 1000, d, derive_seed(config.seed, 0), t);
    exact = report.closed_form_check->passed;
  }
  try {
    if (exact) {
      pieces = prune_redundant_pieces(exact_pieces_polyhedral(domain));
      report.piece_source = "exact";
      report.selection_error =
          measure_shell_error(domain, pieces, t, config.selection_samples, derive_seed(config.seed, 1));
    } else {
      SelectionBudget budget;
      budget.initial_grid = config.grid;
      budget.samples = config.selection_samples;
      budget.seed = derive_seed(config.seed, 1);
      auto selection = select_support_pieces(domain, report.delta, t, budget);
      pieces = std::move(selection.pieces);
      report.piece_source = "grid";
      report.grid = selection.grid;
      report.selection_error = selection.measured_error;
    }
  } catch (const SelectionBudgetExhausted& e) {
    return failure(ExitCode::selection, e.what(),
                   Json{{"best_error", double_to_json(e.best_error)}, {"best_grid", e.best_grid}});
  }
  timings["pieces"] = seconds_since(clock);

  clock = Clock::now();
  RationalPL pl;
  try {
    RationalizeOptions opts;
    opts.denom_bound = config.denom_bound;
    opts.seed = derive_seed(config.seed, 2);
    pl = rationalize(pieces, config.t, opts);
  } catch (const GeneralPositionFailure& e) {
    return failure(ExitCode::general_position, e.what(), Json{{"witness", e.witness}});
  }
  report.max_b_rounding = pl.max_b_rounding;
  report.perturbation_norm = pl.perturbation_norm;
  report.gp_attempts = pl.attempts;
  report.used_r_fallback = pl.used_r_fallback;
  MonomialSystem system = emit_monomials(pl);
  report.m = system.m();
  report.q = system.q;
  report.N = system.N;
  report.r = system.r;
  timings["rationalize"] = seconds_since(clock);

  if (system.m() < system.n) {
    return failure(ExitCode::selection, "fewer monomials than the dimension");
  }

  clock = Clock::now();
  S0Schedule schedule;
  schedule.s_cap = config.s_cap;
  schedule.samples = config.s0_samples;
  const std::uint64_t s0_seed = derive_seed(config.seed, 3);
  std::optional<S0Result> s0;
  try {
    s0 = find_s0(domain, system, report.delta, t, schedule, s0_seed);
  } catch (const S0Failure& e) {
    return failure(ExitCode::convergence, e.what(),
                   Json{{"best_s", e.best_s}, {"best_error", double_to_json(e.best_error)}});
  }
  report.s = s0->s;
  report.s_table = s0->table;
  report.monotone_decay = s0->monotone;
  timings["find_s0"] = seconds_since(clock);

  const auto level = sample_level_set(v_evaluable(system), system.n, t, config.s0_samples, s0_seed,
                                      {diagonal_direction(system.n)});
  report.active_histogram = active_index_histogram(system, level);

  clock = Clock::now();
  SandwichCounts counts{config.samples, config.samples, config.samples};
  SandwichSeeds seeds{derive_seed(config.seed, 4), derive_seed(config.seed, 5), derive_seed(config.seed, 6)};
  report.certificate = build_sandwich(s0->map, domain, config.epsilon, counts, seeds);
  timings["sandwich"] = seconds_since(clock);
  report.timings = timings;

  PipelineResult result;
  result.domain = domain;
  result.pl = std::move(pl);
  result.system = system;
  result.map = s0->map;
  result.certificate = report.certificate;
  result.level_samples = level;
  if (!report.certificate.passed) {
    result.code = ExitCode::certificate;
    result.message = report.certificate.failure;
    result.error = Json{{"stage", stage_name(ExitCode::certificate)},
                        {"exit_code", static_cast<int>(ExitCode::certificate)},
                        {"message", report.certificate.failure}};
  }
  result.report = std::move(report);
  return result;
}

void write_artifacts(const PipelineResult& result, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  if (!result.report) {
    write_json_file(out_dir / "error.json", result.error);
    return;
  }
  Json report = report_to_json(*result.report);
  if (!result.error.is_null()) report["error"] = result.error;
  write_json_file(out_dir / "report.json", report);

  const ReinhardtDomain& domain = *result.domain;
  Json cert = certificate_to_json(*result.certificate);
  cert["domain"] = domain_to_json(domain);
  write_json_file(out_dir / "certificate.json", cert);
  write_json_file(out_dir / "map.json", map_to_json(*result.map));
  write_json_file(out_dir / "pl.json", rational_pl_to_json(*result.pl));

  std::ofstream csv(out_dir / "samples.csv");
  if (!csv) throw IoError("cannot write " + (out_dir / "samples.csv").string());
  write_samples_csv(csv, *result.level_samples, domain, *result.map);
}

}  // namespace lemnis
