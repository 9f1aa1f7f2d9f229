// lemnis: validate Reinhardt domains, evaluate Green functions and their
// polynomial approximants, build and re-verify lemniscate certificates.

#include "lemnis/error.hpp"
#include "lemnis/pipeline.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace lemnis;

namespace {

int code(ExitCode c) { return static_cast<int>(c); }

void print_error(ExitCode c, const std::string& message, const Json& details = Json::object()) {
  Json j{{"stage", stage_name(c)}, {"exit_code", code(c)}, {"message", message}, {"details", details}};
  std::cerr << j.dump() << '\n';
}

ReinhardtDomain load_domain(const std::string& path) { return domain_from_json(read_json_file(path)); }

// One point per line: n reals, or 2n numbers read as (re, im) pairs.
// Separators are commas and/or whitespace; '#' starts a comment.
CVector parse_point(const std::string& line, std::size_t n, const std::string& where) {
  std::string text = line.substr(0, line.find('#'));
  for (auto& ch : text) {
    if (ch == ',') ch = ' ';
  }
  std::istringstream in(text);
  std::vector<double> values;
  std::string token;
  while (in >> token) {
    try {
      std::size_t used = 0;
      double v;
      if (token == "-inf" || token == "inf") {
        throw InputError("infinite coordinate");
      }
      v = std::stod(token, &used);
      if (used != token.size()) throw InputError("trailing characters");
      values.push_back(v);
    } catch (const std::exception&) {
      throw InputError(where + ": cannot parse '" + token + "'");
    }
  }
  CVector z;
  if (values.size() == n) {
    for (double v : values) z.emplace_back(v, 0.0);
  } else if (values.size() == 2 * n) {
    for (std::size_t k = 0; k < n; ++k) z.emplace_back(values[2 * k], values[2 * k + 1]);
  } else {
    throw InputError(where + ": expected " + std::to_string(n) + " or " + std::to_string(2 * n) +
                     " numbers, got " + std::to_string(values.size()));
  }
  return z;
}

int cmd_validate(const std::string& domain_path) {
  ReinhardtDomain domain = load_domain(domain_path);
  auto report = validate(domain);
  Json out{{"ok", report.ok}, {"summary", domain.summary()}};
  Json failures = Json::array();
  for (const auto& f : report.failures) {
    Json w = Json::array();
    for (double x : f.witness) w.push_back(double_to_json(x));
    failures.push_back(Json{{"code", f.code}, {"message", f.message}, {"witness", w}});
  }
  out["failures"] = failures;
  std::cout << out.dump(2) << '\n';
  return report.ok ? code(ExitCode::ok) : code(ExitCode::validation);
}

int cmd_eval(const std::string& domain_path, const std::string& map_path, const std::vector<std::string>& inline_points,
             const std::string& points_path) {
  ReinhardtDomain domain = load_domain(domain_path);
  auto report = validate(domain);
  if (!report.ok) {
    print_error(ExitCode::validation, report.failures.front().message);
    return code(ExitCode::validation);
  }
  std::optional<HomogeneousMap> map;
  if (!map_path.empty()) map = map_from_json(read_json_file(map_path));
  if (map && map->n() != domain.dim()) throw InputError("map dimension does not match the domain");

  const std::size_t n = domain.dim();
  std::vector<CVector> points;
  for (std::size_t i = 0; i < inline_points.size(); ++i) {
    points.push_back(parse_point(inline_points[i], n, "--point " + std::to_string(i + 1)));
  }
  if (!points_path.empty()) {
    std::ifstream in(points_path);
    if (!in) throw IoError("cannot open " + points_path);
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
      if (line.find_first_not_of(" \t\r") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') {
        continue;
      }
      points.push_back(parse_point(line, n, points_path + ":" + std::to_string(lineno)));
    }
  }

  for (std::size_t k = 0; k < n; ++k) std::cout << "re" << k + 1 << ",im" << k + 1 << ',';
  std::cout << "G";
  if (map) {
    std::cout << ",v,v_s";
    for (std::size_t k = 0; k < n; ++k) std::cout << ",log_g" << k + 1;
  }
  std::cout << '\n';
  for (const auto& z : points) {
    for (const auto& c : z) std::cout << format_double(c.real()) << ',' << format_double(c.imag()) << ',';
    std::cout << format_double(green(domain, z));
    if (map) {
      std::cout << ',' << format_double(eval_v(map->system(), z).value) << ',' << format_double(eval_vs(*map, z));
      for (const auto& c : eval_components(*map, z)) std::cout << ',' << format_double(c.log_modulus);
    }
    std::cout << '\n';
  }
  return code(ExitCode::ok);
}

int cmd_approximate(const std::string& domain_path, const RunConfig& config, const std::string& out_dir) {
  ReinhardtDomain domain = load_domain(domain_path);
  auto result = run_pipeline(domain, config);
  if (!out_dir.empty()) {
    if (result.report) {
      write_artifacts(result, out_dir);
    } else {
      std::filesystem::create_directories(out_dir);
      write_json_file(std::filesystem::path(out_dir) / "error.json", result.error);
    }
  }
  if (result.report) {
    const auto& r = *result.report;
    std::cout << "domain        " << r.domain_summary << '\n'
              << "epsilon       " << r.epsilon << "  (delta " << r.delta << ")\n"
              << "pieces        " << r.piece_source << "  m=" << r.m << " q=" << r.q << " N=" << r.N
              << " r=" << to_string(r.r) << '\n'
              << "s             " << r.s << "  q_s=" << r.certificate.q_s << '\n'
              << "inner margin  " << format_double(r.certificate.inner_margin) << '\n'
              << "outer margin  " << format_double(r.certificate.outer_margin) << '\n'
              << "zero margin   " << format_double(r.certificate.zero_locus_margin) << '\n'
              << "certificate   " << (r.certificate.passed ? "PASS" : "FAIL") << '\n';
  }
  if (!result.ok()) std::cerr << result.error.dump() << '\n';
  return code(result.code);
}

int cmd_verify(const std::string& cert_path, const std::string& map_path, const std::string& domain_path,
               std::optional<std::uint64_t> seed, std::optional<std::size_t> samples) {
  Json cert_json;
  Json map_json;
  try {
    cert_json = read_json_file(cert_path);
    map_json = read_json_file(map_path);
  } catch (const IoError& e) {
    print_error(ExitCode::io, e.what());
    return code(ExitCode::io);
  }
  SandwichCertificate cert = certificate_from_json(cert_json);
  HomogeneousMap map = map_from_json(map_json);
  if (samples) cert.counts = {*samples, *samples, *samples};
  ReinhardtDomain domain = [&] {
    if (!domain_path.empty()) return load_domain(domain_path);
    if (!cert_json.contains("domain")) throw InputError("certificate has no domain; pass --domain");
    return domain_from_json(cert_json.at("domain"));
  }();
  domain = require_valid(domain);

  const std::uint64_t base = seed.value_or(cert.seeds.boundary + 1);
  SandwichSeeds seeds{derive_seed(base, 10), derive_seed(base, 11), derive_seed(base, 12)};
  auto check = recheck_certificate(cert, map, domain, seeds);
  Json out{{"confirmed", check.confirmed}, {"reason", check.reason}};
  if (check.recomputed.s != 0) out["recomputed"] = certificate_to_json(check.recomputed);
  std::cout << out.dump(2) << '\n';
  return check.confirmed ? code(ExitCode::ok) : code(ExitCode::refuted);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Homogeneous polynomial lemniscates for Reinhardt domains"};
  app.require_subcommand(1);

  std::string domain_path, map_path, points_path, out_dir, cert_path;
  std::vector<std::string> inline_points;
  RunConfig config;
  std::string t_text = "-1";
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> verify_seed;
  std::optional<std::size_t> verify_samples;

  auto* validate_cmd = app.add_subcommand("validate", "Check a domain file");
  validate_cmd->add_option("--domain", domain_path, "Domain JSON file")->required();

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate G, v, v_s and components at points");
  eval_cmd->add_option("--domain", domain_path, "Domain JSON file")->required();
  eval_cmd->add_option("--map", map_path, "map.json from an approximate run");
  eval_cmd->add_option("--point", inline_points, "Point as 'x1,x2,...' or 're1,im1,re2,im2,...'");
  eval_cmd->add_option("--points", points_path, "File with one point per line");

  auto* approx_cmd = app.add_subcommand("approximate", "Run the full approximation pipeline");
  approx_cmd->add_option("--domain", domain_path, "Domain JSON file")->required();
  approx_cmd->add_option("--epsilon", config.epsilon, "Dilation epsilon of the sandwich")->required();
  approx_cmd->add_option("--t", t_text, "Certification level (rational)")->capture_default_str();
  approx_cmd->add_option("--grid", config.grid, "Initial simplex grid resolution")->capture_default_str();
  approx_cmd->add_option("--denom-bound", config.denom_bound, "Denominator bound for rounding")->capture_default_str();
  approx_cmd->add_option("--s-cap", config.s_cap, "Largest power s to try")->capture_default_str();
  approx_cmd->add_option("--samples", config.samples, "Samples per certificate check")->capture_default_str();
  approx_cmd->add_option("--seed", seed, "Random seed")->required();
  approx_cmd->add_option("--out", out_dir, "Output directory");

  auto* verify_cmd = app.add_subcommand("verify", "Re-check a certificate with fresh samples");
  verify_cmd->add_option("--certificate", cert_path, "certificate.json")->required();
  verify_cmd->add_option("--map", map_path, "map.json")->required();
  verify_cmd->add_option("--domain", domain_path, "Domain file (defaults to the one in the certificate)");
  verify_cmd->add_option("--seed", verify_seed, "Seed for the fresh samples");
  verify_cmd->add_option("--samples", verify_samples, "Override sample counts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : code(ExitCode::usage);
  }

  try {
    if (*validate_cmd) return cmd_validate(domain_path);
    if (*eval_cmd) return cmd_eval(domain_path, map_path, inline_points, points_path);
    if (*approx_cmd) {
      config.t = parse_rational(t_text);
      config.seed = seed;
      if (config.grid < 1 || config.denom_bound < 1 || config.s_cap < 1 || config.samples < 1) {
        throw InputError("numeric options must be positive");
      }
      return cmd_approximate(domain_path, config, out_dir);
    }
    if (*verify_cmd) return cmd_verify(cert_path, map_path, domain_path, verify_seed, verify_samples);
  } catch (const InputError& e) {
    print_error(ExitCode::input, e.what());
    return code(ExitCode::input);
  } catch (const IoError& e) {
    print_error(ExitCode::io, e.what());
    return code(ExitCode::io);
  } catch (const std::filesystem::filesystem_error& e) {
    print_error(ExitCode::io, e.what());
    return code(ExitCode::io);
  } catch (const ComputationError& e) {
    print_error(ExitCode::convergence, e.what());
    return code(ExitCode::convergence);
  }
  return code(ExitCode::usage);
}
