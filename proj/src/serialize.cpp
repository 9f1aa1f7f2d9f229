#include "lemnis/serialize.hpp"

#include "lemnis/error.hpp"
#include "lemnis/green.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace lemnis {

namespace {

template <class T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("field '") + key + "': " + e.what());
  }
}

const Json& child(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  return j.at(key);
}

Json rationals_to_json(const RationalVector& v) {
  Json a = Json::array();
  for (const auto& r : v) a.push_back(to_string(r));
  return a;
}

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw InputError("rational must be a \"p/q\" string");
}

RationalVector rationals_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("expected an array of rationals");
  RationalVector out;
  for (const auto& e : j) out.push_back(rational_from_json(e));
  return out;
}

Json complex_vector_to_json(const CVector& z) {
  Json a = Json::array();
  for (const auto& c : z) a.push_back(Json::array({double_to_json(c.real()), double_to_json(c.imag())}));
  return a;
}

CVector complex_vector_from_json(const Json& j) {
  CVector z;
  for (const auto& c : j) z.emplace_back(double_from_json(c.at(0)), double_from_json(c.at(1)));
  return z;
}

}  // namespace

Json double_to_json(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value < 0 ? "-inf" : "inf";
  return value;
}

double double_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw InputError("expected a number or \"inf\"/\"-inf\"/\"nan\"");
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value < 0 ? "-inf" : "inf";
  // Shortest text that reads back to the same double.
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

Json domain_to_json(const ReinhardtDomain& domain) {
  Json j;
  j["dim"] = domain.dim();
  if (domain.is_polyhedral()) {
    j["kind"] = "polyhedral";
    Json cs = Json::array();
    for (const auto& c : domain.constraints()) {
      Json e;
      e["alpha"] = rationals_to_json(c.alpha);
      if (c.log_bound) {
        e["bound"] = Json{{"log_bound", to_string(*c.log_bound)}};
      } else {
        e["bound"] = double_to_json(c.bound);
      }
      cs.push_back(std::move(e));
    }
    j["constraints"] = std::move(cs);
  } else {
    j["kind"] = "weighted_ball";
    j["p"] = double_to_json(domain.p());
    Json w = Json::array();
    for (double x : domain.weights()) w.push_back(double_to_json(x));
    j["weights"] = std::move(w);
  }
  return j;
}

ReinhardtDomain domain_from_json(const Json& j) {
  const auto kind = field<std::string>(j, "kind");
  if (kind == "polyhedral") {
    const auto dim = field<std::size_t>(j, "dim");
    std::vector<MonomialConstraint> cs;
    const auto& arr = child(j, "constraints");
    if (!arr.is_array()) throw InputError("'constraints' must be an array");
    for (const auto& e : arr) {
      MonomialConstraint c;
      c.alpha = rationals_from_json(child(e, "alpha"));
      const auto& b = child(e, "bound");
      if (b.is_object()) {
        c.log_bound = rational_from_json(child(b, "log_bound"));
        c.bound = std::exp(to_double(*c.log_bound));
      } else {
        c.bound = double_from_json(b);
      }
      cs.push_back(std::move(c));
    }
    return ReinhardtDomain::polyhedral(dim, std::move(cs));
  }
  if (kind == "weighted_ball") {
    std::vector<double> w;
    const auto& arr = child(j, "weights");
    if (!arr.is_array()) throw InputError("'weights' must be an array");
    for (const auto& e : arr) w.push_back(double_from_json(e));
    auto d = ReinhardtDomain::weighted_ball(double_from_json(child(j, "p")), std::move(w));
    if (j.contains("dim") && j.at("dim").get<std::size_t>() != d.dim()) {
      throw InputError("'dim' does not match the number of weights");
    }
    return d;
  }
  throw InputError("unknown domain kind '" + kind + "'");
}

Json rational_pl_to_json(const RationalPL& pl) {
  Json j;
  j["n"] = pl.n;
  j["r"] = to_string(pl.r);
  j["t"] = to_string(pl.t);
  j["gp_certified"] = pl.gp_certified;
  Json pieces = Json::array();
  for (const auto& p : pl.pieces) {
    pieces.push_back(Json{{"a", rationals_to_json(p.a_tilde)}, {"b", to_string(p.b_tilde)}});
  }
  j["pieces"] = std::move(pieces);
  j["max_b_rounding"] = double_to_json(pl.max_b_rounding);
  j["perturbation_norm"] = double_to_json(pl.perturbation_norm);
  j["attempts"] = pl.attempts;
  j["used_r_fallback"] = pl.used_r_fallback;
  return j;
}

RationalPL rational_pl_from_json(const Json& j) {
  RationalPL pl;
  pl.n = field<std::size_t>(j, "n");
  pl.r = rational_from_json(child(j, "r"));
  pl.t = rational_from_json(child(j, "t"));
  pl.gp_certified = field<bool>(j, "gp_certified");
  for (const auto& p : child(j, "pieces")) {
    RationalPiece rp;
    rp.a_tilde = rationals_from_json(child(p, "a"));
    rp.b_tilde = rational_from_json(child(p, "b"));
    if (rp.a_tilde.size() != pl.n) throw InputError("piece has wrong dimension");
    pl.pieces.push_back(std::move(rp));
  }
  pl.max_b_rounding = double_from_json(child(j, "max_b_rounding"));
  pl.perturbation_norm = double_from_json(child(j, "perturbation_norm"));
  pl.attempts = field<std::size_t>(j, "attempts");
  pl.used_r_fallback = field<bool>(j, "used_r_fallback");
  return pl;
}

Json monomial_system_to_json(const MonomialSystem& system) {
  Json j;
  j["n"] = system.n;
  j["N"] = system.N;
  j["r"] = to_string(system.r);
  j["q"] = system.q;
  Json monos = Json::array();
  for (const auto& m : system.monomials) {
    monos.push_back(Json{{"k", m.k_vec}, {"log_coef", to_string(m.log_coef)}});
  }
  j["monomials"] = std::move(monos);
  return j;
}

MonomialSystem monomial_system_from_json(const Json& j) {
  MonomialSystem sys;
  sys.n = field<std::size_t>(j, "n");
  sys.N = field<std::int64_t>(j, "N");
  sys.r = rational_from_json(child(j, "r"));
  sys.q = field<std::int64_t>(j, "q");
  for (const auto& m : child(j, "monomials")) {
    Monomial mono;
    mono.k_vec = field<std::vector<std::int64_t>>(m, "k");
    mono.log_coef = rational_from_json(child(m, "log_coef"));
    if (mono.k_vec.size() != sys.n) throw InputError("monomial has wrong dimension");
    sys.monomials.push_back(std::move(mono));
  }
  if (sys.r * Rational(static_cast<long>(sys.N)) != Rational(static_cast<long>(sys.q))) {
    throw InputError("monomial system violates q = r N");
  }
  return sys;
}

Json map_to_json(const HomogeneousMap& map) {
  return Json{{"system", monomial_system_to_json(map.system())}, {"s", map.s()}, {"q_s", map.q_s()}};
}

HomogeneousMap map_from_json(const Json& j) {
  HomogeneousMap map = build_map(monomial_system_from_json(child(j, "system")), field<std::int64_t>(j, "s"));
  if (j.contains("q_s") && j.at("q_s").get<std::int64_t>() != map.q_s()) {
    throw InputError("stored q_s does not equal q s n!");
  }
  return map;
}

Json certificate_to_json(const SandwichCertificate& cert) {
  Json j;
  j["epsilon"] = double_to_json(cert.epsilon);
  j["delta"] = double_to_json(cert.delta);
  j["s"] = cert.s;
  j["q_s"] = cert.q_s;
  j["scale_log"] = double_to_json(cert.scale_log);
  j["inner_margin"] = double_to_json(cert.inner_margin);
  j["outer_margin"] = double_to_json(cert.outer_margin);
  j["zero_locus_margin"] = double_to_json(cert.zero_locus_margin);
  j["counts"] = Json{{"boundary", cert.counts.boundary}, {"dilated", cert.counts.dilated}, {"sphere", cert.counts.sphere}};
  j["seeds"] = Json{{"boundary", cert.seeds.boundary}, {"dilated", cert.seeds.dilated}, {"sphere", cert.seeds.sphere}};
  j["include_diagonal"] = cert.include_diagonal;
  j["passed"] = cert.passed;
  j["failure"] = cert.failure;
  j["counterexample"] = cert.counterexample ? complex_vector_to_json(*cert.counterexample) : Json(nullptr);
  return j;
}

SandwichCertificate certificate_from_json(const Json& j) {
  SandwichCertificate c;
  c.epsilon = double_from_json(child(j, "epsilon"));
  c.delta = double_from_json(child(j, "delta"));
  c.s = field<std::int64_t>(j, "s");
  c.q_s = field<std::int64_t>(j, "q_s");
  c.scale_log = double_from_json(child(j, "scale_log"));
  c.inner_margin = double_from_json(child(j, "inner_margin"));
  c.outer_margin = double_from_json(child(j, "outer_margin"));
  c.zero_locus_margin = double_from_json(child(j, "zero_locus_margin"));
  const auto& counts = child(j, "counts");
  c.counts = {field<std::size_t>(counts, "boundary"), field<std::size_t>(counts, "dilated"),
              field<std::size_t>(counts, "sphere")};
  const auto& seeds = child(j, "seeds");
  c.seeds = {field<std::uint64_t>(seeds, "boundary"), field<std::uint64_t>(seeds, "dilated"),
             field<std::uint64_t>(seeds, "sphere")};
  c.include_diagonal = field<bool>(j, "include_diagonal");
  c.passed = field<bool>(j, "passed");
  c.failure = field<std::string>(j, "failure");
  if (j.contains("counterexample") && !j.at("counterexample").is_null()) {
    c.counterexample = complex_vector_from_json(j.at("counterexample"));
  }
  return c;
}

Json error_stat_to_json(const ErrorStat& stat) {
  return Json{{"sup_error", double_to_json(stat.sup_error)},
              {"mean_error", double_to_json(stat.mean_error)},
              {"count", stat.count},
              {"argmax_point", complex_vector_to_json(stat.argmax_point)}};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void write_samples_csv(std::ostream& out, const SampleSet& samples, const ReinhardtDomain& domain,
                       const HomogeneousMap& map) {
  const std::size_t n = map.n();
  for (std::size_t k = 0; k < n; ++k) out << "re" << k + 1 << ",im" << k + 1 << ',';
  out << "v,G,v_s";
  for (std::size_t k = 0; k < n; ++k) out << ",log_g" << k + 1;
  out << '\n';
  for (const auto& z : samples.points) {
    for (const auto& c : z) out << format_double(c.real()) << ',' << format_double(c.imag()) << ',';
    out << format_double(eval_v(map.system(), z).value) << ',' << format_double(green(domain, z)) << ','
        << format_double(eval_vs(map, z));
    for (const auto& c : eval_components(map, z)) out << ',' << format_double(c.log_modulus);
    out << '\n';
  }
}

}  // namespace lemnis
