#pragma once

#include "lemnis/combiner.hpp"
#include "lemnis/domain.hpp"
#include "lemnis/pl_approx.hpp"
#include "lemnis/verifier.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>

namespace lemnis {

using Json = nlohmann::ordered_json;

// Finite doubles become JSON numbers (shortest round-trip form); infinities
// and NaN become the strings "inf", "-inf", "nan".
Json double_to_json(double value);
double double_from_json(const Json& j);

// Formats -inf as the literal "-inf".
std::string format_double(double value);

Json domain_to_json(const ReinhardtDomain& domain);
// The returned domain is not validated.
ReinhardtDomain domain_from_json(const Json& j);

Json rational_pl_to_json(const RationalPL& pl);
RationalPL rational_pl_from_json(const Json& j);

Json monomial_system_to_json(const MonomialSystem& system);
MonomialSystem monomial_system_from_json(const Json& j);

// {"system": ..., "s": ...}
Json map_to_json(const HomogeneousMap& map);
HomogeneousMap map_from_json(const Json& j);

Json certificate_to_json(const SandwichCertificate& cert);
SandwichCertificate certificate_from_json(const Json& j);

Json error_stat_to_json(const ErrorStat& stat);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

// One row per point: re/im per coordinate, v, G, v_s, then log|g_k^(s)| per k.
void write_samples_csv(std::ostream& out, const SampleSet& samples, const ReinhardtDomain& domain,
                       const HomogeneousMap& map);

}  // namespace lemnis
