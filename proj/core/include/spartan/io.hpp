#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "spartan/model.hpp"
#include "spartan/simulate.hpp"
#include "spartan/smoothness.hpp"
#include "spartan/spectral.hpp"

namespace spartan::io {

/// Schema version written into every JSON document and binary header.
inline constexpr int format_version = 1;

/// Scientific notation with 9 significant digits ("%.8e"); NaN and
/// infinities render as "nan", "inf", "-inf".
std::string format_number(double v);

nlohmann::json params_to_json(const ModelParams& p);
/// Accepts {"eta0", "eta1", "xi", "kc"} with kc a number or "inf"; eta0 and
/// xi default to 1, kc to "inf". Throws InvalidArgument on malformed input.
ModelParams params_from_json(const nlohmann::json& j);

nlohmann::json permissibility_to_json(const PermissibilityReport& r);
nlohmann::json constants_to_json(const DerivedConstants& c);
nlohmann::json profile_to_json(const CovarianceProfile& p);
nlohmann::json smoothness_to_json(const SmoothnessReport& r);
nlohmann::json stats_to_json(const EmpiricalStats& s);

/// CSV with header "r,value,method".
void write_profile_csv(std::ostream& out, const CovarianceProfile& p);

/// CSV with header "s,value".
void write_realization_csv(std::ostream& out, const FieldRealization& f);

/// Binary layout (little-endian): "FGCR", uint32 version, uint64 seed,
/// uint64 n_modes, float64 start, float64 step, uint64 count, count float64.
void write_realization_binary(std::ostream& out, const FieldRealization& f);
FieldRealization read_realization_binary(std::istream& in);

}  // namespace spartan::io
