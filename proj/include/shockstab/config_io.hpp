#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "shockstab/certify.hpp"
#include "shockstab/sim.hpp"

namespace shockstab {

using json = nlohmann::ordered_json;

/// Throws UsageError naming the first key of `obj` not in `allowed`.
void reject_unknown(const json& obj, const std::vector<std::string>& allowed, const std::string& where);

/// Model descriptor:
///   {"kind": "scalar_cubic" | "elastodynamics", "m": 1,
///    "box": [[lo, hi], ...], "entropy": "canonical" |
///    {"kind": "piecewise", "slope": d, "anchor": uR}, "reflected": false}
Model model_from_json(const json& j);
json model_to_json(const Model& m);

State state_from_json(const json& j, int dim, const std::string& what);
json state_to_json(const State& u);
Box box_from_json(const json& j, int dim);
json box_to_json(const Box& b);
EntropySpec entropy_from_json(const json& j);
json entropy_to_json(const EntropySpec& e);

CertifySearchSpec search_from_json(const json& j);
json search_to_json(const CertifySearchSpec& s);
ConstantsGridSpec constants_grid_from_json(const json& j);
json constants_grid_to_json(const ConstantsGridSpec& g);

json to_json(const EpsilonResult& e);
json to_json(const ScanRecord& r);
json to_json(const CertificationReport& r);
json to_json(const ConstantsReport& r);
json to_json(const ScalarEntropyBuild& b);
json to_json(const FieldClassificationReport& r);
json to_json(const CriticalParams& c);

/// Summary of a simulation (scalars only; the time series goes to CSV).
json summary_to_json(const SimReport& r);

}  // namespace shockstab
