#pragma once
// JSON interchange for modules: {schema, p, f, N, D, F, pi, omega?} with
// every coefficient in the canonical element text form. The loader rebuilds
// the Frobenius certificate by revalidating the stored multiplier.

#include <json.hpp>

#include "fgl/formal_group.hpp"

namespace fgl {

using ojson = nlohmann::ordered_json;

inline constexpr int descriptor_schema = 1;

ojson series_to_json(const Series& s);
Series series_from_json(const UnramifiedRing& ring, int cap, const ojson& j);

ojson series2_to_json(const Series2& s);
Series2 series2_from_json(const UnramifiedRing& ring, int cap, const ojson& j);

ojson module_to_json(const FormalModule& m);
FormalModule module_from_json(const ojson& j);

}  // namespace fgl
