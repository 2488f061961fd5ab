#pragma once

// JSON form of finite groupoids and bundles; the schema is described in
// docs/groupoid-json.md.

#include <nlohmann/json.hpp>

#include "nlg/groupoid.hpp"

namespace nlg::fin {

nlohmann::json to_json(const FiniteGroupoid& G);
nlohmann::json to_json(const FinitePGB& P);
/// Throws std::invalid_argument on malformed input (missing keys, indices out of range).
FiniteGroupoid groupoid_from_json(const nlohmann::json& j);
FinitePGB bundle_from_json(const nlohmann::json& j);

}  // namespace nlg::fin
