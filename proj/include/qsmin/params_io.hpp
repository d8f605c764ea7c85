#pragma once

// JSON form of the defining sequences:
//
//   { "branching": [2, 2, 3] | {"rule": "constant", "params": {"value": 2}},
//     "ratio":     ["1/3", ...] | {"rule": "dim_one", "params": {"exponent": 2}},
//     "gaps":      [["0", "1/3", "0"], ...] | {"rule": "uniform"},
//     "gap_kind":  "relative" | "absolute",      (optional, default relative)
//     "tail":      "finite" | "periodic" }        (optional, applies to arrays)
//
// Rationals are always strings "p/q"; JSON numbers are rejected for ratios
// and gaps so no value is silently rounded.

#include "json.hpp"
#include "qsmin/construction.hpp"

namespace qsmin {

RawParams raw_params_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const RawParams& raw);

// Explicit per-level listing (relative gaps) of levels 1..depth.
nlohmann::json levels_to_json(const ParamSpec& params, int depth);

}  // namespace qsmin
