#pragma once

#include <string>

#include <json.hpp>

#include "fiberwalk/core.hpp"
#include "fiberwalk/lattice.hpp"
#include "fiberwalk/moves.hpp"

namespace fiberwalk::io {

using nlohmann::json;

json table_to_json(const Table& t);
Table table_from_json(const json& j);

/// Bounds are a bare array of k entries: null = unbounded, n = AtMost(n).
json bounds_to_json(const BoundsGrid& b);
BoundsGrid bounds_from_json(const json& j, Shape shape);

json design_to_json(const DesignMatrix& m);
DesignMatrix design_from_json(const json& j);

/// {"rows":I,"cols":J,"moves":[{"cells":[[i,j,delta],...]},...]}, 1-based.
/// General sets (rows == 0) use {"k":K,"moves":[{"cells":[[h,delta],...]}]}.
json moveset_to_json(const MoveSet& ms);
MoveSet moveset_from_json(const json& j);
json move_to_json(const Move& m, const MoveSet& context);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

}  // namespace fiberwalk::io
