#pragma once

#include <json.hpp>

#include "etk/quantum.hpp"

namespace etk {

using Json = nlohmann::json;

// {"rows": r, "cols": c, "data": [[re, im], ...]} row-major.
Json matrix_to_json(const Mat& m);
Mat matrix_from_json(const Json& j);

Json state_to_json(const BipartiteState& s);
BipartiteState state_from_json(const Json& j,
                               const Tolerances& tols = default_tols());

Json channel_to_json(const ChannelRep& ch);
ChannelRep channel_from_json(const Json& j,
                             const Tolerances& tols = default_tols());

Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);

}  // namespace etk
