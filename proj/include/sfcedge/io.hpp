#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sfcedge/matching.hpp"
#include "sfcedge/scenario.hpp"

namespace sfcedge {

using Json = nlohmann::ordered_json;

// Parses JSON text; syntax errors become ParseError "<source>:<line>:<column>: <what>".
[[nodiscard]] Json parse_json(std::string_view text, const std::string& source = "<input>");
[[nodiscard]] Json load_json(const std::filesystem::path& path);
void save_json(const std::filesystem::path& path, const Json& value);

// Throws ParseError naming the first key of `object` outside `allowed`.
void reject_unknown_keys(const Json& object, std::initializer_list<std::string_view> allowed,
                         const std::string& context);

// Scenario file:
//   {"nodes": [{"capacity": [c,s,w], "available": [..]?, "arrival_mean": x,
//               "quota_min": n?, "quota_max": n?}],
//    "links": [{"from": a, "to": b, "capacity": x}],
//    "vnfs": [{"requirement": [c,s,w], "processing_time": n}],
//    "sfcs": [[vnf ids..]],
//    "channel": {"bandwidth": x, "tx_power": [..], "gain": [[..]], "noise_var": x},
//    "arrivals": {"packet_size_min", "packet_size_max", "timeout_slots", "service_rate"}?,
//    "horizon": n, "seed": n?}
// Ids are positions. Unknown keys are rejected.
[[nodiscard]] Scenario scenario_from_json(const Json& j);
[[nodiscard]] Json scenario_to_json(const Scenario& sc);

// [{"user_id", "origin_en", "sfc_id", "packet_size", "timeout", "arrival_slot"}]
[[nodiscard]] std::vector<ServiceRequest> requests_from_json(const Json& j);
[[nodiscard]] Json requests_to_json(const std::vector<ServiceRequest>& requests);

// Any subset of GenerationConfig's fields under the same names; resource
// vectors as [c,s,w].
[[nodiscard]] GenerationConfig generation_config_from_json(const Json& j);

// {"vnf_prefs": [[node ids..]], "en_prefs": [vnf ids..], "q_min": [..], "q_max": [..]}
struct MatchingInstance {
  PreferenceLists prefs;
  Quotas quotas;
};
[[nodiscard]] MatchingInstance matching_instance_from_json(const Json& j);
[[nodiscard]] Json matching_instance_to_json(const MatchingInstance& m);

}  // namespace sfcedge
