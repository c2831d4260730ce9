#include "sfcedge/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "sfcedge/error.hpp"

namespace sfcedge {

Json parse_json(std::string_view text, const std::string& source) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t at = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(at), '\n');
    const auto last_nl = text.rfind('\n', at == 0 ? 0 : at - 1);
    const std::size_t col = last_nl == std::string_view::npos || at == 0 ? at + 1 : at - last_nl;
    std::string what = e.what();
    if (const auto p = what.find("syntax error"); p != std::string::npos) what = what.substr(p);
    throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + what);
  }
}

Json load_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str(), path.string());
}

void save_json(const std::filesystem::path& path, const Json& value) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path.string() + ": cannot write");
  out << value.dump(2) << '\n';
}

void reject_unknown_keys(const Json& object, std::initializer_list<std::string_view> allowed,
                         const std::string& context) {
  if (!object.is_object()) throw ParseError(context + ": expected an object");
  for (const auto& [key, _] : object.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ParseError(context + ": unknown key \"" + key + "\"");
}

namespace {

// Wraps type errors with the path being read.
template <typename T>
T get(const Json& j, const std::string& key, const std::string& context) {
  if (!j.contains(key)) throw ParseError(context + ": missing key \"" + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(context + "." + key + ": " + e.what());
  }
}

template <typename T>
T get_or(const Json& j, const std::string& key, T fallback, const std::string& context) {
  return j.contains(key) ? get<T>(j, key, context) : fallback;
}

ResourceVector vec3(const Json& j, const std::string& context) {
  if (!j.is_array() || j.size() != 3) throw ParseError(context + ": expected [compute, storage, transmit]");
  try {
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(context + ": " + e.what());
  }
}

Json vec3(const ResourceVector& r) { return Json::array({r.compute, r.storage, r.transmit}); }

const Json& array_at(const Json& j, const std::string& key, const std::string& context) {
  if (!j.contains(key) || !j.at(key).is_array()) throw ParseError(context + ": \"" + key + "\" must be an array");
  return j.at(key);
}

}  // namespace

Scenario scenario_from_json(const Json& j) {
  const std::string ctx = "scenario";
  reject_unknown_keys(j, {"nodes", "links", "vnfs", "sfcs", "channel", "arrivals", "horizon", "seed"}, ctx);
  Scenario sc;
  int i = 0;
  for (const auto& jn : array_at(j, "nodes", ctx)) {
    const std::string c = ctx + ".nodes[" + std::to_string(i) + "]";
    reject_unknown_keys(jn, {"capacity", "available", "arrival_mean", "quota_min", "quota_max"}, c);
    EdgeNode n;
    n.id = i++;
    n.capacity = vec3(jn.contains("capacity") ? jn.at("capacity") : Json(), c + ".capacity");
    n.available = jn.contains("available") ? vec3(jn.at("available"), c + ".available") : n.capacity;
    n.arrival_mean = get_or<double>(jn, "arrival_mean", 0.0, c);
    n.quota_min = get_or<int>(jn, "quota_min", 0, c);
    n.quota_max = get_or<int>(jn, "quota_max", 1 << 30, c);
    sc.nodes.push_back(n);
  }
  i = 0;
  if (j.contains("links"))
    for (const auto& jl : array_at(j, "links", ctx)) {
      const std::string c = ctx + ".links[" + std::to_string(i++) + "]";
      reject_unknown_keys(jl, {"from", "to", "capacity"}, c);
      sc.links.push_back({get<int>(jl, "from", c), get<int>(jl, "to", c), get<double>(jl, "capacity", c)});
    }
  i = 0;
  for (const auto& jv : array_at(j, "vnfs", ctx)) {
    const std::string c = ctx + ".vnfs[" + std::to_string(i) + "]";
    reject_unknown_keys(jv, {"requirement", "processing_time"}, c);
    VnfSpec v;
    v.id = i++;
    v.requirement = vec3(jv.contains("requirement") ? jv.at("requirement") : Json(), c + ".requirement");
    v.processing_time = get_or<int>(jv, "processing_time", 1, c);
    sc.vnfs.push_back(v);
  }
  i = 0;
  for (const auto& js : array_at(j, "sfcs", ctx)) {
    const std::string c = ctx + ".sfcs[" + std::to_string(i) + "]";
    try {
      sc.sfcs.push_back(Sfc::from_chain(i++, js.get<std::vector<int>>()));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(c + ": " + e.what());
    }
  }
  const int n = sc.node_count();
  if (j.contains("channel")) {
    const auto& jc = j.at("channel");
    const std::string c = ctx + ".channel";
    reject_unknown_keys(jc, {"bandwidth", "tx_power", "gain", "noise_var"}, c);
    sc.channel.bandwidth = get<double>(jc, "bandwidth", c);
    sc.channel.tx_power = get<std::vector<double>>(jc, "tx_power", c);
    sc.channel.gain = get<std::vector<std::vector<double>>>(jc, "gain", c);
    sc.channel.noise_var = get<double>(jc, "noise_var", c);
  } else {
    // Without a channel model links are limited by their packet capacity only.
    sc.channel.bandwidth = 1e12;
    sc.channel.tx_power.assign(n, 1.0);
    sc.channel.gain.assign(n, std::vector<double>(n, 0.0));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (a != b) sc.channel.gain[a][b] = 1.0;
    sc.channel.noise_var = 1.0;
  }
  if (j.contains("arrivals")) {
    const auto& ja = j.at("arrivals");
    const std::string c = ctx + ".arrivals";
    reject_unknown_keys(ja, {"packet_size_min", "packet_size_max", "timeout_slots", "service_rate"}, c);
    sc.arrivals.packet_size_min = get_or<double>(ja, "packet_size_min", sc.arrivals.packet_size_min, c);
    sc.arrivals.packet_size_max = get_or<double>(ja, "packet_size_max", sc.arrivals.packet_size_max, c);
    sc.arrivals.timeout_slots = get_or<int>(ja, "timeout_slots", sc.arrivals.timeout_slots, c);
    sc.arrivals.service_rate = get_or<double>(ja, "service_rate", 0.0, c);
  }
  sc.horizon = get_or<int>(j, "horizon", 1, ctx);
  sc.seed = get_or<std::uint64_t>(j, "seed", 0, ctx);
  return sc;
}

Json scenario_to_json(const Scenario& sc) {
  Json j;
  Json nodes = Json::array();
  for (const auto& n : sc.nodes) {
    Json jn;
    jn["capacity"] = vec3(n.capacity);
    if (!(n.available == n.capacity)) jn["available"] = vec3(n.available);
    jn["arrival_mean"] = n.arrival_mean;
    jn["quota_min"] = n.quota_min;
    jn["quota_max"] = n.quota_max;
    nodes.push_back(jn);
  }
  j["nodes"] = nodes;
  Json links = Json::array();
  for (const auto& l : sc.links) links.push_back({{"from", l.from}, {"to", l.to}, {"capacity", l.capacity}});
  j["links"] = links;
  Json vnfs = Json::array();
  for (const auto& v : sc.vnfs) vnfs.push_back({{"requirement", vec3(v.requirement)}, {"processing_time", v.processing_time}});
  j["vnfs"] = vnfs;
  Json sfcs = Json::array();
  for (const auto& s : sc.sfcs) sfcs.push_back(s.chain);
  j["sfcs"] = sfcs;
  j["channel"] = {{"bandwidth", sc.channel.bandwidth},
                  {"tx_power", sc.channel.tx_power},
                  {"gain", sc.channel.gain},
                  {"noise_var", sc.channel.noise_var}};
  j["arrivals"] = {{"packet_size_min", sc.arrivals.packet_size_min},
                   {"packet_size_max", sc.arrivals.packet_size_max},
                   {"timeout_slots", sc.arrivals.timeout_slots},
                   {"service_rate", sc.arrivals.service_rate}};
  j["horizon"] = sc.horizon;
  j["seed"] = sc.seed;
  return j;
}

std::vector<ServiceRequest> requests_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("requests: expected an array");
  std::vector<ServiceRequest> out;
  int i = 0;
  for (const auto& jr : j) {
    const std::string c = "requests[" + std::to_string(i++) + "]";
    reject_unknown_keys(jr, {"user_id", "origin_en", "sfc_id", "packet_size", "timeout", "arrival_slot"}, c);
    ServiceRequest r;
    r.user_id = get_or<int>(jr, "user_id", i - 1, c);
    r.origin_en = get<int>(jr, "origin_en", c);
    r.sfc_id = get<int>(jr, "sfc_id", c);
    r.packet_size = get<double>(jr, "packet_size", c);
    r.arrival_slot = get_or<int>(jr, "arrival_slot", 0, c);
    r.timeout = get<int>(jr, "timeout", c);
    out.push_back(r);
  }
  return out;
}

Json requests_to_json(const std::vector<ServiceRequest>& requests) {
  Json j = Json::array();
  for (const auto& r : requests)
    j.push_back({{"user_id", r.user_id},
                 {"origin_en", r.origin_en},
                 {"sfc_id", r.sfc_id},
                 {"packet_size", r.packet_size},
                 {"timeout", r.timeout},
                 {"arrival_slot", r.arrival_slot}});
  return j;
}

GenerationConfig generation_config_from_json(const Json& j) {
  const std::string c = "generation";
  reject_unknown_keys(j,
                      {"n_ens_min", "n_ens_max", "vnfs_per_en_min", "vnfs_per_en_max", "n_sfcs", "chain_len_min",
                       "chain_len_max", "packet_size_min", "packet_size_max", "arrival_mean_min", "arrival_mean_max",
                       "requirement_min", "requirement_max", "headroom_min", "headroom_max", "processing_time_min",
                       "processing_time_max", "link_capacity_min", "link_capacity_max", "extra_link_probability",
                       "bandwidth", "noise_var", "horizon", "timeout_slots", "quota_min", "quota_max"},
                      c);
  GenerationConfig g;
  g.n_ens_min = get_or(j, "n_ens_min", g.n_ens_min, c);
  g.n_ens_max = get_or(j, "n_ens_max", g.n_ens_max, c);
  g.vnfs_per_en_min = get_or(j, "vnfs_per_en_min", g.vnfs_per_en_min, c);
  g.vnfs_per_en_max = get_or(j, "vnfs_per_en_max", g.vnfs_per_en_max, c);
  g.n_sfcs = get_or(j, "n_sfcs", g.n_sfcs, c);
  g.chain_len_min = get_or(j, "chain_len_min", g.chain_len_min, c);
  g.chain_len_max = get_or(j, "chain_len_max", g.chain_len_max, c);
  g.packet_size_min = get_or(j, "packet_size_min", g.packet_size_min, c);
  g.packet_size_max = get_or(j, "packet_size_max", g.packet_size_max, c);
  g.arrival_mean_min = get_or(j, "arrival_mean_min", g.arrival_mean_min, c);
  g.arrival_mean_max = get_or(j, "arrival_mean_max", g.arrival_mean_max, c);
  if (j.contains("requirement_min")) g.requirement_min = vec3(j.at("requirement_min"), c + ".requirement_min");
  if (j.contains("requirement_max")) g.requirement_max = vec3(j.at("requirement_max"), c + ".requirement_max");
  g.headroom_min = get_or(j, "headroom_min", g.headroom_min, c);
  g.headroom_max = get_or(j, "headroom_max", g.headroom_max, c);
  g.processing_time_min = get_or(j, "processing_time_min", g.processing_time_min, c);
  g.processing_time_max = get_or(j, "processing_time_max", g.processing_time_max, c);
  g.link_capacity_min = get_or(j, "link_capacity_min", g.link_capacity_min, c);
  g.link_capacity_max = get_or(j, "link_capacity_max", g.link_capacity_max, c);
  g.extra_link_probability = get_or(j, "extra_link_probability", g.extra_link_probability, c);
  g.bandwidth = get_or(j, "bandwidth", g.bandwidth, c);
  g.noise_var = get_or(j, "noise_var", g.noise_var, c);
  g.horizon = get_or(j, "horizon", g.horizon, c);
  g.timeout_slots = get_or(j, "timeout_slots", g.timeout_slots, c);
  if (j.contains("quota_min")) g.quota_min = get<int>(j, "quota_min", c);
  if (j.contains("quota_max")) g.quota_max = get<int>(j, "quota_max", c);
  return g;
}

MatchingInstance matching_instance_from_json(const Json& j) {
  const std::string c = "matching";
  reject_unknown_keys(j, {"vnf_prefs", "en_prefs", "q_min", "q_max"}, c);
  MatchingInstance m;
  m.prefs.vnf_prefs = get<std::vector<std::vector<int>>>(j, "vnf_prefs", c);
  m.quotas.q_min = get<std::vector<int>>(j, "q_min", c);
  m.quotas.q_max = get<std::vector<int>>(j, "q_max", c);
  m.prefs.en_count = static_cast<int>(m.quotas.q_max.size());
  if (j.contains("en_prefs")) {
    m.prefs.en_prefs = get<std::vector<int>>(j, "en_prefs", c);
  } else {
    m.prefs.en_prefs.resize(m.prefs.vnf_prefs.size());
    for (std::size_t k = 0; k < m.prefs.en_prefs.size(); ++k) m.prefs.en_prefs[k] = static_cast<int>(k);
  }
  try {
    m.prefs.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(c + ": " + e.what());
  }
  if (m.quotas.q_min.size() != m.quotas.q_max.size()) throw ParseError(c + ": q_min and q_max differ in length");
  return m;
}

Json matching_instance_to_json(const MatchingInstance& m) {
  return {{"vnf_prefs", m.prefs.vnf_prefs},
          {"en_prefs", m.prefs.en_prefs},
          {"q_min", m.quotas.q_min},
          {"q_max", m.quotas.q_max}};
}

}  // namespace sfcedge
