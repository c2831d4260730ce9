#include "sfcedge/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <sstream>

#include "sfcedge/error.hpp"

namespace sfcedge {

Sfc Sfc::from_chain(int id, std::vector<int> chain) {
  Sfc s;
  s.id = id;
  s.chain = std::move(chain);
  if (!s.chain.empty()) {
    s.source = s.chain.front();
    s.destination = s.chain.back();
  }
  for (std::size_t k = 0; k + 1 < s.chain.size(); ++k) s.virtual_links.push_back(static_cast<int>(k));
  return s;
}

double Scenario::queue_service_rate() const {
  if (arrivals.service_rate > 0.0) return arrivals.service_rate;
  double max_sigma = 0.0;
  for (const auto& n : nodes) max_sigma = std::max(max_sigma, n.arrival_mean);
  return max_sigma > 0.0 ? 2.0 * max_sigma : 1.0;
}

namespace {

template <typename... Args>
std::string cat(const Args&... args) {
  std::ostringstream os;
  (os << ... << args);
  return os.str();
}

}  // namespace

std::vector<Violation> validate_scenario(const Scenario& sc) {
  std::vector<Violation> out;
  auto report = [&](std::string kind, std::string detail) {
    out.push_back({std::move(kind), std::move(detail)});
  };
  const int n = sc.node_count();

  for (int i = 0; i < n; ++i) {
    const auto& node = sc.nodes[i];
    if (node.id != i) report("id-order", cat("node at position ", i, " has id ", node.id));
    if (!node.capacity.nonnegative()) report("capacity", cat("node ", i, " has negative capacity"));
    if (!node.available.nonnegative()) report("capacity", cat("node ", i, " has negative available resources"));
    if (!node.available.fits_within(node.capacity))
      report("capacity", cat("node ", i, " has available resources above capacity"));
    if (node.arrival_mean < 0.0) report("arrival", cat("node ", i, " has negative arrival mean"));
    if (node.quota_min < 0 || node.quota_max < node.quota_min)
      report("quota", cat("node ", i, " quotas [", node.quota_min, ",", node.quota_max, "]"));
  }

  for (std::size_t l = 0; l < sc.links.size(); ++l) {
    const auto& link = sc.links[l];
    const bool from_ok = link.from >= 0 && link.from < n;
    const bool to_ok = link.to >= 0 && link.to < n;
    if (!from_ok || !to_ok) {
      report("dangling-reference",
             cat("link ", l, " references node ", from_ok ? link.to : link.from, " which does not exist"));
      continue;
    }
    if (link.from == link.to) report("link", cat("link ", l, " is a self loop on node ", link.from));
    if (!(link.capacity > 0.0)) report("link", cat("link ", l, " has nonpositive capacity"));
  }

  const int nv = static_cast<int>(sc.vnfs.size());
  for (int v = 0; v < nv; ++v) {
    const auto& spec = sc.vnfs[v];
    if (spec.id != v) report("id-order", cat("vnf at position ", v, " has id ", spec.id));
    if (!spec.requirement.nonnegative() || !spec.requirement.any_positive())
      report("vnf-requirement", cat("vnf ", v, " requirement must be nonnegative with a positive component"));
    if (spec.processing_time < 1) report("vnf-requirement", cat("vnf ", v, " processing time below one slot"));
  }

  for (std::size_t k = 0; k < sc.sfcs.size(); ++k) {
    const auto& sfc = sc.sfcs[k];
    if (sfc.id != static_cast<int>(k)) report("id-order", cat("sfc at position ", k, " has id ", sfc.id));
    if (sfc.chain.empty()) {
      report("chain-order", cat("sfc ", k, " has an empty chain"));
      continue;
    }
    for (int v : sfc.chain)
      if (v < 0 || v >= nv) report("dangling-reference", cat("sfc ", k, " references vnf ", v, " which does not exist"));
    if (sfc.source != sfc.chain.front())
      report("chain-order", cat("sfc ", k, " source ", sfc.source, " is not the first chain element"));
    if (sfc.destination != sfc.chain.back())
      report("chain-order", cat("sfc ", k, " destination ", sfc.destination, " is not the last chain element"));
    if (sfc.virtual_links.size() + 1 != sfc.chain.size())
      report("chain-order", cat("sfc ", k, " has ", sfc.virtual_links.size(), " virtual links for a chain of ",
                                sfc.chain.size()));
    std::set<int> seen(sfc.chain.begin(), sfc.chain.end());
    if (seen.size() != sfc.chain.size()) report("chain-order", cat("sfc ", k, " repeats a VNF"));
  }

  const auto& ch = sc.channel;
  if (!(ch.bandwidth > 0.0)) report("channel", "bandwidth must be positive");
  if (!(ch.noise_var > 0.0)) report("channel", "noise variance must be positive");
  if (static_cast<int>(ch.tx_power.size()) != n) {
    report("channel", cat("tx_power has ", ch.tx_power.size(), " entries for ", n, " nodes"));
  } else {
    for (double p : ch.tx_power)
      if (!(p > 0.0)) report("channel", "tx power must be positive");
  }
  if (static_cast<int>(ch.gain.size()) != n) {
    report("channel", cat("gain matrix has ", ch.gain.size(), " rows for ", n, " nodes"));
  } else {
    for (const auto& row : ch.gain) {
      if (static_cast<int>(row.size()) != n) report("channel", "gain matrix is not square");
      for (double g : row)
        if (g < 0.0) report("channel", "gain must be nonnegative");
    }
  }

  const auto& ar = sc.arrivals;
  if (!(ar.packet_size_min > 0.0) || ar.packet_size_max < ar.packet_size_min)
    report("arrival", "packet size range must be positive and nonempty");
  if (ar.timeout_slots < 1) report("arrival", "timeout must be at least one slot");
  if (ar.service_rate < 0.0) report("arrival", "service rate must be nonnegative");
  if (sc.horizon < 1) report("horizon", "horizon must be at least one slot");

  if (n > 0) {
    std::vector<std::vector<int>> adj(n);
    for (const auto& link : sc.links) {
      if (link.from < 0 || link.from >= n || link.to < 0 || link.to >= n) continue;
      adj[link.from].push_back(link.to);
      adj[link.to].push_back(link.from);
    }
    std::vector<bool> seen(n, false);
    std::queue<int> q;
    q.push(0);
    seen[0] = true;
    int reached = 1;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int w : adj[u])
        if (!seen[w]) {
          seen[w] = true;
          ++reached;
          q.push(w);
        }
    }
    if (reached != n) report("disconnected", cat("only ", reached, " of ", n, " nodes are reachable from node 0"));
  } else {
    report("disconnected", "scenario has no nodes");
  }
  return out;
}

Scenario generate_scenario(const GenerationConfig& cfg, std::uint64_t seed) {
  if (cfg.n_ens_min < 1 || cfg.n_ens_max < cfg.n_ens_min) throw InfeasibleConfig("EN count range is empty");
  if (cfg.vnfs_per_en_min < 1 || cfg.vnfs_per_en_max < cfg.vnfs_per_en_min)
    throw InfeasibleConfig("VNFs-per-EN range is empty");
  if (cfg.chain_len_min < 1 || cfg.chain_len_max < cfg.chain_len_min) throw InfeasibleConfig("chain length range is empty");
  if (!(cfg.packet_size_min > 0.0) || cfg.packet_size_max < cfg.packet_size_min)
    throw InfeasibleConfig("packet size range is empty");
  if (cfg.arrival_mean_min < 0.0 || cfg.arrival_mean_max < cfg.arrival_mean_min)
    throw InfeasibleConfig("arrival mean range is empty");
  if (!cfg.requirement_min.any_positive() || !cfg.requirement_min.fits_within(cfg.requirement_max) ||
      !cfg.requirement_min.nonnegative())
    throw InfeasibleConfig("requirement range is empty");
  if (cfg.processing_time_min < 1 || cfg.processing_time_max < cfg.processing_time_min)
    throw InfeasibleConfig("processing time range is empty");
  if (!(cfg.headroom_min > 0.0) || cfg.headroom_max < cfg.headroom_min) throw InfeasibleConfig("headroom range is empty");
  if (!(cfg.link_capacity_min > 0.0) || cfg.link_capacity_max < cfg.link_capacity_min)
    throw InfeasibleConfig("link capacity range is empty");
  if (cfg.horizon < 1 || cfg.timeout_slots < 1) throw InfeasibleConfig("horizon and timeout must be positive");

  std::mt19937_64 rng(seed);
  auto uni_int = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto uni = [&](double lo, double hi) {
    if (hi <= lo) return lo;
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };

  Scenario sc;
  sc.seed = seed;
  sc.horizon = cfg.horizon;
  const int n = uni_int(cfg.n_ens_min, cfg.n_ens_max);

  std::vector<int> per_en(n);
  for (auto& c : per_en) c = uni_int(cfg.vnfs_per_en_min, cfg.vnfs_per_en_max);
  const int total = std::accumulate(per_en.begin(), per_en.end(), 0);

  const int qmin = cfg.quota_min.value_or(1);
  if (qmin < 0) throw InfeasibleConfig("minimum quota must be nonnegative");
  if (static_cast<long long>(qmin) * n > total)
    throw InfeasibleConfig("sum of minimum quotas (" + std::to_string(qmin * n) + ") exceeds the VNF count (" +
                           std::to_string(total) + ")");

  ResourceVector mean_req, max_req;
  sc.vnfs.reserve(total);
  for (int v = 0; v < total; ++v) {
    VnfSpec spec;
    spec.id = v;
    spec.requirement = {uni(cfg.requirement_min.compute, cfg.requirement_max.compute),
                        uni(cfg.requirement_min.storage, cfg.requirement_max.storage),
                        uni(cfg.requirement_min.transmit, cfg.requirement_max.transmit)};
    spec.processing_time = uni_int(cfg.processing_time_min, cfg.processing_time_max);
    mean_req += spec.requirement;
    max_req = {std::max(max_req.compute, spec.requirement.compute), std::max(max_req.storage, spec.requirement.storage),
               std::max(max_req.transmit, spec.requirement.transmit)};
    sc.vnfs.push_back(spec);
  }
  mean_req = {mean_req.compute / total, mean_req.storage / total, mean_req.transmit / total};

  double max_sigma = 0.0;
  int sum_qmax = 0;
  for (int i = 0; i < n; ++i) {
    EdgeNode node;
    node.id = i;
    const double head = uni(cfg.headroom_min, cfg.headroom_max);
    const double k = head * per_en[i];
    node.capacity = {std::max(k * mean_req.compute, 2.0 * max_req.compute),
                     std::max(k * mean_req.storage, 2.0 * max_req.storage),
                     std::max(k * mean_req.transmit, 2.0 * max_req.transmit)};
    node.available = node.capacity;
    node.arrival_mean = uni(cfg.arrival_mean_min, cfg.arrival_mean_max);
    max_sigma = std::max(max_sigma, node.arrival_mean);
    node.quota_min = qmin;
    node.quota_max = cfg.quota_max.value_or(
        mean_req.compute > 0.0 ? static_cast<int>(std::floor(node.capacity.compute / mean_req.compute)) : total);
    node.quota_max = std::max(node.quota_max, node.quota_min);
    sum_qmax += node.quota_max;
    sc.nodes.push_back(node);
  }
  if (sum_qmax < total)
    throw InfeasibleConfig("sum of maximum quotas (" + std::to_string(sum_qmax) + ") is below the VNF count (" +
                           std::to_string(total) + ")");

  // Random spanning tree plus extra edges keeps the topology connected.
  std::set<std::pair<int, int>> linked;
  auto add_link = [&](int a, int b) {
    if (a > b) std::swap(a, b);
    if (!linked.insert({a, b}).second) return;
    sc.links.push_back({a, b, uni(cfg.link_capacity_min, cfg.link_capacity_max)});
  };
  for (int i = 1; i < n; ++i) add_link(uni_int(0, i - 1), i);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (!linked.count({a, b}) && uni(0.0, 1.0) < cfg.extra_link_probability) add_link(a, b);

  sc.channel.bandwidth = cfg.bandwidth;
  sc.channel.noise_var = cfg.noise_var;
  sc.channel.tx_power.resize(n);
  for (auto& p : sc.channel.tx_power) p = uni(0.5, 1.0);
  sc.channel.gain.assign(n, std::vector<double>(n, 0.0));
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      const double g = linked.count({a, b}) ? uni(0.02, 0.1) : uni(1e-6, 1e-5);
      sc.channel.gain[a][b] = g;
      sc.channel.gain[b][a] = g;
    }

  // SFCs: n_sfcs > 0 draws random chains; n_sfcs == 0 partitions the catalog
  // into disjoint chains so every VNF belongs to exactly one SFC.
  std::vector<int> ids(total);
  std::iota(ids.begin(), ids.end(), 0);
  if (cfg.n_sfcs > 0) {
    for (int k = 0; k < cfg.n_sfcs; ++k) {
      const int len = uni_int(std::min(cfg.chain_len_min, total), std::min(cfg.chain_len_max, total));
      for (int p = 0; p < len; ++p) std::swap(ids[p], ids[uni_int(p, total - 1)]);
      sc.sfcs.push_back(Sfc::from_chain(k, std::vector<int>(ids.begin(), ids.begin() + len)));
    }
  } else {
    std::shuffle(ids.begin(), ids.end(), rng);
    int pos = 0;
    while (pos < total) {
      const int len = std::min(uni_int(cfg.chain_len_min, cfg.chain_len_max), total - pos);
      sc.sfcs.push_back(Sfc::from_chain(static_cast<int>(sc.sfcs.size()),
                                        std::vector<int>(ids.begin() + pos, ids.begin() + pos + len)));
      pos += len;
    }
  }

  sc.arrivals.packet_size_min = cfg.packet_size_min;
  sc.arrivals.packet_size_max = cfg.packet_size_max;
  sc.arrivals.timeout_slots = cfg.timeout_slots;
  sc.arrivals.service_rate = max_sigma > 0.0 ? 2.0 * max_sigma : 1.0;
  return sc;
}

std::vector<ServiceRequest> sample_arrivals(const Scenario& sc, std::uint64_t seed) {
  std::vector<ServiceRequest> out;
  if (sc.sfcs.empty()) return out;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_sfc(0, static_cast<int>(sc.sfcs.size()) - 1);
  const double lo = sc.arrivals.packet_size_min;
  const double hi = std::max(sc.arrivals.packet_size_max, lo);
  std::uniform_real_distribution<double> size(lo, hi);
  int user = 0;
  for (int t = 0; t < sc.horizon; ++t) {
    for (const auto& node : sc.nodes) {
      if (!(node.arrival_mean > 0.0)) continue;
      const int count = std::poisson_distribution<int>(node.arrival_mean)(rng);
      for (int c = 0; c < count; ++c) {
        ServiceRequest r;
        r.user_id = user++;
        r.origin_en = node.id;
        r.sfc_id = pick_sfc(rng);
        r.packet_size = hi > lo ? size(rng) : lo;
        r.arrival_slot = t;
        r.timeout = t + sc.arrivals.timeout_slots;
        out.push_back(r);
      }
    }
  }
  return out;
}

std::vector<ServiceRequest> catalog_requests(const Scenario& sc, std::uint64_t seed) {
  std::vector<ServiceRequest> out;
  if (sc.nodes.empty()) return out;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> origin(0, sc.node_count() - 1);
  std::uniform_int_distribution<int> slot(0, std::max(sc.horizon, 1) - 1);
  const double lo = sc.arrivals.packet_size_min;
  const double hi = std::max(sc.arrivals.packet_size_max, lo);
  std::uniform_real_distribution<double> size(lo, hi);
  for (const auto& sfc : sc.sfcs) {
    ServiceRequest r;
    r.user_id = static_cast<int>(out.size());
    r.origin_en = origin(rng);
    r.sfc_id = sfc.id;
    r.packet_size = hi > lo ? size(rng) : lo;
    r.arrival_slot = slot(rng);
    r.timeout = r.arrival_slot + sc.arrivals.timeout_slots;
    out.push_back(r);
  }
  return out;
}

}  // namespace sfcedge
