#include "sfcedge/imla.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "sfcedge/error.hpp"

namespace sfcedge {

void LearningConfig::validate() const {
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("learning rate must lie in (0,1)");
  if (max_iterations <= 0) throw std::invalid_argument("max_iterations must be positive");
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
}

namespace {

// Best response of one player when every other player demands x.
double symmetric_brc(double x, const MfgParams& p) {
  if (p.beta == 1.0) return brc_closed_form(x, x, p);
  return best_response(std::pow(x, p.beta), p);
}

}  // namespace

namespace {

// One learning iteration starting from the symmetric action a.
double learning_step(double a, const MfgParams& p, const LearningConfig& c, std::mt19937_64& rng,
                     std::uniform_real_distribution<double>& draw) {
  if (c.update == UpdateOrder::simultaneous) {
    const double arg = c.random_restarts ? draw(rng) : a;
    return c.lambda * symmetric_brc(arg, p) + (1.0 - c.lambda) * a;
  }
  const double step = c.lambda / p.players;
  for (int k = 0; k < p.players; ++k) {
    const double arg = c.random_restarts ? draw(rng) : a;
    a += step * (symmetric_brc(arg, p) - a);
  }
  return a;
}

}  // namespace

LearningResult imla_learn(const MfgParams& params, const LearningConfig& config) {
  params.validate();
  config.validate();
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> draw(0.0, params.resource);
  double a = config.initial_action ? *config.initial_action : draw(rng);

  LearningResult out;
  auto& rows = out.trace.iterates;
  rows.reserve(config.max_iterations);
  for (int t = 1; t <= config.max_iterations; ++t) {
    const double next = learning_step(a, params, config, rng, draw);
    const double gap = std::abs(next - a);
    a = next;
    rows.push_back({t, a, payoff_finite(a, std::pow(a, params.beta), params), gap});
    if (gap < config.tolerance) {
      out.trace.converged_at = t;
      break;
    }
  }
  out.a_star = a;
  return out;
}

LearningResult imla_learn_infinite(const MfgParams& params, const LearningConfig& config) {
  params.validate();
  if (!(config.lambda >= 0.0 && config.lambda < 1.0)) throw std::invalid_argument("learning rate must lie in [0,1)");
  if (config.max_iterations <= 0) throw std::invalid_argument("max_iterations must be positive");
  if (!(config.tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> draw(0.0, params.resource);
  double m = config.initial_action ? *config.initial_action : draw(rng);
  const double step = config.lambda / params.players;

  LearningResult out;
  auto& rows = out.trace.iterates;
  rows.reserve(config.max_iterations);
  for (int t = 1; t <= config.max_iterations; ++t) {
    const double before = m;
    for (int k = 0; k < params.players; ++k) {
      const double arg = config.random_restarts ? draw(rng) : m;
      m += step * (symmetric_brc(arg, params) - m);
    }
    const double gap = std::abs(m - before);
    rows.push_back({t, m, payoff_infinite(m, m, params), gap});
    // With lambda == 0 nothing moves; only a genuine fixed point counts.
    const bool settled = config.lambda > 0.0 ? gap < config.tolerance
                                             : std::abs(symmetric_brc(m, params) - m) < config.tolerance;
    if (settled) {
      out.trace.converged_at = t;
      break;
    }
  }
  out.a_star = m;
  return out;
}

void write_trace_csv(std::ostream& out, const ConvergenceTrace& trace) {
  out << "iteration,action,payoff,gap\r\n";
  char buf[160];
  for (const auto& r : trace.iterates) {
    std::snprintf(buf, sizeof buf, "%d,%.10g,%.10g,%.10g\r\n", r.iteration, r.action, r.payoff, r.gap);
    out << buf;
  }
}

std::vector<NodeGame> learn_node_games(const Workload& wl, double beta, const LearningConfig& config) {
  const auto& sc = wl.scenario();
  const int n = sc.node_count();
  if (n == 0) return {};
  double mean_compute = 0.0;
  for (const auto& node : sc.nodes) mean_compute += node.capacity.compute;
  mean_compute /= n;

  std::vector<double> mean_delay(n, 1.0);
  const auto& jobs = wl.jobs();
  if (!jobs.empty())
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (const auto& j : jobs) s += processing_delay(wl.requests()[j.request].packet_size, sc.nodes[i].capacity);
      mean_delay[i] = s / static_cast<double>(jobs.size());
    }
  const double fleet_delay = std::accumulate(mean_delay.begin(), mean_delay.end(), 0.0) / n;

  const int players = std::max<int>(2, static_cast<int>(wl.vnfs().size()));
  std::vector<NodeGame> games(n);
  for (int i = 0; i < n; ++i) {
    auto& g = games[i];
    g.params.beta = beta;
    g.params.players = players;
    g.params.resource = sc.nodes[i].capacity.compute / mean_compute;
    g.params.delay_cost = beta * (players - 1.0) / players * mean_delay[i] / fleet_delay;
    g.reference_delay = mean_delay[i];
    LearningConfig c = config;
    c.seed = config.seed + static_cast<std::uint64_t>(i);
    g.learning = imla_learn(g.params, c);
    g.a_star = g.learning.a_star;
  }
  return games;
}

PlacementResult place_vnfs(const Workload& wl, std::span<const NodeGame> games) {
  const auto& sc = wl.scenario();
  const int n = sc.node_count();
  if (static_cast<int>(games.size()) != n) throw std::invalid_argument("one learned game per node is required");
  double mean_compute = 0.0;
  for (const auto& node : sc.nodes) mean_compute += node.capacity.compute;
  mean_compute /= n;

  PlacementResult out;
  out.assignment.assign(sc.vnfs.size(), -1);
  out.demand.assign(sc.vnfs.size(), 0.0);
  out.available.reserve(n);
  for (const auto& node : sc.nodes) out.available.push_back(node.available);

  std::vector<int> order(wl.requests().size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return wl.requests()[a].arrival_slot < wl.requests()[b].arrival_slot;
  });

  const auto& jobs = wl.jobs();
  // Job index of the first element of each request's chain.
  std::vector<int> first_job(wl.requests().size(), -1);
  for (int j = static_cast<int>(jobs.size()) - 1; j >= 0; --j)
    if (jobs[j].position == 0) first_job[jobs[j].request] = j;

  for (int r : order) {
    for (int j = first_job[r]; j >= 0; j = jobs[j].succ) {
      const int vnf = jobs[j].vnf;
      if (out.assignment[vnf] >= 0) continue;
      const auto& req = sc.vnfs[vnf].requirement;
      int best = -1;
      double best_payoff = 0.0;
      for (int i = 0; i < n; ++i) {
        if (!admit(out.available[i], req)) continue;
        double delay = 0.0;
        const auto& served = wl.jobs_of_vnf(vnf);
        for (int k : served) {
          delay += processing_delay(wl.requests()[jobs[k].request].packet_size, sc.nodes[i].capacity);
          const int pred = jobs[k].pred;
          if (pred >= 0 && out.assignment[jobs[pred].vnf] >= 0)
            delay += wl.transmission_delay(k, out.assignment[jobs[pred].vnf], i);
        }
        delay /= static_cast<double>(served.size());
        MfgParams p = games[i].params;
        p.resource = out.available[i].compute / mean_compute;
        p.delay_cost = games[i].params.delay_cost * delay / games[i].reference_delay;
        const double a = games[i].a_star;
        const double payoff = payoff_finite(a, std::pow(a, p.beta), p);
        if (best < 0 || payoff > best_payoff) {
          best = i;
          best_payoff = payoff;
        }
      }
      if (best < 0) throw PlacementError("no node admits VNF " + std::to_string(vnf));
      out.assignment[vnf] = best;
      out.demand[vnf] = games[best].a_star;
      out.available[best] -= req;
      out.order.push_back(vnf);
    }
  }
  return out;
}

RouteResult route_sfc(std::span<const int> assignment, const Sfc& sfc, const Scenario& sc, const Topology& topo,
                      double packet_size) {
  RouteResult out;
  out.allocations = allocate_virtual_links(assignment, sfc, sc, topo);
  for (int vnf : sfc.chain) {
    const int en = assignment[vnf];
    if (out.path.empty() || out.path.back() != en) out.path.push_back(en);
  }
  for (const auto& vl : out.allocations) {
    if (!vl.cross_node) continue;
    out.transmission_delay +=
        transmission_delay(packet_size, vl, hop_rate(sc, *vl.phyl, vl.from_en, vl.to_en, packet_size));
  }
  return out;
}

RouteResult route_sfc(const PlacementResult& placement, const Sfc& sfc, const Scenario& sc, double packet_size) {
  return route_sfc(placement.assignment, sfc, sc, Topology(sc), packet_size);
}

}  // namespace sfcedge
