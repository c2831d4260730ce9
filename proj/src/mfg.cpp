#include "sfcedge/mfg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sfcedge {

void MfgParams::validate() const {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (!(resource > 0.0)) throw std::invalid_argument("resource must be positive");
  if (!(delay_cost > 0.0)) throw std::invalid_argument("delay cost must be positive");
  if (players < 1) throw std::invalid_argument("at least one player is required");
}

double mean_field_term(std::span<const double> actions, double beta) {
  if (actions.empty()) throw std::invalid_argument("mean-field term of an empty profile");
  double sum = 0.0;
  for (double a : actions) sum += std::pow(a, beta);
  return std::pow(sum / static_cast<double>(actions.size()), 1.0 / beta);
}

double mean_field_excluding(double m, double a_j, const MfgParams& p) {
  if (p.players < 2) throw std::invalid_argument("excluding a player needs at least two players");
  const double v = p.players;
  const double excl = (v * std::pow(m, p.beta) - std::pow(a_j, p.beta)) / (v - 1.0);
  return std::max(excl, 0.0);
}

double payoff_finite(double a, double m_excl, const MfgParams& p) {
  const double ab = std::pow(a, p.beta);
  const double denom = m_excl * (p.players - 1) + ab;
  if (!(denom > 0.0)) return 0.0;
  return ab * p.resource / denom - a * p.delay_cost;
}

double payoff_infinite(double a, double m, const MfgParams& p) {
  if (!(m > 0.0)) return 0.0;
  return std::pow(a, p.beta) / std::pow(m, p.beta) - a * p.delay_cost;
}

double best_response(double field, const MfgParams& p, std::optional<double> bound, PayoffRegime regime) {
  const double hi = bound.value_or(p.resource);
  if (!(hi > 0.0)) throw std::invalid_argument("search bound must be positive");
  auto f = [&](double a) {
    return regime == PayoffRegime::finite ? payoff_finite(a, field, p) : payoff_infinite(a, field, p);
  };

  constexpr int kGrid = 64;
  const double step = hi / kGrid;
  int best_k = 0;
  double best_v = f(0.0);
  for (int k = 1; k <= kGrid; ++k) {
    const double val = f(k * step);
    if (val > best_v) {
      best_v = val;
      best_k = k;
    }
  }
  double lo_x = std::max(0, best_k - 1) * step;
  double hi_x = std::min(kGrid, best_k + 1) * step;

  constexpr double kInvPhi = 0.6180339887498949;
  constexpr double kTol = 1e-9;
  double x1 = hi_x - kInvPhi * (hi_x - lo_x);
  double x2 = lo_x + kInvPhi * (hi_x - lo_x);
  double f1 = f(x1), f2 = f(x2);
  while (hi_x - lo_x > kTol) {
    if (f1 < f2) {
      lo_x = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo_x + kInvPhi * (hi_x - lo_x);
      f2 = f(x2);
    } else {
      hi_x = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi_x - kInvPhi * (hi_x - lo_x);
      f1 = f(x1);
    }
  }
  double best_x = 0.5 * (lo_x + hi_x);
  double best_f = f(best_x);
  for (double edge : {0.0, hi}) {
    const double fe = f(edge);
    if (fe > best_f) {
      best_f = fe;
      best_x = edge;
    }
  }
  return best_x;
}

double brc_closed_form(double a, double m, const MfgParams& p) {
  if (p.beta != 1.0) throw std::domain_error("closed-form best response requires beta == 1");
  const double others = p.players * m - a;
  if (!(others > 0.0)) return 0.0;
  return std::max(std::sqrt(p.resource * others / p.delay_cost) - others, 0.0);
}

double ne_closed_form(const MfgParams& p) {
  if (p.players < 1) throw std::invalid_argument("at least one player is required");
  const double v = p.players;
  return p.beta * p.resource * (v - 1.0) / (v * v * p.delay_cost);
}

double ne_payoff(double a_star, double others_power_sum, const MfgParams& p) {
  const double big_m = others_power_sum / p.players;
  if (!(big_m > 0.0)) throw std::invalid_argument("equilibrium payoff needs positive demand from the others");
  if (a_star == 0.0) return 0.0;
  return a_star * p.delay_cost * ((std::pow(a_star, p.beta) + big_m) / (p.beta * big_m) - 1.0);
}

double efficiency_ratio(double a_ne, const MfgParams& p) { return p.players * a_ne / p.resource; }

double payoff_second_derivative(double a, double m_excl, const MfgParams& p) {
  // The cost term is linear in a and drops out of the second difference; left
  // in, it dominates the rounding error once the share term is nearly flat.
  MfgParams share = p;
  share.delay_cost = 0.0;
  const double h = 1e-4 * std::max(a, 1e-3);
  const double up = payoff_finite(a + h, m_excl, share);
  const double mid = payoff_finite(a, m_excl, share);
  const double down = payoff_finite(a - h, m_excl, share);
  return (up - 2.0 * mid + down) / (h * h);
}

}  // namespace sfcedge
