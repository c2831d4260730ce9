#pragma once

#include <optional>
#include <span>
#include <vector>

namespace sfcedge {

// Parameters of the per-node resource game. `resource` is the amount of the
// contested resource available at the node; `delay_cost` prices one unit of
// demand by the expected delay of using it.
struct MfgParams {
  double beta = 1.0;
  double resource = 1.0;
  double delay_cost = 1.0;
  int players = 2;

  // Throws std::invalid_argument on beta <= 0, resource <= 0, delay_cost <= 0 or players < 1.
  void validate() const;
};

struct ActionProfile {
  std::vector<double> actions;
};

// m = ((1/v) * sum a_j^beta)^(1/beta). Throws std::invalid_argument on an empty profile.
[[nodiscard]] double mean_field_term(std::span<const double> actions, double beta);

// Power mean of the others with player j removed:
//   (v * m^beta - a_j^beta) / (v - 1)  ==  (1/(v-1)) * sum_{j' != j} a_j'^beta.
// Note the result is in beta-power units. Throws std::invalid_argument when players < 2.
[[nodiscard]] double mean_field_excluding(double m, double a_j, const MfgParams& params);

// a^beta * resource / (m_excl * (v-1) + a^beta) - a * delay_cost; 0 when the
// denominator vanishes (nobody demands anything).
[[nodiscard]] double payoff_finite(double a, double m_excl, const MfgParams& params);

// Large-population payoff: a^beta / m^beta - a * delay_cost, or 0 when m == 0.
[[nodiscard]] double payoff_infinite(double a, double m, const MfgParams& params);

enum class PayoffRegime { finite, infinite };

// argmax over a in [0, bound] of the chosen payoff, where `field` is m_excl for
// the finite payoff and m for the infinite one. bound defaults to the
// resource. A coarse scan locates the best bracket, golden-section search
// refines it to 1e-9, and the boundaries are compared last, so boundary maxima
// and non-concave payoffs (beta > 1) are handled.
[[nodiscard]] double best_response(double field, const MfgParams& params, std::optional<double> bound = std::nullopt,
                                   PayoffRegime regime = PayoffRegime::finite);

// Closed-form best response for beta == 1, with S = v*m - a the others' total
// demand: max(sqrt(resource * S / delay_cost) - S, 0). Throws std::domain_error for beta != 1.
[[nodiscard]] double brc_closed_form(double a, double m, const MfgParams& params);

// Symmetric Nash equilibrium demand beta * resource * (v-1) / (v^2 * delay_cost).
[[nodiscard]] double ne_closed_form(const MfgParams& params);

// Equilibrium payoff a*gamma*[(a^beta + M)/(beta*M) - 1] with M = others_power_sum / v.
// Throws std::invalid_argument when M <= 0.
[[nodiscard]] double ne_payoff(double a_star, double others_power_sum, const MfgParams& params);

// v * a / resource; 1 means the equilibrium demand uses the whole resource.
[[nodiscard]] double efficiency_ratio(double a_ne, const MfgParams& params);

// Central second difference of payoff_finite in a, step 1e-4 * a (cost term
// excluded: it is linear in a).
[[nodiscard]] double payoff_second_derivative(double a, double m_excl, const MfgParams& params);

}  // namespace sfcedge
