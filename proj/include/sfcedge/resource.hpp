#pragma once

#include <array>
#include <ostream>

namespace sfcedge {

// Three-dimensional resource amount: compute (units per slot), storage (data
// units) and transmit (data units per slot).
struct ResourceVector {
  double compute = 0.0;
  double storage = 0.0;
  double transmit = 0.0;

  constexpr ResourceVector() = default;
  constexpr ResourceVector(double c, double s, double w) : compute(c), storage(s), transmit(w) {}

  [[nodiscard]] constexpr std::array<double, 3> as_array() const { return {compute, storage, transmit}; }

  [[nodiscard]] constexpr bool nonnegative() const {
    return compute >= 0.0 && storage >= 0.0 && transmit >= 0.0;
  }
  [[nodiscard]] constexpr bool any_positive() const {
    return compute > 0.0 || storage > 0.0 || transmit > 0.0;
  }

  constexpr ResourceVector& operator+=(const ResourceVector& o) {
    compute += o.compute;
    storage += o.storage;
    transmit += o.transmit;
    return *this;
  }
  constexpr ResourceVector& operator-=(const ResourceVector& o) {
    compute -= o.compute;
    storage -= o.storage;
    transmit -= o.transmit;
    return *this;
  }
  friend constexpr ResourceVector operator+(ResourceVector a, const ResourceVector& b) { return a += b; }
  friend constexpr ResourceVector operator-(ResourceVector a, const ResourceVector& b) { return a -= b; }
  friend constexpr bool operator==(const ResourceVector&, const ResourceVector&) = default;

  // Componentwise a <= b.
  [[nodiscard]] constexpr bool fits_within(const ResourceVector& bound) const {
    return compute <= bound.compute && storage <= bound.storage && transmit <= bound.transmit;
  }
};

inline std::ostream& operator<<(std::ostream& os, const ResourceVector& r) {
  return os << '<' << r.compute << ',' << r.storage << ',' << r.transmit << '>';
}

// Admission test: the requirement fits in what is available, componentwise.
[[nodiscard]] constexpr bool admit(const ResourceVector& available, const ResourceVector& requirement) {
  return requirement.fits_within(available);
}

}  // namespace sfcedge
