#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

#include "qpecert/common.hpp"

namespace qpecert {

// (a + b) mod 2^t, nonnegative remainder.
inline std::int64_t mod_add(std::int64_t a, std::int64_t b, int t) {
  if (t < 1 || t > 62) throw std::domain_error("mod_add: bad register width");
  const std::int64_t n = static_cast<std::int64_t>(pow2(t));
  std::int64_t r = (a % n + b % n) % n;
  if (r < 0) r += n;
  return r;
}

// Distance from x to the nearest integer multiple of N; result in [0, N/2].
inline double mod_abs(double x, double n) {
  if (!(n > 0.0)) throw std::domain_error("mod_abs: modulus must be positive");
  double r = std::fmod(x, n);
  if (r < 0.0) r += n;
  return std::min(r, n - r);
}

// Integer version, exact.
inline std::int64_t mod_abs_int(std::int64_t x, std::int64_t n) {
  if (n <= 0) throw std::domain_error("mod_abs_int: modulus must be positive");
  std::int64_t r = x % n;
  if (r < 0) r += n;
  return std::min(r, n - r);
}

inline std::int64_t best_floor(double phi, int t) {
  if (!(phi >= 0.0 && phi < 1.0)) throw std::domain_error("best_floor: phase outside [0,1)");
  return static_cast<std::int64_t>(std::floor(std::ldexp(phi, t)));
}

// Half-up rounding, floor(x + 1/2). May equal 2^t; callers reduce mod 2^t
// when indexing outcomes.
inline std::int64_t best_round(double phi, int t) {
  if (!(phi >= 0.0 && phi < 1.0)) throw std::domain_error("best_round: phase outside [0,1)");
  return static_cast<std::int64_t>(std::floor(std::ldexp(phi, t) + 0.5));
}

inline double delta_b(double phi, int t, std::int64_t b) {
  if (!(phi >= 0.0 && phi < 1.0)) throw std::domain_error("delta_b: phase outside [0,1)");
  return phi - std::ldexp(static_cast<double>(b), -t);
}

// A phase in [0,1) carried as an exact rational. The exact-vs-inexact case
// split (whether 2^t * phi is an integer) is decided on the integers, never
// by a floating comparison.
class Phase {
 public:
  Phase() = default;

  static Phase rational(std::int64_t num, std::int64_t den) {
    if (den <= 0) throw std::domain_error("Phase: denominator must be positive");
    num %= den;
    if (num < 0) num += den;
    const std::int64_t g = std::gcd(num, den);
    return Phase(num / g, den / g);
  }

  // a / 2^q
  static Phase dyadic(std::int64_t a, int q) {
    if (q < 0 || q > 62) throw std::domain_error("Phase: bad dyadic exponent");
    return rational(a, static_cast<std::int64_t>(pow2(q)));
  }

  static Phase zero() { return Phase(0, 1); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  // True iff phi = k / 2^t for some integer k, i.e. den divides 2^t.
  bool dyadic_in(int t) const { return scaled_num(t) % den_ == 0; }

  bool operator==(const Phase& other) const = default;

  std::string str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

 private:
  Phase(std::int64_t num, std::int64_t den) : num_(num), den_(den) {}

  // 2^t * num, guarded against overflow (num < den <= ~1e15, t <= 14).
  std::int64_t scaled_num(int t) const {
    if (t < 0 || t > 62) throw std::domain_error("Phase: bad register width");
    const __int128 wide = static_cast<__int128>(num_) << t;
    if (wide > INT64_MAX) throw std::overflow_error("Phase: scaled numerator overflow");
    return static_cast<std::int64_t>(wide);
  }

  friend struct PhaseGeometry;

  std::int64_t num_{0};
  std::int64_t den_{1};
};

// Derived quantities of a phase at a given register width: the floor- and
// round-based best t-bit estimates and their residuals phi - b/2^t.
// delta_floor_is_zero is decided exactly on the rational representation.
struct PhaseGeometry {
  int t{0};
  Phase phase;
  std::int64_t best_floor{0};   // floor(2^t phi), in {0,...,2^t-1}
  std::int64_t best_round{0};   // round(2^t phi), may equal 2^t
  double delta_floor{0.0};      // phi - best_floor/2^t, in [0, 2^-t)
  double delta_round{0.0};      // phi - best_round/2^t, in [-2^-(t+1), 2^-(t+1))
  bool delta_floor_is_zero{false};

  static PhaseGeometry from(const Phase& phi, int t) {
    if (t < 1 || t > kMaxTotalQubits) throw std::domain_error("PhaseGeometry: bad width");
    PhaseGeometry g;
    g.t = t;
    g.phase = phi;
    const std::int64_t scaled = phi.scaled_num(t);  // 2^t * num
    const std::int64_t den = phi.den();
    g.best_floor = scaled / den;  // exact floor, operands nonnegative
    g.best_round = (2 * scaled + den) / (2 * den);
    g.delta_floor = exact_delta(scaled, g.best_floor, den, t);
    g.delta_round = exact_delta(scaled, g.best_round, den, t);
    g.delta_floor_is_zero = (scaled % den == 0);
    return g;
  }

  // phi - b/2^t evaluated as one correctly rounded division.
  static double exact_delta(std::int64_t scaled_num, std::int64_t b, std::int64_t den, int t) {
    const double numer = static_cast<double>(scaled_num - b * den);
    const double denom = std::ldexp(static_cast<double>(den), t);
    return numer / denom;
  }
};

}  // namespace qpecert
