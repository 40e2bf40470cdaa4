#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qpecert {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTau = 2.0 * kPi;

// All registers together stay at desk scale; dense storage only.
inline constexpr int kMaxTotalQubits = 14;

// Default tolerances. The underlying identities are exact; these give the
// floating-point slack each kind of comparison is allowed.
inline constexpr double kUnitarityTol = 1e-10;
inline constexpr double kElementwiseTol = 1e-12;
inline constexpr double kStrictMargin = 1e-12;

// Thrown when an operation would exceed the register cap.
class resource_error : public std::runtime_error {
 public:
  explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a second register fails to factor out as a product state.
class entanglement_error : public std::runtime_error {
 public:
  explicit entanglement_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown for malformed run configuration (unknown check names, bad values).
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a check graph is rejected (cycle, duplicate or missing node).
class graph_error : public std::runtime_error {
 public:
  explicit graph_error(const std::string& what) : std::runtime_error(what) {}
};

inline std::uint64_t pow2(int n) {
  if (n < 0 || n > 62) throw std::domain_error("pow2: exponent out of range");
  return std::uint64_t{1} << n;
}

inline void require_register_width(int qubits, const std::string& where) {
  if (qubits < 1) throw std::domain_error(where + ": register needs at least one qubit");
  if (qubits > kMaxTotalQubits)
    throw resource_error(where + ": " + std::to_string(qubits) + " qubits exceeds cap of " +
                         std::to_string(kMaxTotalQubits));
}

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// e^{i*theta} as a unit complex.
inline Complex unit_phase(double theta) { return std::polar(1.0, theta); }

}  // namespace qpecert
