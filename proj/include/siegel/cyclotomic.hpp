// Exact arithmetic in the ring of integers Z[zeta_N] of the N-th cyclotomic
// field. Elements are stored in the power basis 1, zeta, ..., zeta^(phi(N)-1),
// reduced modulo the N-th cyclotomic polynomial, so equality is coefficient
// equality.
#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

namespace siegel {

using Integer = mpz_class;
using Rational = mpq_class;

class CyclotomicError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

unsigned euler_phi(unsigned n);

/// Coefficients of the n-th cyclotomic polynomial, constant term first.
std::vector<Integer> cyclotomic_polynomial(unsigned n);

class CycElt {
 public:
  /// Zero of order 8; mostly useful as a placeholder in containers.
  CycElt() : CycElt(8) {}
  explicit CycElt(unsigned order);

  static CycElt zero(unsigned order) { return CycElt(order); }
  static CycElt one(unsigned order) { return integer(order, 1); }
  static CycElt integer(unsigned order, const Integer& value);
  /// zeta_order^k; k is taken mod order.
  static CycElt root(unsigned order, long k);
  /// Reduces an arbitrary-length polynomial in zeta (exponents mod order).
  static CycElt from_poly(unsigned order, const std::vector<Integer>& poly);
  /// Reduces a polynomial given as coefficients indexed by exponent mod order.
  static CycElt from_exponents(unsigned order, const std::vector<Integer>& by_exp);

  unsigned order() const { return order_; }
  const std::vector<Integer>& coeffs() const { return coeffs_; }
  bool is_zero() const;
  /// True iff the element is a rational integer (only the constant slot set).
  bool is_integer() const;

  CycElt operator-() const;
  CycElt& operator+=(const CycElt& o);
  CycElt& operator-=(const CycElt& o);
  CycElt& operator*=(const CycElt& o);
  CycElt& operator*=(const Integer& s);
  friend CycElt operator+(CycElt a, const CycElt& b) { return a += b; }
  friend CycElt operator-(CycElt a, const CycElt& b) { return a -= b; }
  friend CycElt operator*(const CycElt& a, const CycElt& b);
  friend CycElt operator*(CycElt a, const Integer& s) { return a *= s; }
  friend CycElt operator*(const Integer& s, CycElt a) { return a *= s; }
  friend bool operator==(const CycElt& a, const CycElt& b) {
    return a.order_ == b.order_ && a.coeffs_ == b.coeffs_;
  }

  /// Multiplies by zeta^k without a general product.
  CycElt times_root(long k) const;
  /// Exact division by a rational integer; throws if any coefficient is not
  /// divisible.
  CycElt divexact(const Integer& d) const;
  CycElt pow(unsigned e) const;

  /// Galois automorphism zeta -> zeta^k, gcd(k, order) = 1.
  CycElt galois(long k) const;
  /// Absolute norm down to Q.
  Integer norm() const;
  /// True iff d divides *this in Z[zeta].
  bool divisible_by(const CycElt& d) const;
  /// *this / d; throws when the quotient is not integral.
  CycElt divide_exact(const CycElt& d) const;

  /// Value at exp(2 pi i k / order); requires gcd(k, order) = 1.
  std::complex<double> embed(long k) const;

  /// Same number written in order m (order must divide m).
  CycElt lift(unsigned m) const;
  /// Inverse of lift; throws if the element is not in the order-m subfield.
  CycElt project(unsigned m) const;

  nlohmann::ordered_json coeffs_json() const;
  nlohmann::ordered_json to_json() const;
  static CycElt from_json(const nlohmann::json& j);
  static CycElt from_coeffs_json(unsigned order, const nlohmann::json& arr);

  std::string to_string() const;

 private:
  unsigned order_;
  std::vector<Integer> coeffs_;
};

std::ostream& operator<<(std::ostream& os, const CycElt& a);

/// Accumulates sums of c * zeta_order^k lazily (exponent slots mod order) and
/// reduces once at the end. Used for long sums of root-of-unity phases.
class RootAccumulator {
 public:
  explicit RootAccumulator(unsigned order) : order_(order), slots_(order) {}
  void add(long k, const Integer& c);
  void add_scaled(const CycElt& a, long k, const Integer& scale);
  CycElt value() const { return CycElt::from_exponents(order_, slots_); }
  unsigned order() const { return order_; }

 private:
  unsigned order_;
  std::vector<Integer> slots_;
};

}  // namespace siegel
