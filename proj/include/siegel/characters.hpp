// Right-hand sides of the L-function identities: quadratic characters, the
// CM character mu of Q(i), the Hecke character lambda of Q(zeta_8), the
// weight-4 level-8 newform rho1, Euler factors and Satake moduli.
#pragma once

#include <array>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "siegel/cyclotomic.hpp"

namespace siegel {

class CharacterError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---- quadratic characters ---------------------------------------------

enum class QuadChar { chi_m1, chi_m2, chi_2 };  // discriminants -4, -8, 8

int kronecker_value(QuadChar chi, long n);

// ---- rho1 ---------------------------------------------------------------

struct NewformQexp {
  std::vector<Integer> a;  // a[n] for 1 <= n <= prec; a[0] unused
  int weight = 4;
  int level = 8;

  long prec() const { return static_cast<long>(a.size()) - 1; }
  const Integer& coeff(long n) const;
};

/// q prod (1 - q^2n)^4 (1 - q^4n)^4 up to q^prec.
NewformQexp rho1_qexp(long prec);

// ---- Gaussian integers and mu -------------------------------------------

struct Gaussian {
  Integer re, im;
  friend Gaussian operator*(const Gaussian& x, const Gaussian& y) {
    return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
  }
  friend bool operator==(const Gaussian&, const Gaussian&) = default;
  Gaussian conj() const { return {re, -im}; }
  Integer norm() const { return re * re + im * im; }
  Gaussian pow(unsigned k) const;
  std::string to_string() const;
};

/// True iff z = 1 mod (1+i)^3.
bool is_primary(const Gaussian& z);

struct GaussPrimeData {
  long p = 0;
  bool split = false;
  std::vector<Gaussian> generators;  // split: primary pi, conj(pi); inert: p
};

GaussPrimeData gauss_prime_data(long p);

/// p + 1 - #E(F_p) for E: y^2 = x^3 - x.
long ap_from_point_count(long p);

// ---- Euler factors --------------------------------------------------------

/// 1 + c_1 X + ... + c_d X^d with X = p^-s.
struct EulerFactor {
  long p = 0;
  std::vector<CycElt> coeffs;  // coeffs[0] = 1
  int shift = 0;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  /// Sum of the inverse roots, -c_1.
  CycElt trace() const;
  friend EulerFactor operator*(const EulerFactor& x, const EulerFactor& y);
};

EulerFactor integer_factor(long p, const std::vector<Integer>& coeffs);

/// Sign s with mu((pi)) = s * pi on primary generators; +1 or -1, fixed by
/// the point count at p = 5.
int mu_sign();

/// Local factor of L(s, mu^power) at odd p, power in {1, 3}.
EulerFactor mu_euler(long p, int power);

// ---- lambda ---------------------------------------------------------------

struct LambdaSpec {
  int eps_zeta8 = 1;
  int eps_unit = -1;
  int a = 1;  // Lambda_inf = sigma_a^3 sigma_b^2 sigma_{-b}
  int b = 5;

  std::string to_string() const;
  friend bool operator==(const LambdaSpec&, const LambdaSpec&) = default;
};

/// 1 + sqrt(2) = 1 + zeta_8 - zeta_8^3.
CycElt unit_1_plus_sqrt2();

/// Lambda_inf(x) = sigma_a(x)^3 sigma_b(x)^2 sigma_{8-b}(x).
CycElt lambda_infinity(const LambdaSpec& spec, const CycElt& x);

/// (i, j) with alpha = zeta_8^i (1 + sqrt2)^j mod 2, 0 <= i < 4, 0 <= j < 2.
std::pair<int, int> unit_log_mod2(const CycElt& alpha);

/// Finite part of lambda on alpha mod 2.
int lambda_finite(const LambdaSpec& spec, const CycElt& alpha);

/// All infinity types surviving the unit-triviality test; throws if none.
std::vector<LambdaSpec> lambda_infinity_search(int eps_zeta8 = 1, int eps_unit = -1);

/// Pairwise non-associate generators of the primes of Z[zeta_8] above p.
std::vector<CycElt> zeta8_primes_above(long p, int box = 3);

CycElt lambda_value(const LambdaSpec& spec, const CycElt& generator);

// ---- predictions ----------------------------------------------------------

enum class Form { g1, g4, F5, F6 };
std::string form_name(Form f);
std::optional<Form> parse_form(const std::string& s);

struct Calibration {
  int nu = 0;
  int s1 = 1;
  int s2 = 2;
  bool calibrated = false;

  std::string to_string() const;
  friend bool operator==(const Calibration& x, const Calibration& y) {
    return x.nu == y.nu && x.s1 == y.s1 && x.s2 == y.s2;
  }
};

/// Euler data shared by the predictions.
struct PredictionContext {
  Calibration cal;
  NewformQexp rho1 = rho1_qexp(200);
  LambdaSpec lambda;
};

/// p^nu times the sum of the inverse roots of the conjectured Euler factor.
Rational predict_eigenvalue(Form form, long p, const PredictionContext& ctx);

/// Conjectured degree-4 factor of g4 at p under the calibration (nu ignored).
EulerFactor g4_euler(long p, const PredictionContext& ctx);
EulerFactor F5_euler(long p);
EulerFactor F6_euler(long p);

struct Measurement {
  Form form;
  long p;
  Rational eigenvalue;
};

/// Unique (nu, s1, s2) on nu in [-4, 4], (s1, s2) in {(0,1), (1,2), (2,3)}
/// matching every g4 measurement; throws with the residual table otherwise.
Calibration calibrate_shift(const std::vector<Measurement>& measured, const NewformQexp& rho1);

/// Sorted moduli of the inverse roots of an Euler factor with integer
/// coefficients.
std::vector<double> satake_moduli(const EulerFactor& f);
std::vector<double> satake_abs(long p, const PredictionContext& ctx);

}  // namespace siegel
