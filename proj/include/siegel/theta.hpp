// Igusa theta constants as truncated Fourier series, and products of them.
//
//   theta_m(Z) = sum_{x in Z^2} e((x + (a,b)/2) Z (x + (a,b)/2)^t + (x + (a,b)/2).(c,d)/2)
//
// with e(z) = exp(2 pi i z). A lattice point with u = 2 x1 + a, v = 2 x2 + b
// contributes the scale-4 index d (u^2, 2uv, v^2) with coefficient i^(uc + vd).
#pragma once

#include <array>
#include <complex>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "siegel/qseries.hpp"

namespace siegel {

class ThetaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Characteristic {
  int a = 0, b = 0, c = 0, d = 0;

  void check() const;
  bool is_odd() const { return (a * c + b * d) % 2 != 0; }
  std::string to_string() const;
  friend bool operator==(const Characteristic&, const Characteristic&) = default;
};

struct ThetaFactor {
  Characteristic m;
  int dilation = 1;  // 1 for theta_m(Z), 2 for theta_m(2Z)

  void check() const;
  std::string to_string() const;  // "d:a,b,c,d"
  friend bool operator==(const ThetaFactor&, const ThetaFactor&) = default;
};

using FactorList = std::vector<ThetaFactor>;

bool is_odd_characteristic(const Characteristic& m);

FourierSeries theta_constant(const ThetaFactor& f, long prec);

/// Product of the factors in list order, every factor generated at prec.
FourierSeries product_form(const FactorList& factors, long prec);

/// Factor lists of g1 and g4 as printed (g1 carries theta_(0,0,1,0)(Z) twice).
const FactorList& g1_factors();
const FactorList& g4_factors();

FourierSeries build_g1(long prec);
FourierSeries build_g4(long prec);

/// One factor per line as "d:a,b,c,d"; '#' starts a comment; blank lines are
/// skipped. Throws ThetaError naming the offending line.
FactorList parse_factor_list(std::istream& in);
FactorList read_factor_file(const std::string& path);
std::string format_factor_list(const FactorList& factors);

/// Direct floating-point lattice sum of theta_m(d Z) for a 2x2 symmetric Z
/// with positive definite imaginary part. Used for modularity probes.
using CMat2 = std::array<std::array<std::complex<double>, 2>, 2>;
std::complex<double> theta_numeric(const ThetaFactor& f, const CMat2& Z, int radius = 12);
std::complex<double> product_numeric(const FactorList& factors, const CMat2& Z, int radius = 12);

}  // namespace siegel
