// Degree-2 Hecke operator T(p), p odd, acting on truncated Fourier series.
//
// Two coordinate frames appear here. Coset representatives are built and
// normalized in the level frame, where the products of classical theta
// constants are modular for Gamma(2,4,8). The stored expansions use the
// normalization theta(Z) = theta_classical(2Z), so a level-frame
// matrix [[A,B],[C,D]] acts on the expansion variable as [[A,B/2],[2C,D]].
//
// Representatives are normalized mod 8 inside their Sp4(Z)-cosets to upper
// triangular matrices with B = 0 and A = 1 or A = diag(5,1) mod 8. The second
// class ("twisted") only reaches diag(1,1,p,p) after left multiplication by the
// fixed element gamma_c below, and f|gamma_c = eps f for a sign eps depending
// on the form; hecke_T takes eps as a parameter.
#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "siegel/qseries.hpp"
#include "siegel/theta.hpp"

namespace siegel {

class HeckeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Integer 2x2 matrix [[a, b], [c, d]].
struct Mat2 {
  long a = 0, b = 0, c = 0, d = 0;

  static Mat2 identity() { return {1, 0, 0, 1}; }
  static Mat2 scalar(long s) { return {s, 0, 0, s}; }
  long det() const { return a * d - b * c; }
  long trace() const { return a + d; }
  Mat2 transpose() const { return {a, c, b, d}; }
  Mat2 adj() const { return {d, -b, -c, a}; }
  bool is_symmetric() const { return b == c; }
  Mat2 mod(long m) const;
  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
  }
  friend Mat2 operator*(long s, const Mat2& x) { return {s * x.a, s * x.b, s * x.c, s * x.d}; }
  friend Mat2 operator+(const Mat2& x, const Mat2& y) { return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d}; }
  friend bool operator==(const Mat2&, const Mat2&) = default;
};

using Mat4 = std::array<std::array<long, 4>, 4>;

Mat4 block4(const Mat2& A, const Mat2& B, const Mat2& C, const Mat2& D);
Mat4 operator*(const Mat4& x, const Mat4& y);

/// [[A, B], [0, D]] with A^t D = p I and B^t D symmetric.
struct CosetRep {
  Mat2 A, B, D;
  long p = 0;
  bool twisted = false;

  bool invariants_hold() const;
  Mat4 matrix() const { return block4(A, B, {}, D); }
  /// The representative actually used for the level: gamma_c * matrix() when
  /// twisted, matrix() otherwise.
  Mat4 effective() const;
};

/// gamma_c in the level frame: SL2 element [[5,8],[8,13]] embedded in the
/// first coordinate.
const Mat4& twist_correction();

/// True iff x y^{-1} is integral for similitude-p matrices x, y, i.e. both
/// lie in the same right Sp4(Z)-coset.
bool same_coset(const Mat4& x, const Mat4& y, long p);

/// True iff m is a symplectic similitude with multiplier p.
bool is_similitude(const Mat4& m, long p);

/// (p+1)(p^2+1) right coset representatives of Sp4(Z) diag(1,1,p,p) Sp4(Z).
std::vector<CosetRep> coset_reps(long p);

/// Level-8 normalization (see the header comment). Throws HeckeError if a rep
/// cannot be normalized.
std::vector<CosetRep> normalize_reps(const std::vector<CosetRep>& reps, long modulus = 8);

/// Same representative acting on the expansion variable (B halved).
CosetRep expansion_frame(const CosetRep& rep);

/// f | rep for a representative already in the expansion frame:
/// det(D)^-k f((AZ+B)D^-1). The series is returned at scale 4p and root order
/// 8p; det(D)^-k is returned separately.
struct SlashResult {
  FourierSeries series;
  Rational scalar;
};
SlashResult slash_action(const FourierSeries& f, const CosetRep& rep, int weight = 3);

/// Coefficient lookup that extends a truncated series of a form invariant
/// under T -> V^t T V for V = 1 mod 4 in SL2(Z): an index beyond the precision
/// is moved to a smaller-trace representative of its orbit.
class CoefficientOracle {
 public:
  /// direct_only disables the orbit reduction (for arbitrary series).
  explicit CoefficientOracle(long prec, bool direct_only = false);

  /// Index to read for T, or nullopt if neither T nor its reduced
  /// representative lies within the precision.
  std::optional<QIndex> locate(const QIndex& T) const;
  /// Smallest trace at which T can be read.
  long needed_trace(const QIndex& T) const;

  long prec() const { return prec_; }

 private:
  QIndex reduced(const QIndex& T) const;

  long prec_;
  bool direct_only_;
  mutable std::unordered_map<QIndex, QIndex, QIndexHash> cache_;
};

/// Sum over reps of the weighted pull-back at the scale-4p index X, times
/// p^6 det(D)^-3 (so the value is integral), at root order 8p. Twisted reps
/// are weighted by twist_sign.
CycElt pullback_at(const FourierSeries& f, const CoefficientOracle& oracle, const std::vector<CosetRep>& reps,
                   const QIndex& X, int twist_sign);

struct HeckeResult {
  FourierSeries series;
  long required_prec = 0;
  long twisted_reps = 0;
  long total_reps = 0;
  long off_lattice_checked = 0;
};

/// Input trace bound needed to produce all outputs up to out_prec.
long required_precision(long p, long out_prec);
/// Largest output level L <= in_prec / p with required_precision(p, L) <= in_prec.
long attainable_out_prec(long p, long in_prec);

struct HeckeOptions {
  int twist_sign = -1;
  long out_prec = -1;          // -1: attainable_out_prec
  long off_lattice_levels = 3;  // off-lattice scale-4p indices up to trace p * this
  bool direct_only = false;    // disable orbit reduction
};

/// T(p) f = p^3 sum_R det(D)^-3 f((AZ+B)D^-1), normalized so that integral
/// series stay integral. Throws HeckeError on an off-lattice residue, a
/// coefficient outside the order-8 field, or a non-integral result.
HeckeResult hecke_T(const FourierSeries& f, long p, const HeckeOptions& opt = {});

/// Sign eps with f|gamma_c = eps f for the theta product, found numerically.
int twist_sign(const FactorList& factors);

struct EigenWitness {
  QIndex index;
  CycElt transformed;
  CycElt original;
};

struct EigenReport {
  std::optional<Rational> eigenvalue;
  std::vector<EigenWitness> witnesses;
  bool consistent = true;
  long count = 0;
  std::string note;
};

EigenReport extract_eigenvalue(const FourierSeries& original, const FourierSeries& transformed);

nlohmann::ordered_json eigen_report_json(const EigenReport& r);

}  // namespace siegel
