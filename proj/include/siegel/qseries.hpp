// Truncated Fourier expansions of degree-2 Siegel modular objects.
//
// A term exp(2 pi i tr(TZ)) with T = [[n, r/2], [r/2, m]] is stored under the
// scaled index (N, R, M) = (s n, s r, s m) where s is the series scale (4 for
// every final object). Precision is the trace bound N + M <= prec.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "siegel/cyclotomic.hpp"

namespace siegel {

class SeriesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QIndex {
  long N = 0;
  long R = 0;
  long M = 0;

  long trace() const { return N + M; }
  bool is_psd() const { return N >= 0 && M >= 0 && 4 * N * M >= R * R; }
  std::string to_string() const;

  friend bool operator==(const QIndex&, const QIndex&) = default;
  friend QIndex operator+(const QIndex& a, const QIndex& b) { return {a.N + b.N, a.R + b.R, a.M + b.M}; }
};

/// Lexicographic (N, M, R); the iteration and serialization order.
struct QIndexLess {
  bool operator()(const QIndex& a, const QIndex& b) const {
    if (a.N != b.N) return a.N < b.N;
    if (a.M != b.M) return a.M < b.M;
    return a.R < b.R;
  }
};

struct QIndexHash {
  size_t operator()(const QIndex& q) const {
    uint64_t h = static_cast<uint64_t>(q.N) * 0x9E3779B97F4A7C15ull;
    h ^= static_cast<uint64_t>(q.M) + 0x7F4A7C159E3779B9ull + (h << 6) + (h >> 2);
    h ^= static_cast<uint64_t>(q.R) + 0x94D049BB133111EBull + (h << 6) + (h >> 2);
    return static_cast<size_t>(h);
  }
};

enum class Rescale { refine, coarsen };

class FourierSeries {
 public:
  using TermMap = std::map<QIndex, CycElt, QIndexLess>;

  explicit FourierSeries(long prec = 0, unsigned root_order = 8, long scale = 4);

  long prec() const { return prec_; }
  long scale() const { return scale_; }
  unsigned root_order() const { return root_order_; }
  const TermMap& terms() const { return terms_; }
  size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  /// Adds c to the coefficient at idx. Indices beyond prec are dropped; a
  /// non-PSD index throws.
  void add_term(const QIndex& idx, const CycElt& c);
  /// Stored coefficient or zero; throws if idx lies beyond the precision.
  CycElt coefficient(const QIndex& idx) const;
  /// Stored coefficient or nullptr; no precision check.
  const CycElt* find(const QIndex& idx) const;

  FourierSeries truncated(long prec) const;
  FourierSeries operator-() const;
  FourierSeries scaled(const CycElt& c) const;
  FourierSeries scaled(const Integer& c) const;
  /// Same series with coefficients written in a larger root order.
  FourierSeries lifted(unsigned order) const;
  /// Inverse of lifted; throws when a coefficient leaves the subfield.
  FourierSeries projected(unsigned order) const;

  friend FourierSeries operator+(const FourierSeries& a, const FourierSeries& b);
  friend FourierSeries operator-(const FourierSeries& a, const FourierSeries& b);
  friend FourierSeries operator*(const FourierSeries& a, const FourierSeries& b);
  friend bool operator==(const FourierSeries& a, const FourierSeries& b) {
    return a.scale_ == b.scale_ && a.prec_ == b.prec_ && a.root_order_ == b.root_order_ &&
           a.terms_ == b.terms_;
  }

  /// refine multiplies every index (and the scale) by factor; coarsen divides
  /// and throws naming the first off-lattice index.
  FourierSeries rescale(long factor, Rescale direction) const;

  /// Smallest trace of a stored term, if any.
  std::optional<long> min_trace() const;

  /// Throws SeriesError describing the first violated invariant.
  void validate() const;

  nlohmann::ordered_json to_json() const;
  static FourierSeries from_json(const nlohmann::json& j);

 private:
  long prec_;
  unsigned root_order_;
  long scale_;
  TermMap terms_;
};

}  // namespace siegel
