#include "siegel/hecke.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace siegel {

namespace {

long mod(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

Mat2 diag(long x, long y) { return {x, 0, 0, y}; }

// Inverse of a unimodular matrix.
Mat2 unimodular_inverse(const Mat2& u) { return u.det() * u.adj(); }

int key_mod(const Mat2& m, long modulus) {
  const Mat2 r = m.mod(modulus);
  return static_cast<int>(((r.a * modulus + r.b) * modulus + r.c) * modulus + r.d);
}

// Smallest-norm GL2(Z) matrix with entries in [-16, 16] in each class mod 8
// of determinant +-1.
const std::map<int, Mat2>& unimodular_table() {
  static const std::map<int, Mat2> table = [] {
    std::map<int, std::pair<long, Mat2>> best;
    for (long a = -16; a <= 16; ++a)
      for (long b = -16; b <= 16; ++b)
        for (long c = -16; c <= 16; ++c)
          for (long d = -16; d <= 16; ++d) {
            const long det = a * d - b * c;
            if (det != 1 && det != -1) continue;
            const Mat2 u{a, b, c, d};
            const long n = a * a + b * b + c * c + d * d;
            const int k = key_mod(u, 8);
            auto it = best.find(k);
            if (it == best.end() || n < it->second.first) best[k] = {n, u};
          }
    std::map<int, Mat2> out;
    for (const auto& [k, v] : best) out.emplace(k, v.second);
    return out;
  }();
  return table;
}

// SL2(Z) matrices with entries in [-7, 7], grouped by class mod 4.
const std::map<int, std::vector<Mat2>>& sl2_lifts() {
  static const std::map<int, std::vector<Mat2>> table = [] {
    std::map<int, std::vector<Mat2>> out;
    for (long a = -7; a <= 7; ++a)
      for (long b = -7; b <= 7; ++b)
        for (long c = -7; c <= 7; ++c)
          for (long d = -7; d <= 7; ++d)
            if (a * d - b * c == 1) out[key_mod({a, b, c, d}, 4)].push_back({a, b, c, d});
    return out;
  }();
  return table;
}

// g^t T g on scale-4 indices, with T read as the matrix [[2N, R], [R, 2M]].
QIndex transform(const QIndex& t, const Mat2& g) {
  const Mat2 q{2 * t.N, t.R, t.R, 2 * t.M};
  const Mat2 r = g.transpose() * q * g;
  return {r.a / 2, r.b, r.d / 2};
}

// Lagrange-Gauss reduction: returns T0 = W^t T W with |R0| <= N0 <= M0.
QIndex gauss_reduce(QIndex t, Mat2& w) {
  w = Mat2::identity();
  for (;;) {
    if (t.N > t.M) {
      std::swap(t.N, t.M);
      t.R = -t.R;
      w = w * Mat2{0, -1, 1, 0};
      continue;
    }
    if (t.N == 0) return t;
    if (std::abs(t.R) > t.N) {
      const long k = -floor_div(t.R + t.N, 2 * t.N);
      const long r = t.R + 2 * k * t.N;
      t.M = t.M + k * t.R + k * k * t.N;
      t.R = r;
      w = w * Mat2{1, k, 0, 1};
      continue;
    }
    return t;
  }
}

// Per-representative data for the pull-back in the expansion frame.
struct Prepared {
  Mat2 adjA;
  long detA2;
  Mat2 S;  // B A^t
  Integer weight;  // p^6 det(D)^-3, times the twist sign
};

std::vector<Prepared> prepare(const std::vector<CosetRep>& reps, long p, int twist) {
  std::vector<Prepared> out;
  out.reserve(reps.size());
  Integer p6;
  mpz_ui_pow_ui(p6.get_mpz_t(), p, 6);
  for (const auto& r : reps) {
    Prepared q;
    q.adjA = r.A.adj();
    const long dA = r.A.det();
    q.detA2 = dA * dA;
    q.S = r.B * r.A.transpose();
    const Integer dD = r.D.det();
    const Integer dD3 = dD * dD * dD;
    if (p6 % dD3 != 0) throw HeckeError("det(D) does not divide p^2");
    q.weight = p6 / dD3;
    if (r.twisted) q.weight *= twist;
    out.push_back(std::move(q));
  }
  return out;
}

// Scale-4 preimage of the scale-4p index X under one representative.
std::optional<QIndex> preimage(const Prepared& r, const QIndex& x) {
  const Mat2 q{2 * x.N, x.R, x.R, 2 * x.M};
  const Mat2 t = r.adjA.transpose() * q * r.adjA;
  if (t.a % r.detA2 || t.b % r.detA2 || t.d % r.detA2) return std::nullopt;
  const long a = t.a / r.detA2, b = t.b / r.detA2, d = t.d / r.detA2;
  if (a % 2 || d % 2) return std::nullopt;
  return QIndex{a / 2, b, d / 2};
}

// nullopt when some needed coefficient is beyond reach.
std::optional<CycElt> pullback_prepared(const FourierSeries& f, const CoefficientOracle& oracle,
                                        const std::vector<Prepared>& reps, long p, const QIndex& x) {
  const long order = 8 * p;
  RootAccumulator acc(static_cast<unsigned>(order));
  for (const auto& r : reps) {
    const auto t = preimage(r, x);
    if (!t) continue;
    const auto loc = oracle.locate(*t);
    if (!loc) return std::nullopt;
    const CycElt* c = f.find(*loc);
    if (!c) continue;
    const long e = t->N * r.S.a + t->R * r.S.b + t->M * r.S.d;
    acc.add_scaled(*c, mod(2 * e, order), r.weight);
  }
  return acc.value();
}

template <class F>
void for_each_index(long max_trace, F&& fn) {
  for (long n = 0; n <= max_trace; ++n)
    for (long m = 0; m + n <= max_trace; ++m) {
      const long rmax = static_cast<long>(std::sqrt(static_cast<long double>(4 * n * m)));
      for (long r = -rmax - 1; r <= rmax + 1; ++r) {
        const QIndex q{n, r, m};
        if (q.is_psd()) fn(q);
      }
    }
}

std::vector<CosetRep> hecke_reps(long p) {
  auto reps = normalize_reps(coset_reps(p));
  for (auto& r : reps) r = expansion_frame(r);
  return reps;
}

// need[t] = largest input trace read for outputs of trace exactly t.
std::vector<long> need_by_level(long p, long max_level, bool direct_only) {
  const auto reps = hecke_reps(p);
  const auto prep = prepare(reps, p, 1);
  CoefficientOracle oracle(0, direct_only);
  std::vector<long> need(max_level + 1, 0);
  for_each_index(max_level, [&](const QIndex& y) {
    const QIndex x{p * y.N, p * y.R, p * y.M};
    for (const auto& r : prep)
      if (auto t = preimage(r, x)) need[y.trace()] = std::max(need[y.trace()], oracle.needed_trace(*t));
  });
  return need;
}

long attainable(long p, long in_prec, bool direct_only) {
  const long top = in_prec / p;
  const auto need = need_by_level(p, top, direct_only);
  long best = -1, cum = 0;
  for (long t = 0; t <= top; ++t) {
    cum = std::max(cum, need[t]);
    if (cum > in_prec) break;
    best = t;
  }
  return best;
}

long required(long p, long out_prec, bool direct_only) {
  const auto need = need_by_level(p, out_prec, direct_only);
  return *std::max_element(need.begin(), need.end());
}

}  // namespace

Mat2 Mat2::mod(long m) const { return {siegel::mod(a, m), siegel::mod(b, m), siegel::mod(c, m), siegel::mod(d, m)}; }

Mat4 block4(const Mat2& A, const Mat2& B, const Mat2& C, const Mat2& D) {
  return {{{A.a, A.b, B.a, B.b}, {A.c, A.d, B.c, B.d}, {C.a, C.b, D.a, D.b}, {C.c, C.d, D.c, D.d}}};
}

Mat4 operator*(const Mat4& x, const Mat4& y) {
  Mat4 r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) r[i][j] += x[i][k] * y[k][j];
  return r;
}

namespace {

Mat4 transpose4(const Mat4& x) {
  Mat4 r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r[i][j] = x[j][i];
  return r;
}

const Mat4& J4() {
  static const Mat4 j = block4({}, Mat2::identity(), -1 * Mat2::identity(), {});
  return j;
}

}  // namespace

bool CosetRep::invariants_hold() const {
  return A.transpose() * D == Mat2::scalar(p) && (B.transpose() * D).is_symmetric();
}

const Mat4& twist_correction() {
  static const Mat4 g = block4(diag(5, 1), diag(8, 0), diag(8, 0), diag(13, 1));
  return g;
}

Mat4 CosetRep::effective() const { return twisted ? twist_correction() * matrix() : matrix(); }

bool is_similitude(const Mat4& m, long p) {
  const Mat4 lhs = transpose4(m) * J4() * m;
  const Mat4& j = J4();
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k)
      if (lhs[i][k] != p * j[i][k]) return false;
  return true;
}

bool same_coset(const Mat4& x, const Mat4& y, long p) {
  // y^-1 = -J y^t J / p
  const Mat4 z = x * J4() * transpose4(y) * J4();
  for (const auto& row : z)
    for (long v : row)
      if (v % p) return false;
  return true;
}

std::vector<CosetRep> coset_reps(long p) {
  if (p <= 2 || p % 2 == 0) throw HeckeError("T(p) needs an odd prime p, got " + std::to_string(p));
  for (long q = 3; q * q <= p; q += 2)
    if (p % q == 0) throw HeckeError(std::to_string(p) + " is not prime");
  std::vector<Mat2> ds = {Mat2::identity(), Mat2::scalar(p)};
  for (long j = 0; j < p; ++j) ds.push_back({1, j, 0, p});
  ds.push_back({p, 0, 0, 1});
  std::vector<CosetRep> out;
  for (const Mat2& D : ds) {
    const long dD = D.det();
    const Mat2 adjT = D.adj().transpose();
    const Mat2 A{p * adjT.a / dD, p * adjT.b / dD, p * adjT.c / dD, p * adjT.d / dD};
    for (long s11 = 0; s11 < p; ++s11)
      for (long s12 = 0; s12 < p; ++s12)
        for (long s22 = 0; s22 < p; ++s22) {
          const Mat2 sd = Mat2{s11, s12, s12, s22} * D;
          if (sd.a % p || sd.b % p || sd.c % p || sd.d % p) continue;
          CosetRep r{A, {sd.a / p, sd.b / p, sd.c / p, sd.d / p}, D, p, false};
          if (!r.invariants_hold()) throw HeckeError("coset representative fails the similitude condition");
          out.push_back(r);
        }
  }
  return out;
}

std::vector<CosetRep> normalize_reps(const std::vector<CosetRep>& reps, long modulus) {
  if (modulus != 8) throw HeckeError("only modulus 8 is supported");
  const auto& table = unimodular_table();
  std::vector<CosetRep> out;
  out.reserve(reps.size());
  for (const auto& r0 : reps) {
    const long p = r0.p;
    const long dA = mod(r0.A.det(), 8);
    long dinv = 1;
    while ((dinv * dA) % 8 != 1) dinv += 2;
    const Mat2* u = nullptr;
    bool twisted = false;
    for (const auto& [target, tw] : {std::pair{Mat2::identity(), false}, std::pair{diag(5, 1), true}}) {
      const Mat2 ui = (dinv * (target * r0.A.adj())).mod(8);
      auto it = table.find(key_mod(ui, 8));
      if (it != table.end()) {
        u = &it->second;
        twisted = tw;
        break;
      }
    }
    if (!u) throw HeckeError("no unimodular lift normalizes the representative");
    CosetRep r;
    r.p = p;
    r.twisted = twisted;
    r.A = *u * r0.A;
    r.D = unimodular_inverse(*u).transpose() * r0.D;
    const Mat2 b1 = *u * r0.B;
    const Mat2 s0 = (-p * (b1 * r.A.transpose())).mod(8);
    const Mat2 s{s0.a > 4 ? s0.a - 8 : s0.a, s0.b > 4 ? s0.b - 8 : s0.b, s0.c > 4 ? s0.c - 8 : s0.c,
                 s0.d > 4 ? s0.d - 8 : s0.d};
    if (!s.is_symmetric()) throw HeckeError("normalizing translation is not symmetric");
    r.B = b1 + s * r.D;
    if (!(r.B.mod(8) == Mat2{}) || !r.invariants_hold())
      throw HeckeError("normalized representative is not congruent to the target");
    const Mat4 e = r.effective();
    const Mat4 sigma = block4(Mat2::identity(), {}, {}, Mat2::scalar(p));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (mod(e[i][j] - sigma[i][j], 8) != 0) throw HeckeError("normalized representative is not = diag(1,1,p,p) mod 8");
    out.push_back(r);
  }
  return out;
}

CosetRep expansion_frame(const CosetRep& rep) {
  const Mat2& b = rep.B;
  if (b.a % 2 || b.b % 2 || b.c % 2 || b.d % 2)
    throw HeckeError("representative has an odd translation block; normalize it first");
  CosetRep r = rep;
  r.B = {b.a / 2, b.b / 2, b.c / 2, b.d / 2};
  return r;
}

SlashResult slash_action(const FourierSeries& f, const CosetRep& rep, int weight) {
  if (f.scale() != 4) throw HeckeError("slash_action needs a scale-4 series");
  if (f.root_order() != 8) throw HeckeError("slash_action needs root order 8");
  const long p = rep.p;
  const long order = 8 * p;
  // A term of trace t maps to trace <= lambda_max(A^t A) t; the output is
  // complete up to the scale-4p trace p * prec / lambda_max(D^t D) * p.
  const Mat2 dtd = rep.D.transpose() * rep.D;
  const long double tr = dtd.trace(), dt = dtd.det();
  const long double lmax = (tr + std::sqrt(std::max(0.0L, tr * tr - 4 * dt))) / 2;
  const long out_prec = static_cast<long>(std::floor(static_cast<long double>(p) * p * f.prec() / lmax + 1e-9L));
  FourierSeries out(out_prec, static_cast<unsigned>(order), 4 * p);
  const Mat2 S = rep.B * rep.A.transpose();
  const Mat2& A = rep.A;
  for (const auto& [t, c] : f.terms()) {
    const Mat2 q = A.transpose() * Mat2{2 * t.N, t.R, t.R, 2 * t.M} * A;
    const QIndex x{q.a / 2, q.b, q.d / 2};
    if (x.trace() > out_prec) continue;
    const long e = t.N * S.a + t.R * S.b + t.M * S.d;
    out.add_term(x, c.lift(static_cast<unsigned>(order)).times_root(mod(2 * e, order)));
  }
  Integer d = rep.D.det();
  Integer dk;
  mpz_pow_ui(dk.get_mpz_t(), d.get_mpz_t(), static_cast<unsigned long>(weight));
  return {std::move(out), Rational(1) / Rational(dk)};
}

CoefficientOracle::CoefficientOracle(long prec, bool direct_only) : prec_(prec), direct_only_(direct_only) {}

QIndex CoefficientOracle::reduced(const QIndex& t) const {
  if (auto it = cache_.find(t); it != cache_.end()) return it->second;
  Mat2 w;
  const QIndex t0 = gauss_reduce(t, w);
  const Mat2 wi = w.adj();
  const auto& lifts = sl2_lifts();
  std::optional<QIndex> best;
  for (long sgn : {1L, -1L}) {
    auto it = lifts.find(key_mod(sgn * wi, 4));
    if (it == lifts.end()) continue;
    for (const Mat2& g : it->second) {
      const QIndex c = transform(t0, g);
      if (!best || c.trace() < best->trace()) best = c;
    }
  }
  if (!best) throw HeckeError("no SL2 lift for reduction class");
  cache_.emplace(t, *best);
  return *best;
}

std::optional<QIndex> CoefficientOracle::locate(const QIndex& t) const {
  if (t.trace() <= prec_) return t;
  if (direct_only_) return std::nullopt;
  const QIndex r = reduced(t);
  if (r.trace() <= prec_) return r;
  return std::nullopt;
}

long CoefficientOracle::needed_trace(const QIndex& t) const {
  if (direct_only_) return t.trace();
  return std::min(t.trace(), reduced(t).trace());
}

CycElt pullback_at(const FourierSeries& f, const CoefficientOracle& oracle, const std::vector<CosetRep>& reps,
                   const QIndex& x, int twist_sign) {
  if (reps.empty()) throw HeckeError("empty representative list");
  const long p = reps.front().p;
  auto v = pullback_prepared(f, oracle, prepare(reps, p, twist_sign), p, x);
  if (!v) throw HeckeError("pull-back at " + x.to_string() + " needs coefficients beyond the precision");
  return *v;
}

long required_precision(long p, long out_prec) { return required(p, out_prec, false); }

long attainable_out_prec(long p, long in_prec) { return attainable(p, in_prec, false); }

HeckeResult hecke_T(const FourierSeries& f, long p, const HeckeOptions& opt) {
  if (f.scale() != 4) throw HeckeError("hecke_T needs a scale-4 series");
  if (f.root_order() != 8) throw HeckeError("hecke_T needs root order 8");
  if (opt.twist_sign != 1 && opt.twist_sign != -1) throw HeckeError("twist sign must be +1 or -1");
  const auto reps = hecke_reps(p);
  HeckeResult res;
  res.total_reps = static_cast<long>(reps.size());
  res.twisted_reps = std::count_if(reps.begin(), reps.end(), [](const CosetRep& r) { return r.twisted; });

  const long out = opt.out_prec >= 0 ? opt.out_prec : attainable(p, f.prec(), opt.direct_only);
  if (out < 0) throw HeckeError("precision " + std::to_string(f.prec()) + " is too small for T(" + std::to_string(p) + ")");
  res.required_prec = required(p, out, opt.direct_only);
  if (res.required_prec > f.prec())
    throw HeckeError("T(" + std::to_string(p) + ") to output precision " + std::to_string(out) + " needs input precision " +
                     std::to_string(res.required_prec) + ", have " + std::to_string(f.prec()));

  const auto prep = prepare(reps, p, opt.twist_sign);
  const CoefficientOracle oracle(f.prec(), opt.direct_only);
  Integer p3;
  mpz_ui_pow_ui(p3.get_mpz_t(), p, 3);

  FourierSeries result(out, 8, 4);
  if (f.empty()) {
    res.series = result;
    return res;
  }
  for_each_index(out, [&](const QIndex& y) {
    const QIndex x{p * y.N, p * y.R, p * y.M};
    auto v = pullback_prepared(f, oracle, prep, p, x);
    if (!v) throw HeckeError("coefficient beyond reach at output " + y.to_string());
    if (v->is_zero()) return;
    CycElt c;
    try {
      c = v->project(8).divexact(p3);
    } catch (const CyclotomicError& e) {
      throw HeckeError("output " + y.to_string() + ": " + e.what());
    }
    result.add_term(y, c);
  });

  // Off-lattice terms of the coset sum must cancel exactly.
  for_each_index(p * std::min(out, opt.off_lattice_levels), [&](const QIndex& x) {
    if (x.N % p == 0 && x.R % p == 0 && x.M % p == 0) return;
    auto v = pullback_prepared(f, oracle, prep, p, x);
    if (!v) return;
    ++res.off_lattice_checked;
    if (!v->is_zero())
      throw HeckeError("off-lattice residue at scale-" + std::to_string(4 * p) + " index " + x.to_string() + ": " +
                       v->to_string());
  });
  res.series = std::move(result);
  return res;
}

int twist_sign(const FactorList& factors) {
  using C = std::complex<double>;
  // gamma_c in the expansion frame
  const C a11 = 5, b11 = 4, c11 = 16, d11 = 13;
  const CMat2 samples[2] = {
      {{{C(0.13, 0.9), C(0.07, 0.2)}, {C(0.07, 0.2), C(-0.11, 1.0)}}},
      {{{C(-0.21, 0.7), C(0.05, -0.1)}, {C(0.05, -0.1), C(0.17, 0.8)}}},
  };
  std::optional<int> sign;
  for (const auto& z : samples) {
    // CZ + D and AZ + B with A = diag(5,1), B = diag(4,0), C = diag(16,0), D = diag(13,1)
    const C m11 = c11 * z[0][0] + d11, m12 = c11 * z[0][1], m21 = 0, m22 = 1;
    const C n11 = a11 * z[0][0] + b11, n12 = a11 * z[0][1], n21 = z[1][0], n22 = z[1][1];
    const C det = m11 * m22 - m12 * m21;
    const C i11 = m22 / det, i12 = -m12 / det, i21 = -m21 / det, i22 = m11 / det;
    CMat2 w{{{n11 * i11 + n12 * i21, n11 * i12 + n12 * i22}, {n21 * i11 + n22 * i21, n21 * i12 + n22 * i22}}};
    // radius from the smallest eigenvalue of Im W
    const double y11 = w[0][0].imag(), y12 = w[0][1].imag(), y22 = w[1][1].imag();
    const double lmin = (y11 + y22) / 2 - std::sqrt((y11 - y22) * (y11 - y22) / 4 + y12 * y12);
    if (lmin <= 0) throw HeckeError("sample point left the upper half space");
    const int radius = static_cast<int>(std::ceil(std::sqrt(50.0 / (2 * M_PI * lmin)))) + 3;
    const C f0 = product_numeric(factors, z, 12);
    if (std::abs(f0) < 1e-8) throw HeckeError("form vanishes at the sample point; no twist sign");
    const C f1 = product_numeric(factors, w, radius) / (det * det * det);
    const C ratio = f1 / f0;
    int s = 0;
    if (std::abs(ratio - 1.0) < 1e-6) s = 1;
    else if (std::abs(ratio + 1.0) < 1e-6) s = -1;
    else
      throw HeckeError("form is not an eigenvector of gamma_c (ratio " + std::to_string(ratio.real()) + "+" +
                       std::to_string(ratio.imag()) + "i)");
    if (sign && *sign != s) throw HeckeError("twist sign differs between sample points");
    sign = s;
  }
  return *sign;
}

EigenReport extract_eigenvalue(const FourierSeries& original, const FourierSeries& transformed) {
  if (transformed.prec() > original.prec())
    throw HeckeError("transformed series has larger precision than the original");
  if (original.root_order() != transformed.root_order() || original.scale() != transformed.scale())
    throw HeckeError("series are not comparable");
  EigenReport rep;
  const long prec = transformed.prec();
  std::map<QIndex, bool, QIndexLess> keys;
  for (const auto& [k, v] : original.terms())
    if (k.trace() <= prec) keys[k] = true;
  for (const auto& [k, v] : transformed.terms()) keys[k] = true;

  const unsigned n = original.root_order();
  const CycElt zero = CycElt::zero(n);
  std::optional<std::pair<CycElt, CycElt>> pivot;  // (transformed, original)
  for (const auto& [k, v] : keys) {
    const CycElt* a = original.find(k);
    const CycElt* t = transformed.find(k);
    const CycElt& av = a ? *a : zero;
    const CycElt& tv = t ? *t : zero;
    if (a) ++rep.count;
    rep.witnesses.push_back({k, tv, av});
    if (!pivot && a) pivot = {tv, av};
  }
  if (!pivot) {
    rep.consistent = transformed.empty();
    rep.note = "original vanishes within the precision";
    return rep;
  }
  const auto& [t0, a0] = *pivot;
  for (const auto& w : rep.witnesses)
    if (!(w.transformed * a0 == t0 * w.original)) {
      rep.consistent = false;
      rep.note = "cross-ratio fails at " + w.index.to_string();
      break;
    }
  size_t i = 0;
  while (a0.coeffs()[i] == 0) ++i;
  Rational lam(t0.coeffs()[i], a0.coeffs()[i]);
  lam.canonicalize();
  if (a0 * lam.get_num() == t0 * lam.get_den())
    rep.eigenvalue = lam;
  else if (rep.consistent)
    rep.note = "eigenvalue is not rational";
  return rep;
}

nlohmann::ordered_json eigen_report_json(const EigenReport& r) {
  nlohmann::ordered_json j;
  j["eigenvalue"] = r.eigenvalue ? nlohmann::ordered_json(r.eigenvalue->get_str()) : nlohmann::ordered_json();
  j["consistent"] = r.consistent;
  j["count"] = r.count;
  auto w = nlohmann::ordered_json::array();
  for (const auto& x : r.witnesses) {
    nlohmann::ordered_json e;
    e["N"] = x.index.N;
    e["R"] = x.index.R;
    e["M"] = x.index.M;
    e["transformed"] = x.transformed.coeffs_json();
    e["original"] = x.original.coeffs_json();
    w.push_back(std::move(e));
  }
  j["witnesses"] = std::move(w);
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

}  // namespace siegel
