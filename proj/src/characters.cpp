#include "siegel/characters.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

namespace siegel {

namespace {

long mod(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

bool is_odd_prime(long p) {
  if (p < 3 || p % 2 == 0) return false;
  for (long q = 3; q * q <= p; q += 2)
    if (p % q == 0) return false;
  return true;
}

void require_odd_prime(long p) {
  if (p == 2) throw CharacterError("p = 2 is excluded (Euler factors at 2 are not predicted)");
  if (!is_odd_prime(p)) throw CharacterError(std::to_string(p) + " is not an odd prime");
}

Integer ipow(long base, unsigned e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(std::labs(base)), e);
  if (base < 0 && (e & 1u)) r = -r;
  return r;
}

Rational scale_by_power(const Integer& v, long p, int nu) {
  Rational r(v);
  if (nu >= 0) return r * Rational(ipow(p, static_cast<unsigned>(nu)));
  return r / Rational(ipow(p, static_cast<unsigned>(-nu)));
}

Integer require_integer(const CycElt& c, const char* what) {
  if (!c.is_integer()) throw CharacterError(std::string(what) + " is not a rational integer: " + c.to_string());
  return c.coeffs()[0];
}

}  // namespace

// ---- quadratic characters ---------------------------------------------

int kronecker_value(QuadChar chi, long n) {
  if (n < 1) throw CharacterError("kronecker_value needs n >= 1");
  if (n % 2 == 0) return 0;
  const long r = n % 8;
  const int m1 = (r % 4 == 1) ? 1 : -1;           // (-4/n)
  const int p2 = (r == 1 || r == 7) ? 1 : -1;     // (8/n)
  switch (chi) {
    case QuadChar::chi_m1: return m1;
    case QuadChar::chi_2: return p2;
    case QuadChar::chi_m2: return m1 * p2;
  }
  return 0;
}

// ---- rho1 ---------------------------------------------------------------

const Integer& NewformQexp::coeff(long n) const {
  if (n < 1 || n > prec()) throw CharacterError("rho1 coefficient " + std::to_string(n) + " out of range");
  return a[n];
}

NewformQexp rho1_qexp(long prec) {
  if (prec < 1) throw CharacterError("rho1_qexp needs prec >= 1");
  NewformQexp f;
  f.a.assign(prec + 1, 0);
  f.a[1] = 1;
  auto times_one_minus = [&](long k) {
    for (long i = prec; i >= k; --i) f.a[i] -= f.a[i - k];
  };
  for (long n = 1; 2 * n <= prec; ++n)
    for (int e = 0; e < 4; ++e) times_one_minus(2 * n);
  for (long n = 1; 4 * n <= prec; ++n)
    for (int e = 0; e < 4; ++e) times_one_minus(4 * n);
  return f;
}

// ---- Gaussian integers and mu -------------------------------------------

Gaussian Gaussian::pow(unsigned k) const {
  Gaussian r{1, 0};
  for (unsigned i = 0; i < k; ++i) r = r * *this;
  return r;
}

std::string Gaussian::to_string() const {
  std::ostringstream os;
  os << re << (im < 0 ? "-" : "+") << abs(im) << "i";
  return os.str();
}

bool is_primary(const Gaussian& z) {
  // (z - 1) / (2 + 2i) = (z - 1)(2 - 2i) / 8
  const Integer x = z.re - 1, y = z.im;
  const Integer r = 2 * x + 2 * y, i = 2 * y - 2 * x;
  return r % 8 == 0 && i % 8 == 0;
}

GaussPrimeData gauss_prime_data(long p) {
  require_odd_prime(p);
  GaussPrimeData d;
  d.p = p;
  if (p % 4 == 3) {
    d.split = false;
    d.generators = {Gaussian{p, 0}};
    return d;
  }
  d.split = true;
  for (long a = 1; a * a < p; ++a) {
    const long b2 = p - a * a;
    const long b = static_cast<long>(std::llround(std::sqrt(static_cast<double>(b2))));
    if (b * b != b2) continue;
    const Gaussian units[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (const Gaussian& u : units) {
      const Gaussian z = u * Gaussian{a, b};
      if (is_primary(z)) {
        const Gaussian w = z.im > 0 ? z : z.conj();
        d.generators = {w, w.conj()};
        return d;
      }
    }
  }
  throw CharacterError("no primary generator found above " + std::to_string(p));
}

long ap_from_point_count(long p) {
  require_odd_prime(p);
  // number of y with y^2 = v is 1 + legendre(v)
  std::vector<int> sq(p, 0);
  for (long y = 0; y < p; ++y) ++sq[(y * y) % p];
  long count = 1;  // point at infinity
  for (long x = 0; x < p; ++x) count += sq[mod(x * x % p * x - x, p)];
  return p + 1 - count;
}

EulerFactor integer_factor(long p, const std::vector<Integer>& coeffs) {
  EulerFactor f;
  f.p = p;
  for (const auto& c : coeffs) f.coeffs.push_back(CycElt::integer(8, c));
  return f;
}

CycElt EulerFactor::trace() const { return degree() >= 1 ? -coeffs[1] : CycElt::zero(8); }

EulerFactor operator*(const EulerFactor& x, const EulerFactor& y) {
  if (x.p != y.p) throw CharacterError("Euler factors at different primes");
  EulerFactor r;
  r.p = x.p;
  r.shift = x.shift + y.shift;
  r.coeffs.assign(x.coeffs.size() + y.coeffs.size() - 1, CycElt::zero(8));
  for (size_t i = 0; i < x.coeffs.size(); ++i)
    for (size_t j = 0; j < y.coeffs.size(); ++j) r.coeffs[i + j] += x.coeffs[i] * y.coeffs[j];
  return r;
}

int mu_sign() {
  static const int sign = [] {
    const auto d = gauss_prime_data(5);
    const Integer t = d.generators[0].re + d.generators[1].re;
    const long a5 = ap_from_point_count(5);
    if (t == a5) return 1;
    if (t == -a5) return -1;
    throw CharacterError("mu calibration at p = 5 failed");
  }();
  return sign;
}

EulerFactor mu_euler(long p, int power) {
  require_odd_prime(p);
  if (power != 1 && power != 3) throw CharacterError("mu_euler power must be 1 or 3");
  const auto d = gauss_prime_data(p);
  if (!d.split) {
    // mu((p)) = -p
    return integer_factor(p, {1, 0, -ipow(-p, static_cast<unsigned>(power))});
  }
  const Integer s = mu_sign();
  const Gaussian x = d.generators[0].pow(static_cast<unsigned>(power));
  const Gaussian y = d.generators[1].pow(static_cast<unsigned>(power));
  const Integer tr = s * (x.re + y.re);
  return integer_factor(p, {1, -tr, ipow(p, static_cast<unsigned>(power))});
}

// ---- lambda ---------------------------------------------------------------

std::string LambdaSpec::to_string() const {
  return "eps(zeta8)=" + std::to_string(eps_zeta8) + " eps(1+sqrt2)=" + std::to_string(eps_unit) + " (a,b)=(" +
         std::to_string(a) + "," + std::to_string(b) + ")";
}

CycElt unit_1_plus_sqrt2() { return CycElt::from_poly(8, {1, 1, 0, -1}); }

CycElt lambda_infinity(const LambdaSpec& spec, const CycElt& x) {
  return x.galois(spec.a).pow(3) * x.galois(spec.b).pow(2) * x.galois(8 - spec.b);
}

std::pair<int, int> unit_log_mod2(const CycElt& alpha) {
  if (alpha.order() != 8) throw CharacterError("unit_log_mod2 needs an order-8 element");
  if (alpha.norm() % 2 == 0) throw CharacterError("element is not a unit mod 2: " + alpha.to_string());
  const CycElt u = unit_1_plus_sqrt2();
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 4; ++i) {
      const CycElt diff = alpha - CycElt::root(8, i) * u.pow(static_cast<unsigned>(j));
      bool even = true;
      for (const auto& c : diff.coeffs()) even = even && (c % 2 == 0);
      if (even) return {i, j};
    }
  throw CharacterError("no discrete logarithm mod 2 for " + alpha.to_string());
}

int lambda_finite(const LambdaSpec& spec, const CycElt& alpha) {
  const auto [i, j] = unit_log_mod2(alpha);
  int v = 1;
  for (int k = 0; k < i; ++k) v *= spec.eps_zeta8;
  for (int k = 0; k < j; ++k) v *= spec.eps_unit;
  return v;
}

std::vector<LambdaSpec> lambda_infinity_search(int eps_zeta8, int eps_unit) {
  std::vector<LambdaSpec> out;
  const CycElt one = CycElt::one(8);
  const CycElt units[2] = {CycElt::root(8, 1), unit_1_plus_sqrt2()};
  for (int a : {1, 3, 5, 7})
    for (int b : {1, 3, 5, 7}) {
      const bool a_real_pair = (a == 1 || a == 7);
      const bool b_real_pair = (b == 1 || b == 7);
      if (a_real_pair == b_real_pair) continue;
      LambdaSpec s{eps_zeta8, eps_unit, a, b};
      bool ok = true;
      for (const auto& u : units) {
        const CycElt v = lambda_infinity(s, u) * Integer(lambda_finite(s, u));
        ok = ok && (v == one);
      }
      if (ok) out.push_back(s);
    }
  if (out.empty()) throw CharacterError("no infinity type is trivial on the units");
  return out;
}

std::vector<CycElt> zeta8_primes_above(long p, int box) {
  require_odd_prime(p);
  const int f = (p % 8 == 1) ? 1 : 2;
  const Integer target = ipow(p, static_cast<unsigned>(f));
  const size_t expected = static_cast<size_t>(4 / f);
  for (int bound = 1; bound <= box; ++bound) {
    for (long a = -bound; a <= bound; ++a)
      for (long b = -bound; b <= bound; ++b)
        for (long c = -bound; c <= bound; ++c)
          for (long d = -bound; d <= bound; ++d) {
            const CycElt x = CycElt::from_poly(8, {a, b, c, d});
            if (x.is_zero() || x.norm() != target) continue;
            std::vector<CycElt> gens;
            for (int k : {1, 3, 5, 7}) {
              const CycElt y = x.galois(k);
              bool known = false;
              for (const auto& g : gens) known = known || g.divisible_by(y);
              if (!known) gens.push_back(y);
            }
            if (gens.size() != expected) continue;
            CycElt prod = CycElt::one(8);
            for (const auto& g : gens) prod *= g;
            if (prod.norm() != ipow(p, 4)) continue;
            return gens;
          }
  }
  throw CharacterError("no generator of norm " + target.get_str() + " with coefficients in [-" + std::to_string(box) +
                       "," + std::to_string(box) + "]; retry with a larger box");
}

CycElt lambda_value(const LambdaSpec& spec, const CycElt& generator) {
  return lambda_infinity(spec, generator) * Integer(lambda_finite(spec, generator));
}

// ---- predictions ----------------------------------------------------------

std::string form_name(Form f) {
  switch (f) {
    case Form::g1: return "g1";
    case Form::g4: return "g4";
    case Form::F5: return "F5";
    case Form::F6: return "F6";
  }
  return "?";
}

std::optional<Form> parse_form(const std::string& s) {
  for (Form f : {Form::g1, Form::g4, Form::F5, Form::F6})
    if (form_name(f) == s) return f;
  return std::nullopt;
}

std::string Calibration::to_string() const {
  return "nu=" + std::to_string(nu) + " s1=" + std::to_string(s1) + " s2=" + std::to_string(s2) +
         (calibrated ? "" : " (uncalibrated)");
}

EulerFactor g4_euler(long p, const PredictionContext& ctx) {
  require_odd_prime(p);
  const Integer chi = kronecker_value(QuadChar::chi_m2, p);
  const EulerFactor l1 = integer_factor(p, {1, -chi * ipow(p, static_cast<unsigned>(ctx.cal.s1))});
  const EulerFactor l2 = integer_factor(p, {1, -chi * ipow(p, static_cast<unsigned>(ctx.cal.s2))});
  const EulerFactor q = integer_factor(p, {1, -ctx.rho1.coeff(p), ipow(p, 3)});
  return l1 * l2 * q;
}

EulerFactor F5_euler(long p) { return mu_euler(p, 1) * mu_euler(p, 3); }

EulerFactor F6_euler(long p) {
  EulerFactor f = F5_euler(p);
  if (!gauss_prime_data(p).split) return f;
  // chi_-2(N P) = chi_-2(p) on the degree-1 primes: X -> chi_-2(p) X
  const Integer chi = kronecker_value(QuadChar::chi_m2, p);
  Integer c = 1;
  for (auto& x : f.coeffs) {
    x *= c;
    c *= chi;
  }
  return f;
}

Rational predict_eigenvalue(Form form, long p, const PredictionContext& ctx) {
  require_odd_prime(p);
  Integer v;
  switch (form) {
    case Form::g4:
      v = require_integer(g4_euler(p, ctx).trace(), "g4 prediction");
      break;
    case Form::F5:
      v = require_integer(F5_euler(p).trace(), "F5 prediction");
      break;
    case Form::F6:
      v = require_integer(F6_euler(p).trace(), "F6 prediction");
      break;
    case Form::g1: {
      CycElt sum = CycElt::zero(8);
      if (p % 8 == 1)
        for (const auto& g : zeta8_primes_above(p)) sum += lambda_value(ctx.lambda, g);
      v = require_integer(sum, "lambda sum");
      break;
    }
  }
  return scale_by_power(v, p, ctx.cal.nu);
}

Calibration calibrate_shift(const std::vector<Measurement>& measured, const NewformQexp& rho1) {
  std::vector<Measurement> g4;
  for (const auto& m : measured)
    if (m.form == Form::g4) g4.push_back(m);
  std::vector<long> primes;
  for (const auto& m : g4)
    if (std::find(primes.begin(), primes.end(), m.p) == primes.end()) primes.push_back(m.p);
  if (primes.size() < 2) throw CharacterError("calibration needs g4 eigenvalues at two distinct primes");

  std::vector<Calibration> hits;
  std::ostringstream table;
  table << "nu s1 s2 | residuals (measured - predicted) at";
  for (const auto& m : g4) table << " p=" << m.p;
  table << "\n";
  for (int nu = -4; nu <= 4; ++nu)
    for (auto [s1, s2] : {std::pair{0, 1}, std::pair{1, 2}, std::pair{2, 3}}) {
      PredictionContext ctx;
      ctx.cal = {nu, s1, s2, true};
      ctx.rho1 = rho1;
      bool all = true;
      table << nu << " " << s1 << " " << s2 << " |";
      for (const auto& m : g4) {
        const Rational r = m.eigenvalue - predict_eigenvalue(Form::g4, m.p, ctx);
        table << " " << r.get_str();
        all = all && (r == 0);
      }
      table << "\n";
      if (all) hits.push_back(ctx.cal);
    }
  if (hits.size() != 1)
    throw CharacterError(std::string(hits.empty() ? "no" : "several") + " calibrations fit the g4 data\n" + table.str());
  return hits.front();
}

std::vector<double> satake_moduli(const EulerFactor& f) {
  const int d = f.degree();
  if (d < 1) return {};
  std::vector<long double> c(d + 1);
  for (int i = 0; i <= d; ++i) c[i] = require_integer(f.coeffs[i], "Euler coefficient").get_d();
  if (c[d] == 0) throw CharacterError("Euler factor has a vanishing top coefficient");
  // inverse roots are the roots of Y^d + c1 Y^(d-1) + ... + cd
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) comp(0, i) = static_cast<double>(-c[i + 1]);
  for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  std::vector<double> out;
  for (int k = 0; k < d; ++k) {
    std::complex<long double> y(es.eigenvalues()[k].real(), es.eigenvalues()[k].imag());
    for (int it = 0; it < 8; ++it) {
      std::complex<long double> v = 1, dv = 0;
      for (int i = 1; i <= d; ++i) {
        dv = dv * y + v;
        v = v * y + c[i];
      }
      if (std::abs(dv) == 0) break;
      y -= v / dv;
    }
    out.push_back(static_cast<double>(std::abs(y)));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> satake_abs(long p, const PredictionContext& ctx) { return satake_moduli(g4_euler(p, ctx)); }

}  // namespace siegel
