#include "siegel/cyclotomic.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>

namespace siegel {

namespace {

// Reduced images of zeta^k for 0 <= k < order, as small machine integers.
struct RootTable {
  unsigned order = 0;
  unsigned degree = 0;
  std::vector<std::vector<long>> powers;
};

std::mutex g_cache_mutex;
std::map<unsigned, std::vector<Integer>> g_poly_cache;
std::map<unsigned, std::shared_ptr<const RootTable>> g_table_cache;

// Exact division of polynomials with monic divisor.
std::vector<Integer> poly_div_monic(std::vector<Integer> num, const std::vector<Integer>& den) {
  const size_t dn = den.size() - 1;
  std::vector<Integer> q(num.size() - dn);
  for (size_t i = num.size(); i-- > dn;) {
    Integer c = num[i];
    q[i - dn] = c;
    if (c == 0) continue;
    for (size_t j = 0; j <= dn; ++j) num[i - dn + j] -= c * den[j];
  }
  for (size_t i = 0; i < dn; ++i)
    if (num[i] != 0) throw CyclotomicError("cyclotomic division left a remainder");
  return q;
}

std::vector<Integer> compute_cyclotomic(unsigned n) {
  // x^n - 1 divided by Phi_d for every proper divisor d.
  std::vector<Integer> p(n + 1);
  p[0] = -1;
  p[n] = 1;
  for (unsigned d = 1; d < n; ++d)
    if (n % d == 0) p = poly_div_monic(p, cyclotomic_polynomial(d));
  return p;
}

std::shared_ptr<const RootTable> root_table(unsigned order) {
  {
    std::lock_guard lock(g_cache_mutex);
    auto it = g_table_cache.find(order);
    if (it != g_table_cache.end()) return it->second;
  }
  const auto phi = cyclotomic_polynomial(order);
  auto t = std::make_shared<RootTable>();
  t->order = order;
  t->degree = static_cast<unsigned>(phi.size() - 1);
  const unsigned deg = t->degree;
  t->powers.assign(order, std::vector<long>(deg, 0));
  std::vector<long> cur(deg, 0);
  cur[0] = 1;
  for (unsigned k = 0; k < order; ++k) {
    t->powers[k] = cur;
    // cur *= zeta, then rewrite zeta^deg with the cyclotomic relation.
    long top = cur[deg - 1];
    for (unsigned i = deg - 1; i > 0; --i) cur[i] = cur[i - 1];
    cur[0] = 0;
    if (top != 0)
      for (unsigned i = 0; i < deg; ++i) cur[i] -= top * phi[i].get_si();
  }
  std::lock_guard lock(g_cache_mutex);
  return g_table_cache.emplace(order, std::move(t)).first->second;
}

long mod(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

unsigned euler_phi(unsigned n) {
  unsigned result = n;
  for (unsigned p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    while (n % p == 0) n /= p;
    result -= result / p;
  }
  if (n > 1) result -= result / n;
  return result;
}

std::vector<Integer> cyclotomic_polynomial(unsigned n) {
  if (n == 0) throw CyclotomicError("cyclotomic polynomial of order 0");
  {
    std::lock_guard lock(g_cache_mutex);
    auto it = g_poly_cache.find(n);
    if (it != g_poly_cache.end()) return it->second;
  }
  std::vector<Integer> p;
  if (n == 1)
    p = {-1, 1};
  else
    p = compute_cyclotomic(n);
  std::lock_guard lock(g_cache_mutex);
  return g_poly_cache.emplace(n, std::move(p)).first->second;
}

CycElt::CycElt(unsigned order) : order_(order) {
  if (order == 0) throw CyclotomicError("cyclotomic order must be positive");
  coeffs_.assign(euler_phi(order), 0);
}

CycElt CycElt::integer(unsigned order, const Integer& value) {
  CycElt r(order);
  r.coeffs_[0] = value;
  return r;
}

CycElt CycElt::root(unsigned order, long k) {
  auto t = root_table(order);
  CycElt r(order);
  const auto& v = t->powers[mod(k, order)];
  for (size_t i = 0; i < v.size(); ++i) r.coeffs_[i] = v[i];
  return r;
}

CycElt CycElt::from_exponents(unsigned order, const std::vector<Integer>& by_exp) {
  if (by_exp.size() != order) throw CyclotomicError("exponent vector length must equal the order");
  auto t = root_table(order);
  CycElt r(order);
  const unsigned deg = t->degree;
  for (unsigned k = 0; k < order; ++k) {
    const Integer& c = by_exp[k];
    if (c == 0) continue;
    if (k < deg) {
      r.coeffs_[k] += c;
      continue;
    }
    const auto& v = t->powers[k];
    for (unsigned i = 0; i < deg; ++i)
      if (v[i] != 0) r.coeffs_[i] += c * v[i];
  }
  return r;
}

CycElt CycElt::from_poly(unsigned order, const std::vector<Integer>& poly) {
  std::vector<Integer> slots(order);
  for (size_t i = 0; i < poly.size(); ++i) slots[i % order] += poly[i];
  return from_exponents(order, slots);
}

bool CycElt::is_zero() const {
  for (const auto& c : coeffs_)
    if (c != 0) return false;
  return true;
}

bool CycElt::is_integer() const {
  for (size_t i = 1; i < coeffs_.size(); ++i)
    if (coeffs_[i] != 0) return false;
  return true;
}

CycElt CycElt::operator-() const {
  CycElt r(*this);
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

CycElt& CycElt::operator+=(const CycElt& o) {
  if (o.order_ != order_) throw CyclotomicError("order mismatch in addition");
  for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

CycElt& CycElt::operator-=(const CycElt& o) {
  if (o.order_ != order_) throw CyclotomicError("order mismatch in subtraction");
  for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

CycElt& CycElt::operator*=(const CycElt& o) { return *this = *this * o; }

CycElt& CycElt::operator*=(const Integer& s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

CycElt operator*(const CycElt& a, const CycElt& b) {
  if (a.order_ != b.order_) throw CyclotomicError("order mismatch in multiplication");
  const unsigned n = a.order_;
  const size_t deg = a.coeffs_.size();
  std::vector<Integer> slots(n);
  for (size_t i = 0; i < deg; ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (size_t j = 0; j < deg; ++j) {
      if (b.coeffs_[j] == 0) continue;
      slots[(i + j) % n] += a.coeffs_[i] * b.coeffs_[j];
    }
  }
  return CycElt::from_exponents(n, slots);
}

CycElt CycElt::times_root(long k) const {
  std::vector<Integer> slots(order_);
  for (size_t i = 0; i < coeffs_.size(); ++i)
    if (coeffs_[i] != 0) slots[mod(static_cast<long>(i) + k, order_)] += coeffs_[i];
  return from_exponents(order_, slots);
}

CycElt CycElt::divexact(const Integer& d) const {
  if (d == 0) throw CyclotomicError("division by zero");
  CycElt r(order_);
  for (size_t i = 0; i < coeffs_.size(); ++i) {
    if (!mpz_divisible_p(coeffs_[i].get_mpz_t(), d.get_mpz_t()))
      throw CyclotomicError("inexact division of " + to_string() + " by " + d.get_str());
    mpz_divexact(r.coeffs_[i].get_mpz_t(), coeffs_[i].get_mpz_t(), d.get_mpz_t());
  }
  return r;
}

CycElt CycElt::pow(unsigned e) const {
  CycElt result = one(order_);
  CycElt base = *this;
  while (e) {
    if (e & 1u) result *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return result;
}

CycElt CycElt::galois(long k) const {
  if (std::gcd(mod(k, order_), static_cast<long>(order_)) != 1)
    throw CyclotomicError("Galois index must be coprime to the order");
  std::vector<Integer> slots(order_);
  for (size_t i = 0; i < coeffs_.size(); ++i)
    if (coeffs_[i] != 0) slots[mod(static_cast<long>(i) * k, order_)] += coeffs_[i];
  return from_exponents(order_, slots);
}

Integer CycElt::norm() const {
  CycElt prod = one(order_);
  for (unsigned k = 1; k < order_; ++k)
    if (std::gcd(k, order_) == 1) prod *= galois(k);
  if (!prod.is_integer()) throw CyclotomicError("norm did not descend to Q");
  return prod.coeffs_[0];
}

namespace {

// d^{-1} = cofactor / N(d), cofactor = product of the non-identity conjugates.
CycElt cofactor(const CycElt& d) {
  CycElt prod = CycElt::one(d.order());
  for (unsigned k = 2; k < d.order(); ++k)
    if (std::gcd(k, d.order()) == 1) prod *= d.galois(k);
  return prod;
}

}  // namespace

bool CycElt::divisible_by(const CycElt& d) const {
  if (d.is_zero()) return false;
  const Integer n = d.norm();
  const CycElt num = *this * cofactor(d);
  for (const auto& c : num.coeffs_)
    if (!mpz_divisible_p(c.get_mpz_t(), n.get_mpz_t())) return false;
  return true;
}

CycElt CycElt::divide_exact(const CycElt& d) const {
  if (d.is_zero()) throw CyclotomicError("division by zero");
  return (*this * cofactor(d)).divexact(d.norm());
}

std::complex<double> CycElt::embed(long k) const {
  if (std::gcd(mod(k, order_), static_cast<long>(order_)) != 1)
    throw CyclotomicError("embedding index must be coprime to the order");
  const long double two_pi = 6.283185307179586476925286766559L;
  long double re = 0, im = 0;
  for (size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    const long double ang = two_pi * static_cast<long double>(mod(static_cast<long>(i) * k, order_)) / order_;
    const long double c = coeffs_[i].get_d();
    re += c * std::cos(ang);
    im += c * std::sin(ang);
  }
  return {static_cast<double>(re), static_cast<double>(im)};
}

CycElt CycElt::lift(unsigned m) const {
  if (m % order_ != 0)
    throw CyclotomicError("cannot lift order " + std::to_string(order_) + " to " + std::to_string(m));
  const unsigned step = m / order_;
  std::vector<Integer> slots(m);
  for (size_t i = 0; i < coeffs_.size(); ++i) slots[i * step] = coeffs_[i];
  return from_exponents(m, slots);
}

CycElt CycElt::project(unsigned m) const {
  if (order_ % m != 0)
    throw CyclotomicError("cannot project order " + std::to_string(order_) + " to " + std::to_string(m));
  // Solve lift(b) = *this by exact elimination on the images of the order-m
  // basis, then confirm by lifting back.
  const size_t rows = coeffs_.size();
  const size_t cols = euler_phi(m);
  std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(cols + 1));
  for (size_t j = 0; j < cols; ++j) {
    const CycElt img = CycElt::root(m, static_cast<long>(j)).lift(order_);
    for (size_t i = 0; i < rows; ++i) a[i][j] = img.coeffs_[i];
  }
  for (size_t i = 0; i < rows; ++i) a[i][cols] = coeffs_[i];
  size_t r = 0;
  std::vector<size_t> pivot_col;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t piv = r;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const Rational f = a[i][c] / a[r][c];
      for (size_t k = c; k <= cols; ++k) a[i][k] -= f * a[r][k];
    }
    pivot_col.push_back(c);
    ++r;
  }
  CycElt b(m);
  for (size_t i = 0; i < pivot_col.size(); ++i) {
    const Rational v = a[i][cols] / a[i][pivot_col[i]];
    if (v.get_den() != 1)
      throw CyclotomicError("element is not integral over the order-" + std::to_string(m) + " subring");
    b.coeffs_[pivot_col[i]] = v.get_num();
  }
  if (!(b.lift(order_) == *this))
    throw CyclotomicError("residual content outside the order-" + std::to_string(m) +
                          " subfield: " + to_string());
  return b;
}

nlohmann::ordered_json CycElt::coeffs_json() const {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : coeffs_) arr.push_back(c.get_str());
  return arr;
}

nlohmann::ordered_json CycElt::to_json() const {
  nlohmann::ordered_json j;
  j["order"] = order_;
  j["coeffs"] = coeffs_json();
  return j;
}

CycElt CycElt::from_coeffs_json(unsigned order, const nlohmann::json& arr) {
  CycElt r(order);
  if (!arr.is_array() || arr.size() != r.coeffs_.size())
    throw CyclotomicError("coefficient array must have length phi(order)");
  for (size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_string()) throw CyclotomicError("coefficients must be decimal strings");
    r.coeffs_[i] = Integer(arr[i].get<std::string>());
  }
  return r;
}

CycElt CycElt::from_json(const nlohmann::json& j) {
  return from_coeffs_json(j.at("order").get<unsigned>(), j.at("coeffs"));
}

std::string CycElt::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    if (!first) os << (coeffs_[i] > 0 ? " + " : " - ");
    else if (coeffs_[i] < 0) os << "-";
    first = false;
    Integer mag = abs(coeffs_[i]);
    if (i == 0) {
      os << mag;
      continue;
    }
    if (mag != 1) os << mag << "*";
    os << "z" << order_;
    if (i > 1) os << "^" << i;
  }
  if (first) os << "0";
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const CycElt& a) { return os << a.to_string(); }

void RootAccumulator::add(long k, const Integer& c) { slots_[mod(k, order_)] += c; }

void RootAccumulator::add_scaled(const CycElt& a, long k, const Integer& scale) {
  if (order_ % a.order() != 0) throw CyclotomicError("accumulator order must be a multiple");
  const long step = order_ / a.order();
  const auto& cs = a.coeffs();
  for (size_t i = 0; i < cs.size(); ++i)
    if (cs[i] != 0) slots_[mod(static_cast<long>(i) * step + k, order_)] += cs[i] * scale;
}

}  // namespace siegel
