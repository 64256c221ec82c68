#include "siegel/theta.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace siegel {

namespace {

bool is_bit(int x) { return x == 0 || x == 1; }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int parse_int(const std::string& tok, size_t lineno) {
  const std::string t = trim(tok);
  size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (t.empty() || used != t.size())
    throw ThetaError("line " + std::to_string(lineno) + ": expected an integer, got '" + t + "'");
  return v;
}

}  // namespace

void Characteristic::check() const {
  if (!is_bit(a) || !is_bit(b) || !is_bit(c) || !is_bit(d))
    throw ThetaError("characteristic " + to_string() + " has entries outside {0,1}");
}

std::string Characteristic::to_string() const {
  return std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + "," + std::to_string(d);
}

void ThetaFactor::check() const {
  m.check();
  if (dilation != 1 && dilation != 2) throw ThetaError("dilation must be 1 or 2, got " + std::to_string(dilation));
}

std::string ThetaFactor::to_string() const { return std::to_string(dilation) + ":" + m.to_string(); }

bool is_odd_characteristic(const Characteristic& m) {
  m.check();
  return m.is_odd();
}

FourierSeries theta_constant(const ThetaFactor& f, long prec) {
  f.check();
  FourierSeries out(prec);
  const long d = f.dilation;
  const long bound = static_cast<long>(std::sqrt(static_cast<double>(prec) / d)) + 1;
  const CycElt units[4] = {CycElt::root(8, 0), CycElt::root(8, 2), CycElt::root(8, 4), CycElt::root(8, 6)};
  for (long u = -bound; u <= bound; ++u) {
    if (((u - f.m.a) & 1) != 0) continue;
    for (long v = -bound; v <= bound; ++v) {
      if (((v - f.m.b) & 1) != 0) continue;
      if (d * (u * u + v * v) > prec) continue;
      const long k = ((u * f.m.c + v * f.m.d) % 4 + 4) % 4;
      out.add_term({d * u * u, 2 * d * u * v, d * v * v}, units[k]);
    }
  }
  return out;
}

FourierSeries product_form(const FactorList& factors, long prec) {
  if (factors.empty()) throw ThetaError("empty factor list");
  for (const auto& f : factors) f.check();
  FourierSeries acc = theta_constant(factors.front(), prec);
  for (size_t i = 1; i < factors.size(); ++i) {
    if (acc.empty()) break;
    acc = acc * theta_constant(factors[i], prec);
  }
  return acc;
}

const FactorList& g1_factors() {
  static const FactorList list = {
      {{0, 0, 0, 0}, 2}, {{1, 0, 0, 0}, 1}, {{0, 1, 0, 0}, 1},
      {{0, 0, 1, 0}, 1}, {{0, 0, 1, 0}, 1}, {{0, 0, 0, 1}, 1},
  };
  return list;
}

const FactorList& g4_factors() {
  static const FactorList list = {
      {{0, 0, 0, 0}, 2}, {{1, 0, 0, 0}, 2}, {{0, 1, 0, 0}, 2},
      {{0, 0, 1, 0}, 1}, {{0, 0, 0, 1}, 1}, {{0, 0, 1, 1}, 1},
  };
  return list;
}

FourierSeries build_g1(long prec) { return product_form(g1_factors(), prec); }
FourierSeries build_g4(long prec) { return product_form(g4_factors(), prec); }

FactorList parse_factor_list(std::istream& in) {
  FactorList out;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos)
      throw ThetaError("line " + std::to_string(lineno) + ": expected 'd:a,b,c,d'");
    ThetaFactor f;
    f.dilation = parse_int(line.substr(0, colon), lineno);
    std::vector<int> ent;
    std::stringstream rest(line.substr(colon + 1));
    std::string tok;
    while (std::getline(rest, tok, ',')) ent.push_back(parse_int(tok, lineno));
    if (ent.size() != 4)
      throw ThetaError("line " + std::to_string(lineno) + ": characteristic needs 4 entries");
    f.m = {ent[0], ent[1], ent[2], ent[3]};
    try {
      f.check();
    } catch (const ThetaError& e) {
      throw ThetaError("line " + std::to_string(lineno) + ": " + e.what());
    }
    out.push_back(f);
  }
  if (out.empty()) throw ThetaError("factor list is empty");
  return out;
}

FactorList read_factor_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ThetaError("cannot open factor file '" + path + "'");
  return parse_factor_list(in);
}

std::string format_factor_list(const FactorList& factors) {
  std::string s;
  for (const auto& f : factors) s += f.to_string() + "\n";
  return s;
}

std::complex<double> theta_numeric(const ThetaFactor& f, const CMat2& Z, int radius) {
  f.check();
  const std::complex<double> two_pi_i(0.0, 2.0 * M_PI);
  const double d = f.dilation;
  std::complex<double> sum = 0;
  for (int x1 = -radius; x1 <= radius; ++x1) {
    for (int x2 = -radius; x2 <= radius; ++x2) {
      const double y1 = x1 + f.m.a / 2.0, y2 = x2 + f.m.b / 2.0;
      const std::complex<double> q = d * (y1 * y1 * Z[0][0] + 2.0 * y1 * y2 * Z[0][1] + y2 * y2 * Z[1][1]);
      const double ph = (y1 * f.m.c + y2 * f.m.d) / 2.0;
      sum += std::exp(two_pi_i * (q + ph));
    }
  }
  return sum;
}

std::complex<double> product_numeric(const FactorList& factors, const CMat2& Z, int radius) {
  std::complex<double> v = 1;
  for (const auto& f : factors) v *= theta_numeric(f, Z, radius);
  return v;
}

}  // namespace siegel
