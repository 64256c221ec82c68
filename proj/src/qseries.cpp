#include "siegel/qseries.hpp"

#include <unordered_map>
#include <utility>
#include <vector>

namespace siegel {

namespace {

void require_compatible(const FourierSeries& a, const FourierSeries& b, const char* op) {
  if (a.scale() != b.scale())
    throw SeriesError(std::string(op) + ": scale mismatch " + std::to_string(a.scale()) + " vs " +
                      std::to_string(b.scale()));
  if (a.root_order() != b.root_order())
    throw SeriesError(std::string(op) + ": root order mismatch " + std::to_string(a.root_order()) +
                      " vs " + std::to_string(b.root_order()));
}

using Sparse = std::vector<std::pair<unsigned, const mpz_class*>>;

Sparse nonzero_slots(const CycElt& c) {
  Sparse s;
  const auto& cs = c.coeffs();
  for (unsigned i = 0; i < cs.size(); ++i)
    if (cs[i] != 0) s.emplace_back(i, &cs[i]);
  return s;
}

}  // namespace

std::string QIndex::to_string() const {
  return "(" + std::to_string(N) + "," + std::to_string(R) + "," + std::to_string(M) + ")";
}

FourierSeries::FourierSeries(long prec, unsigned root_order, long scale)
    : prec_(prec), root_order_(root_order), scale_(scale) {
  if (prec < 0) throw SeriesError("negative precision");
  if (scale <= 0) throw SeriesError("scale must be positive");
}

void FourierSeries::add_term(const QIndex& idx, const CycElt& c) {
  if (!idx.is_psd()) throw SeriesError("index " + idx.to_string() + " is not positive semidefinite");
  if (c.order() != root_order_) throw SeriesError("coefficient root order mismatch");
  if (idx.trace() > prec_ || c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(idx, c);
  if (inserted) return;
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

CycElt FourierSeries::coefficient(const QIndex& idx) const {
  if (idx.trace() > prec_)
    throw SeriesError("index " + idx.to_string() + " lies beyond precision " + std::to_string(prec_));
  auto it = terms_.find(idx);
  return it == terms_.end() ? CycElt::zero(root_order_) : it->second;
}

const CycElt* FourierSeries::find(const QIndex& idx) const {
  auto it = terms_.find(idx);
  return it == terms_.end() ? nullptr : &it->second;
}

FourierSeries FourierSeries::truncated(long prec) const {
  FourierSeries out(std::min(prec, prec_), root_order_, scale_);
  for (const auto& [k, v] : terms_)
    if (k.trace() <= out.prec_) out.terms_.emplace_hint(out.terms_.end(), k, v);
  return out;
}

FourierSeries FourierSeries::operator-() const {
  FourierSeries out(*this);
  for (auto& [k, v] : out.terms_) v = -v;
  return out;
}

FourierSeries FourierSeries::scaled(const CycElt& c) const {
  FourierSeries out(prec_, root_order_, scale_);
  if (c.is_zero()) return out;
  for (const auto& [k, v] : terms_) {
    CycElt w = v * c;
    if (!w.is_zero()) out.terms_.emplace_hint(out.terms_.end(), k, std::move(w));
  }
  return out;
}

FourierSeries FourierSeries::scaled(const Integer& c) const {
  FourierSeries out(prec_, root_order_, scale_);
  if (c == 0) return out;
  for (const auto& [k, v] : terms_) out.terms_.emplace_hint(out.terms_.end(), k, v * c);
  return out;
}

FourierSeries FourierSeries::lifted(unsigned order) const {
  FourierSeries out(prec_, order, scale_);
  for (const auto& [k, v] : terms_) out.terms_.emplace_hint(out.terms_.end(), k, v.lift(order));
  return out;
}

FourierSeries FourierSeries::projected(unsigned order) const {
  FourierSeries out(prec_, order, scale_);
  for (const auto& [k, v] : terms_) {
    try {
      out.terms_.emplace_hint(out.terms_.end(), k, v.project(order));
    } catch (const CyclotomicError& e) {
      throw SeriesError("coefficient at " + k.to_string() + ": " + e.what());
    }
  }
  return out;
}

FourierSeries operator+(const FourierSeries& a, const FourierSeries& b) {
  require_compatible(a, b, "series_add");
  FourierSeries out = a.truncated(std::min(a.prec_, b.prec_));
  for (const auto& [k, v] : b.terms_) out.add_term(k, v);
  return out;
}

FourierSeries operator-(const FourierSeries& a, const FourierSeries& b) { return a + (-b); }

FourierSeries operator*(const FourierSeries& a, const FourierSeries& b) {
  require_compatible(a, b, "series_mul");
  const long prec = std::min(a.prec_, b.prec_);
  const unsigned n = a.root_order_;
  const FourierSeries& small = a.size() <= b.size() ? a : b;
  const FourierSeries& large = a.size() <= b.size() ? b : a;

  std::vector<std::pair<QIndex, Sparse>> inner;
  inner.reserve(large.size());
  for (const auto& [k, v] : large.terms_)
    if (k.trace() <= prec) inner.emplace_back(k, nonzero_slots(v));

  std::unordered_map<QIndex, std::vector<mpz_class>, QIndexHash> acc;
  for (const auto& [ka, va] : small.terms_) {
    if (ka.trace() > prec) continue;
    const Sparse sa = nonzero_slots(va);
    for (const auto& [kb, sb] : inner) {
      // inner terms are sorted by N, and M >= 0
      if (ka.N + kb.N + ka.M > prec) break;
      if (ka.trace() + kb.trace() > prec) continue;
      auto& slots = acc[ka + kb];
      if (slots.empty()) slots.resize(n);
      for (const auto& [i, x] : sa)
        for (const auto& [j, y] : sb) mpz_addmul(slots[(i + j) % n].get_mpz_t(), x->get_mpz_t(), y->get_mpz_t());
    }
  }

  FourierSeries out(prec, n, a.scale_);
  for (auto& [k, slots] : acc) {
    CycElt c = CycElt::from_exponents(n, slots);
    if (!c.is_zero()) out.terms_.emplace(k, std::move(c));
  }
  return out;
}

FourierSeries FourierSeries::rescale(long factor, Rescale direction) const {
  if (factor <= 0) throw SeriesError("rescale factor must be positive");
  if (direction == Rescale::refine) {
    FourierSeries out(prec_ * factor, root_order_, scale_ * factor);
    for (const auto& [k, v] : terms_)
      out.terms_.emplace_hint(out.terms_.end(), QIndex{k.N * factor, k.R * factor, k.M * factor}, v);
    return out;
  }
  if (scale_ % factor != 0)
    throw SeriesError("cannot coarsen scale " + std::to_string(scale_) + " by " + std::to_string(factor));
  FourierSeries out(prec_ / factor, root_order_, scale_ / factor);
  for (const auto& [k, v] : terms_) {
    if (k.N % factor || k.R % factor || k.M % factor)
      throw SeriesError("off-lattice term at " + k.to_string() + " under coarsening by " +
                        std::to_string(factor));
    out.terms_.emplace_hint(out.terms_.end(), QIndex{k.N / factor, k.R / factor, k.M / factor}, v);
  }
  return out;
}

std::optional<long> FourierSeries::min_trace() const {
  std::optional<long> best;
  for (const auto& [k, v] : terms_)
    if (!best || k.trace() < *best) best = k.trace();
  return best;
}

void FourierSeries::validate() const {
  for (const auto& [k, v] : terms_) {
    if (!k.is_psd()) throw SeriesError("stored index " + k.to_string() + " is not PSD");
    if (k.trace() > prec_) throw SeriesError("stored index " + k.to_string() + " exceeds precision");
    if (v.is_zero()) throw SeriesError("zero coefficient stored at " + k.to_string());
    if (v.order() != root_order_) throw SeriesError("root order mismatch at " + k.to_string());
  }
}

nlohmann::ordered_json FourierSeries::to_json() const {
  nlohmann::ordered_json j;
  j["scale"] = scale_;
  j["prec"] = prec_;
  j["root_order"] = root_order_;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& [k, v] : terms_) {
    nlohmann::ordered_json t;
    t["N"] = k.N;
    t["R"] = k.R;
    t["M"] = k.M;
    t["coeff"] = v.coeffs_json();
    arr.push_back(std::move(t));
  }
  j["terms"] = std::move(arr);
  return j;
}

FourierSeries FourierSeries::from_json(const nlohmann::json& j) {
  try {
    FourierSeries out(j.at("prec").get<long>(), j.at("root_order").get<unsigned>(), j.at("scale").get<long>());
    for (const auto& t : j.at("terms")) {
      QIndex k{t.at("N").get<long>(), t.at("R").get<long>(), t.at("M").get<long>()};
      out.add_term(k, CycElt::from_coeffs_json(out.root_order_, t.at("coeff")));
    }
    out.validate();
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw SeriesError(std::string("malformed series JSON: ") + e.what());
  }
}

}  // namespace siegel
