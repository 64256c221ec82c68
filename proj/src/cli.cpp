#include "siegel/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

namespace siegel::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using ojson = nlohmann::ordered_json;

bool is_odd_prime(long p) {
  if (p < 3 || p % 2 == 0) return false;
  for (long q = 3; q * q <= p; q += 2)
    if (p % q == 0) return false;
  return true;
}

std::vector<long> parse_primes(const std::string& s) {
  std::vector<long> out;
  std::stringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    size_t used = 0;
    long p = 0;
    try {
      p = std::stol(tok, &used);
    } catch (const std::exception&) {
      throw UsageError("bad prime '" + tok + "'");
    }
    if (used != tok.size()) throw UsageError("bad prime '" + tok + "'");
    if (!is_odd_prime(p)) throw UsageError(std::to_string(p) + " is not an odd prime");
    out.push_back(p);
  }
  if (out.empty()) throw UsageError("empty prime list");
  return out;
}

FactorList load_factors(const RunConfig& cfg) {
  if (cfg.form == "g1") return g1_factors();
  if (cfg.form == "g4") return g4_factors();
  if (cfg.form == "custom") {
    if (cfg.factor_file.empty()) throw UsageError("--form custom requires --factors FILE");
    try {
      return read_factor_file(cfg.factor_file);
    } catch (const ThetaError& e) {
      throw UsageError(std::string("factor file: ") + e.what());
    }
  }
  throw UsageError("unknown form '" + cfg.form + "'");
}

void emit(const RunConfig& cfg, const std::string& suffix, const std::string& content, std::ostream& out) {
  if (cfg.output.empty()) {
    out << content;
    return;
  }
  const std::string path = cfg.output + suffix;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + path + "'");
  f << content;
}

std::string ext(const RunConfig& cfg) { return cfg.format == Format::json ? ".json" : ".csv"; }

std::string csv_coeffs(const CycElt& c) {
  std::string s;
  for (size_t i = 0; i < c.coeffs().size(); ++i) s += (i ? "," : "") + c.coeffs()[i].get_str();
  return s;
}

NewformQexp rho1_for(const RunConfig& cfg) {
  NewformQexp r = rho1_qexp(200);
  r.a[3] += cfg.perturb_a3;
  return r;
}

struct Measured {
  long p = 0;
  long prec = 0;
  int eps = -1;
  HeckeResult hecke;
  EigenReport report;
};

long leading_trace(const FactorList& factors) {
  for (long prec : {16L, 32L, 64L}) {
    const auto f = product_form(factors, prec);
    if (auto t = f.min_trace()) return *t;
  }
  return -1;
}

Measured measure(const FactorList& factors, long p, long prec, std::ostream& err) {
  Measured m;
  m.p = p;
  const long lead = leading_trace(factors);
  const long level = lead > 0 ? 2 * lead : 2;
  const long need = required_precision(p, level);
  if (prec >= 0 && prec < need)
    throw UsageError("prec " + std::to_string(prec) + " is insufficient for T(" + std::to_string(p) +
                     "): need at least " + std::to_string(need));
  m.prec = prec >= 0 ? prec : required_precision(p, level + 2);
  err << "[hecke] p=" << p << " expanding at prec " << m.prec << "\n";
  const auto f = product_form(factors, m.prec);
  m.eps = f.empty() ? -1 : twist_sign(factors);
  HeckeOptions opt;
  opt.twist_sign = m.eps;
  m.hecke = hecke_T(f, p, opt);
  m.report = extract_eigenvalue(f, m.hecke.series);
  err << "[hecke] p=" << p << " output prec " << m.hecke.series.prec() << ", eigenvalue "
      << (m.report.eigenvalue ? m.report.eigenvalue->get_str() : "none") << "\n";
  return m;
}

bool measurement_ok(const Measured& m) { return m.report.consistent && m.report.eigenvalue.has_value(); }

ojson measured_json(const std::string& form, const Measured& m) {
  ojson j;
  j["form"] = form;
  j["p"] = m.p;
  j["prec"] = m.prec;
  j["out_prec"] = m.hecke.series.prec();
  ojson rep = eigen_report_json(m.report);
  j["eigenvalue"] = rep["eigenvalue"];
  j["consistent"] = rep["consistent"];
  j["count"] = rep["count"];
  ojson norm;
  norm["modulus"] = 8;
  norm["target"] = "diag(1,1,p,p)";
  norm["reps"] = m.hecke.total_reps;
  norm["twisted_reps"] = m.hecke.twisted_reps;
  norm["twist_sign"] = m.eps;
  norm["off_lattice_checked"] = m.hecke.off_lattice_checked;
  j["rep_normalization"] = norm;
  j["witnesses"] = rep["witnesses"];
  if (rep.contains("note")) j["note"] = rep["note"];
  return j;
}

std::vector<Form> predict_forms(const std::string& s) {
  if (s == "all") return {Form::g1, Form::g4, Form::F5, Form::F6};
  if (auto f = parse_form(s)) return {*f};
  throw UsageError("predict supports g1, g4, F5, F6 or all, not '" + s + "'");
}

ojson calibration_json(const Calibration& c) {
  ojson j;
  j["nu"] = c.nu;
  j["s1"] = c.s1;
  j["s2"] = c.s2;
  j["status"] = c.calibrated ? "calibrated" : "uncalibrated";
  return j;
}

}  // namespace

std::string format_calibration(const Calibration& c) {
  std::ostringstream os;
  os << "nu=" << c.nu << "\n"
     << "s1=" << c.s1 << "\n"
     << "s2=" << c.s2 << "\n"
     << "status=" << (c.calibrated ? "calibrated" : "uncalibrated") << "\n";
  return os.str();
}

Calibration parse_calibration(const std::string& text) {
  Calibration c;
  std::map<std::string, std::string> kv;
  std::stringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  try {
    c.nu = std::stoi(kv.at("nu"));
    c.s1 = std::stoi(kv.at("s1"));
    c.s2 = std::stoi(kv.at("s2"));
  } catch (const std::exception&) {
    throw UsageError("calibration file needs nu, s1 and s2");
  }
  c.calibrated = kv.count("status") == 0 || kv["status"] == "calibrated";
  return c;
}

int cmd_expand(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.prec < 0) throw UsageError("expand needs --prec N with N >= 0");
  const auto factors = load_factors(cfg);
  err << "[expand] " << cfg.form << " at prec " << cfg.prec << "\n";
  const auto f = product_form(factors, cfg.prec);
  std::string body;
  if (cfg.format == Format::json) {
    ojson j;
    j["form"] = cfg.form;
    j["factors"] = format_factor_list(factors);
    j["series"] = f.to_json();
    body = j.dump(2) + "\n";
  } else {
    body = "N,R,M,c0,c1,c2,c3\n";
    for (const auto& [k, v] : f.terms())
      body += std::to_string(k.N) + "," + std::to_string(k.R) + "," + std::to_string(k.M) + "," + csv_coeffs(v) + "\n";
  }
  emit(cfg, ".series" + ext(cfg), body, out);
  return kOk;
}

int cmd_hecke(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto factors = load_factors(cfg);
  bool ok = true;
  ojson arr = ojson::array();
  std::string csv = "form,p,prec,out_prec,eigenvalue,consistent,count\n";
  for (long p : cfg.primes) {
    const Measured m = measure(factors, p, cfg.prec, err);
    ok = ok && (measurement_ok(m) || m.report.note == "original vanishes within the precision");
    arr.push_back(measured_json(cfg.form, m));
    csv += cfg.form + "," + std::to_string(p) + "," + std::to_string(m.prec) + "," +
           std::to_string(m.hecke.series.prec()) + "," +
           (m.report.eigenvalue ? m.report.eigenvalue->get_str() : "") + "," +
           (m.report.consistent ? "true" : "false") + "," + std::to_string(m.report.count) + "\n";
  }
  emit(cfg, ".hecke" + ext(cfg), cfg.format == Format::json ? arr.dump(2) + "\n" : csv, out);
  return ok ? kOk : kFail;
}

int cmd_predict(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  PredictionContext ctx;
  ctx.rho1 = rho1_for(cfg);
  if (!cfg.calibration_file.empty()) {
    std::ifstream in(cfg.calibration_file);
    if (!in) throw UsageError("cannot read calibration file '" + cfg.calibration_file + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    ctx.cal = parse_calibration(ss.str());
  }
  ojson rows = ojson::array();
  std::string csv = "form,p,predicted,euler_factor,calibration\n";
  const std::string label = ctx.cal.calibrated ? "calibrated" : "uncalibrated";
  for (Form form : predict_forms(cfg.form))
    for (long p : cfg.primes) {
      const Rational v = predict_eigenvalue(form, p, ctx);
      EulerFactor ef;
      switch (form) {
        case Form::g4: ef = g4_euler(p, ctx); break;
        case Form::F5: ef = F5_euler(p); break;
        case Form::F6: ef = F6_euler(p); break;
        case Form::g1: ef = integer_factor(p, {1, -v.get_num()}); break;
      }
      ojson coeffs = ojson::array();
      std::string cs;
      for (const auto& c : ef.coeffs) {
        coeffs.push_back(c.to_string());
        cs += (cs.empty() ? "" : " ") + c.to_string();
      }
      ojson r;
      r["form"] = form_name(form);
      r["p"] = p;
      r["predicted"] = v.get_str();
      r["euler_factor"] = form == Form::g1 ? ojson("linear term only") : coeffs;
      r["calibration"] = label;
      rows.push_back(std::move(r));
      csv += form_name(form) + "," + std::to_string(p) + "," + v.get_str() + "," +
             (form == Form::g1 ? std::string("linear term only") : cs) + "," + label + "\n";
    }
  ojson j;
  j["calibration"] = calibration_json(ctx.cal);
  j["predictions"] = rows;
  emit(cfg, ".predict" + ext(cfg), cfg.format == Format::json ? j.dump(2) + "\n" : csv, out);
  return kOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<Form> forms;
  if (cfg.form == "all") forms = {Form::g1, Form::g4};
  else if (cfg.form == "g1") forms = {Form::g1};
  else if (cfg.form == "g4") forms = {Form::g4};
  else throw UsageError("verify supports --form g1, g4 or all");

  PredictionContext ctx;
  ctx.rho1 = rho1_for(cfg);
  std::map<std::pair<int, long>, Measured> cache;
  auto get = [&](Form form, long p) -> const Measured& {
    auto key = std::pair{static_cast<int>(form), p};
    auto it = cache.find(key);
    if (it == cache.end())
      it = cache.emplace(key, measure(form == Form::g1 ? g1_factors() : g4_factors(), p, cfg.prec, err)).first;
    return it->second;
  };

  // calibration on g4 at p = 3, 5
  std::vector<Measurement> calib;
  for (long p : {3L, 5L}) {
    const Measured& m = get(Form::g4, p);
    if (!measurement_ok(m)) {
      err << "verify: g4 is not an eigenvector of T(" << p << "): " << m.report.note << "\n";
      return kFail;
    }
    calib.push_back({Form::g4, p, *m.report.eigenvalue});
  }
  try {
    ctx.cal = calibrate_shift(calib, ctx.rho1);
  } catch (const CharacterError& e) {
    err << "verify: calibration failed: " << e.what();
    return kFail;
  }
  err << "[verify] calibration " << ctx.cal.to_string() << "\n";

  bool all = true;
  ojson rows = ojson::array();
  std::string csv = "form,p,measured,predicted,match\n";
  for (Form form : forms)
    for (long p : cfg.primes) {
      const Measured& m = get(form, p);
      const Rational pred = predict_eigenvalue(form, p, ctx);
      const bool match = measurement_ok(m) && *m.report.eigenvalue == pred;
      all = all && match;
      const std::string meas = m.report.eigenvalue ? m.report.eigenvalue->get_str() : "none";
      ojson r;
      r["form"] = form_name(form);
      r["p"] = p;
      r["measured"] = meas;
      r["predicted"] = pred.get_str();
      r["match"] = match;
      rows.push_back(std::move(r));
      csv += form_name(form) + "," + std::to_string(p) + "," + meas + "," + pred.get_str() + "," +
             (match ? "true" : "false") + "\n";
    }

  ojson satake = ojson::array();
  for (long p : cfg.primes) {
    const auto got = satake_abs(p, ctx);
    std::vector<double> want = {double(p), std::pow(p, 1.5), std::pow(p, 1.5), double(p) * p};
    std::sort(want.begin(), want.end());
    bool ok = got.size() == 4;
    for (size_t i = 0; ok && i < 4; ++i) ok = std::abs(got[i] - want[i]) < 1e-9;
    all = all && ok;
    ojson s;
    s["p"] = p;
    ojson mods = ojson::array();
    for (double x : got) {
      std::ostringstream os;
      os.precision(12);
      os << x;
      mods.push_back(os.str());
    }
    s["moduli"] = mods;
    s["match"] = ok;
    satake.push_back(std::move(s));
    csv += "satake," + std::to_string(p) + ",,," + (ok ? "true" : "false") + "\n";
  }

  ojson j;
  j["calibration"] = calibration_json(ctx.cal);
  j["rows"] = rows;
  j["satake"] = satake;
  j["verdict"] = all ? "pass" : "fail";
  emit(cfg, ".verify" + ext(cfg), cfg.format == Format::json ? j.dump(2) + "\n" : csv, out);
  if (!cfg.output.empty()) emit(cfg, ".calibration.txt", format_calibration(ctx.cal), out);
  return all ? kOk : kFail;
}

int cmd_selftest(const RunConfig&, std::ostream& out, std::ostream&) {
  bool ok = true;
  auto check = [&](const std::string& name, bool pass) {
    out << (pass ? "PASS " : "FAIL ") << name << "\n";
    ok = ok && pass;
  };
  check("zeta8^5 = -zeta8", CycElt::root(8, 5) == -CycElt::root(8, 1));
  check("odd theta vanishes", theta_constant({{1, 0, 1, 0}, 1}, 40).empty());
  check("40 coset reps at p=3", coset_reps(3).size() == 40);
  const auto g4 = build_g4(40);
  HeckeOptions opt;
  opt.twist_sign = twist_sign(g4_factors());
  const auto rep = extract_eigenvalue(g4, hecke_T(g4, 3, opt).series);
  check("T(3) g4 = 8 g4", rep.consistent && rep.eigenvalue && *rep.eigenvalue == 8);
  check("a_3(rho1) = -4", rho1_qexp(10).coeff(3) == -4);
  return ok ? kOk : kFail;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact Hecke eigenvalue checks for theta-product Siegel cusp forms"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string primes = "3,5,7";
  std::string format = "json";

  std::vector<CLI::Option*> prec_opts, form_opts;
  auto add_common = [&](CLI::App* sub, bool with_factors) {
    form_opts.push_back(sub->add_option("--form", cfg.form, "g1, g4, custom (predict: g1, g4, F5, F6, all)"));
    if (with_factors) sub->add_option("--factors", cfg.factor_file, "factor file, one 'd:a,b,c,d' per line");
    prec_opts.push_back(sub->add_option("--prec", cfg.prec, "trace bound"));
    sub->add_option("--primes", primes, "comma-separated odd primes");
    sub->add_option("--out", cfg.output, "output path prefix (default: stdout)");
    sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };
  auto* expand = app.add_subcommand("expand", "write the q-expansion of a form");
  add_common(expand, true);
  auto* hecke = app.add_subcommand("hecke", "apply T(p) and extract the eigenvalue");
  add_common(hecke, true);
  auto* predict = app.add_subcommand("predict", "predicted eigenvalues from the Euler data");
  add_common(predict, false);
  predict->add_option("--calibration", cfg.calibration_file, "calibration metadata file");
  predict->add_option("--perturb-a3", cfg.perturb_a3, "add this to a_3(rho1)");
  auto* verify = app.add_subcommand("verify", "measure, calibrate and compare");
  add_common(verify, false);
  verify->add_option("--perturb-a3", cfg.perturb_a3, "add this to a_3(rho1)");
  auto* selftest = app.add_subcommand("selftest", "quick internal checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    cfg.format = format == "csv" ? Format::csv : Format::json;
    cfg.primes = parse_primes(primes);
    if (expand->parsed()) {
      cfg.command = "expand";
      return cmd_expand(cfg, out, err);
    }
    auto given = [](const std::vector<CLI::Option*>& opts) {
      for (auto* o : opts)
        if (o->count() > 0) return true;
      return false;
    };
    if (cfg.prec < -1 || (cfg.prec == -1 && given(prec_opts)))
      throw UsageError("--prec must be nonnegative");
    if (hecke->parsed()) {
      cfg.command = "hecke";
      return cmd_hecke(cfg, out, err);
    }
    if (predict->parsed()) {
      cfg.command = "predict";
      if (cfg.form == "custom") throw UsageError("predict has no prediction for custom forms");
      return cmd_predict(cfg, out, err);
    }
    if (verify->parsed()) {
      cfg.command = "verify";
      if (!given(form_opts)) cfg.form = "all";
      return cmd_verify(cfg, out, err);
    }
    if (selftest->parsed()) {
      cfg.command = "selftest";
      return cmd_selftest(cfg, out, err);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ThetaError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "verification error: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}

}  // namespace siegel::cli
