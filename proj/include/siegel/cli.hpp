// Command-line front end: expand, hecke, predict, verify, selftest.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or input error.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "siegel/characters.hpp"
#include "siegel/hecke.hpp"

namespace siegel::cli {

enum class Format { json, csv };

struct RunConfig {
  std::string command;
  std::string form = "g4";  // g1, g4, custom; predict also accepts F5, F6, all
  std::string factor_file;
  long prec = -1;  // -1: automatic where allowed
  std::vector<long> primes = {3, 5, 7};
  std::string output;  // path prefix; empty writes to stdout
  Format format = Format::json;
  long perturb_a3 = 0;  // added to a_3(rho1)
  std::string calibration_file;
};

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

/// Parses argv and dispatches; never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

int cmd_expand(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_hecke(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_predict(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_selftest(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Calibration metadata file: "key=value" lines.
std::string format_calibration(const Calibration& c);
Calibration parse_calibration(const std::string& text);

}  // namespace siegel::cli
