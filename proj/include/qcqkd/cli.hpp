#pragma once

// Command-line front end: each sweep of the analysis maps to a command
// returning a Table, which is written as CSV or JSON.

#include "qcqkd/optimize.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace qcqkd::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitNumerical = 2,
  kExitVerifyFailed = 3,
};

/// Thrown for flag combinations that parse but make no sense together.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  /// Every input echoed back; written into the JSON metadata object.
  std::map<std::string, std::string> metadata;

  void add_row(std::vector<Cell> row);
};

/// Header row plus one line per row; doubles printed with 9 significant
/// digits.
void write_csv(const Table& table, std::ostream& out);
/// {"metadata": {...}, "columns": [...], "data": {column: [values...]}}.
void write_json(const Table& table, std::ostream& out);

struct RunConfig {
  std::string command;
  std::optional<std::string> scheme;  ///< bsqc | ssqc | subtraction | original
  std::optional<int> m;
  std::optional<int> n;
  std::optional<double> alpha;
  std::optional<double> variance;
  double beta = 0.95;
  double epsilon = 0.01;
  double atten_db_km = kDefaultAttenuationDbPerKm;
  /// "optimal" or a comma-separated list of transmittances; unset selects
  /// the command default.
  std::optional<std::string> t;
  double d_min = 0.0;
  double d_max = 300.0;
  double d_step = 10.0;
  double alpha_min = 0.0;
  double alpha_max = 3.0;
  double alpha_step = 0.1;
  double floor = kDefaultRateFloor;
  std::string out;  ///< empty writes to stdout
  std::string format = "csv";
  unsigned long long seed = 42;
  int samples = 8;              ///< extra random verify points
  std::optional<int> cutoff;    ///< fixed Fock cutoff for verify
  bool flip_bs_sign = false;
  double tolerance = 1e-6;      ///< verify pass threshold

  SourceParams source() const;
  std::map<std::string, std::string> echo() const;
};

/// Success probability versus alpha.
Table cmd_success_prob(const RunConfig& cfg);
/// Logarithmic negativity versus alpha, fixed or optimal T.
Table cmd_entanglement(const RunConfig& cfg);
/// Key rate versus distance with the PLOB bound.
Table cmd_keyrate(const RunConfig& cfg);
/// Maximal tolerable excess noise versus distance.
Table cmd_excess_noise(const RunConfig& cfg);
/// Longest distance above the key-rate floor per scheme.
Table cmd_max_distance(const RunConfig& cfg);

struct VerifyReport {
  Table table;  ///< quantity, max_abs_deviation, tolerance, status
  bool passed = false;
};

/// Oracle-versus-analytic comparison on the default grid plus seeded random
/// points.
VerifyReport cmd_verify(const RunConfig& cfg);

/// Parses argv, runs the command, writes the table. Returns an ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qcqkd::cli
