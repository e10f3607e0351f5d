#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace gedge::cli {

enum class Command { cdf, mc, ginibre, abm, tails, verify };
enum class Format { csv, json };

/// Bad flags or values; the front end exits with status 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct GridSpec {
  double lo = 0.0;
  double hi = 0.0;
  double step = 1.0;
};

/// Parses "lo:hi:step" or a single value.
GridSpec parse_grid(const std::string& text);

struct RunConfig {
  Command command = Command::cdf;
  GridSpec t_grid;
  int n_nodes = 256;
  std::uint64_t n_paths = 1'000'000;
  std::uint64_t n_samples = 5000;
  int matrix_n = 128;
  double intensity = 16.0;
  double s = 1.0;
  double dt = 1e-3;
  std::uint64_t runs = 2000;
  double t_lo = -12.0;  ///< left-tail window for `tails`
  double t_hi = -6.0;
  std::uint64_t seed = 0;
  bool seed_given = false;
  unsigned workers = 1;
  bool quick = false;
  std::string output_path;  ///< empty or "-" writes to stdout
  Format format = Format::csv;

  /// Throws ConfigError on non-positive counts, an empty grid and similar.
  void validate() const;
};

/// Parses argv (argv[0] is the program name). Throws ConfigError on bad
/// input. Returns false with the help text written to `out` when help was
/// requested.
bool parse_args(int argc, const char* const* argv, RunConfig& config, std::ostream& out);

/// Executes a validated config. Exit status: 0 success, 1 numerical failure
/// or failed verification, 2 configuration error.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args followed by run, mapping every failure to an exit status.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

std::string to_string(Command c);

}  // namespace gedge::cli
