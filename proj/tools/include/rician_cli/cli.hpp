#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rician/engine.hpp"

namespace rician::cli {

enum class Preset { none, fig1, fig2, fig3 };
enum class Format { csv, tsv };

struct CliConfig {
  Preset preset = Preset::none;
  SweepSpec sweep;
  std::string out_path;  // empty: standard output
  Format format = Format::csv;
  int verbosity = 0;
  int threads = 0;  // 0: all hardware threads
};

/// Thrown by parse() when --help is given; what() holds the usage text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Preset values: n = 168, epsilon = 1e-3, rho = 6 dB, ell in {2, 4, 7, 14, 21, 28, 42, 84}.
SweepSpec preset_spec(Preset preset);

/// Flags override the preset. Throws UsageError (bad or contradictory flags),
/// HelpRequested (--help).
CliConfig parse(int argc, const char* const* argv);

std::string header(Format format);

/// Writes the header and one line per row. Throws IoError if rows is empty or the stream fails.
void emit(const std::vector<ResultRow>& rows, Format format, std::ostream& out);
/// Writes to config.out_path (or standard output).
void emit(const std::vector<ResultRow>& rows, const CliConfig& config);

void print_summary(const RunResult& result, int verbosity, std::ostream& err);

/// Full command: parse, run, emit. Returns the process exit code.
int run_main(int argc, const char* const* argv, std::ostream& err);

}  // namespace rician::cli
