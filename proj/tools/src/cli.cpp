#include "rician_cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "rician/errors.hpp"

namespace rician::cli {
namespace {

const std::vector<int> kFigureTicks = {2, 4, 7, 14, 21, 28, 42, 84};

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) throw UsageError("empty entry in list '" + text + "'");
    out.push_back(item);
  }
  if (out.empty()) throw UsageError("empty list");
  return out;
}

template <class T>
T parse_number(const std::string& s, const char* what) {
  std::size_t used = 0;
  T value{};
  try {
    if constexpr (std::is_same_v<T, int>) {
      value = std::stoi(s, &used);
    } else {
      value = std::stod(s, &used);
    }
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size()) throw UsageError(std::string("invalid ") + what + " '" + s + "'");
  return value;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

SweepSpec preset_spec(Preset preset) {
  SweepSpec spec;
  spec.n_total = 168;
  spec.rho_db = 6.0;
  spec.epsilon = 1e-3;
  switch (preset) {
    case Preset::none:
      break;
    case Preset::fig1:
      spec.ell_values = kFigureTicks;
      spec.kappa_values = {0.0, 1.0, 10.0, 100.0, 1000.0};
      spec.np_values = {0};
      spec.bounds = {BoundKind::dt, BoundKind::converse, BoundKind::normal_approx};
      break;
    case Preset::fig2:
    case Preset::fig3:
      spec.ell_values = kFigureTicks;
      spec.kappa_values = {preset == Preset::fig2 ? 0.0 : 10.0};
      spec.np_values = {0, 1, 2, 4, 6, 8};
      spec.bounds = {BoundKind::pilot_dt, BoundKind::converse};
      break;
  }
  return spec;
}

CliConfig parse(int argc, const char* const* argv) {
  CLI::App app{"Finite-blocklength rate bounds for Rician block-fading channels", "rician-fbl"};
  app.set_help_flag("-h,--help", "Print this help and exit");
  app.allow_extras(false);

  std::string preset = "none", ell, kappa, np, bound, format = "csv", out;
  int n = 0, verbose = 0, threads = 0;
  double rho_db = 0, epsilon = 0, tolerance = 0;
  long long samples = 0;
  std::uint64_t seed = 0;

  app.add_option("--preset", preset, "Figure preset")->check(CLI::IsMember({"fig1", "fig2", "fig3", "none"}));
  auto* o_n = app.add_option("--n", n, "Blocklength n = n_c * ell (default 168)");
  auto* o_ell = app.add_option("--ell", ell, "Comma list of diversity branches, or 'all'");
  auto* o_kappa = app.add_option("--kappa", kappa, "Comma list of Rician factors (linear)");
  auto* o_rho = app.add_option("--rho-db", rho_db, "SNR in dB (default 6)");
  auto* o_eps = app.add_option("--epsilon", epsilon, "Target error probability (default 1e-3)");
  auto* o_np = app.add_option("--np", np, "Comma list of pilot symbols per block (pilot-dt only)");
  auto* o_bound = app.add_option("--bound", bound, "Comma list of dt, converse, pilot-dt, normal-approx");
  auto* o_samples = app.add_option("--samples", samples, "Monte-Carlo samples per point (default 100000)");
  auto* o_seed = app.add_option("--seed", seed, "Master seed (default 1)");
  app.add_option("--out", out, "Output file (default: standard output)");
  app.add_option("--format", format, "csv or tsv")->check(CLI::IsMember({"csv", "tsv"}));
  auto* o_tol = app.add_option("--tolerance", tolerance, "Relative tolerance of the G-integral quadrature (default 1e-9)");
  app.add_flag("-v,--verbose", verbose, "Per-point timing and warnings on standard error (repeatable)");
  app.add_option("--threads", threads, "Worker threads (default: all cores)")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  CliConfig config;
  config.preset = preset == "fig1"   ? Preset::fig1
                  : preset == "fig2" ? Preset::fig2
                  : preset == "fig3" ? Preset::fig3
                                     : Preset::none;
  config.sweep = preset_spec(config.preset);
  SweepSpec& spec = config.sweep;

  if (o_n->count()) spec.n_total = n;
  if (o_ell->count()) {
    spec.ell_values.clear();
    if (ell != "all") {
      for (const auto& s : split(ell)) spec.ell_values.push_back(parse_number<int>(s, "ell"));
    }
  }
  if (o_kappa->count()) {
    spec.kappa_values.clear();
    for (const auto& s : split(kappa)) spec.kappa_values.push_back(parse_number<double>(s, "kappa"));
  }
  if (o_rho->count()) spec.rho_db = rho_db;
  if (o_eps->count()) spec.epsilon = epsilon;
  if (o_bound->count()) {
    spec.bounds.clear();
    for (const auto& s : split(bound)) {
      const BoundKind k = parse_bound_kind(s);
      if (std::find(spec.bounds.begin(), spec.bounds.end(), k) == spec.bounds.end()) spec.bounds.push_back(k);
    }
  }
  if (o_np->count()) {
    spec.np_values.clear();
    for (const auto& s : split(np)) spec.np_values.push_back(parse_number<int>(s, "n_p"));
  } else if (std::find(spec.bounds.begin(), spec.bounds.end(), BoundKind::pilot_dt) == spec.bounds.end()) {
    spec.np_values = {0};  // a preset's pilot list does not apply once pilot-dt is dropped
  }
  if (o_samples->count()) {
    if (samples < 0) throw UsageError("--samples must be >= 0");
    spec.samples = static_cast<std::size_t>(samples);
  }
  if (o_seed->count()) spec.master_seed = seed;
  if (o_tol->count()) spec.tolerance = tolerance;

  config.out_path = out;
  config.format = format == "tsv" ? Format::tsv : Format::csv;
  config.verbosity = verbose;
  config.threads = threads;

  expand(spec);  // validates the whole sweep, including divisibility of every ell
  return config;
}

std::string header(Format format) {
  const char d = format == Format::tsv ? '\t' : ',';
  std::string h;
  for (const char* col : {"ell", "n_c", "kappa", "n_p", "bound", "rate_bpcu", "stderr", "aux", "samples", "seed"}) {
    if (!h.empty()) h += d;
    h += col;
  }
  return h;
}

void emit(const std::vector<ResultRow>& rows, Format format, std::ostream& out) {
  if (rows.empty()) throw IoError("no result rows to write");
  const char d = format == Format::tsv ? '\t' : ',';
  out << header(format) << '\n';
  for (const auto& r : rows) {
    out << r.point.ell << d << r.point.n_c << d << format_number(r.point.kappa) << d << r.point.n_p << d
        << to_string(r.kind) << d << format_number(r.rate_bpcu) << d << format_number(r.stderr_rate) << d
        << (r.aux ? format_number(*r.aux) : std::string()) << d << r.samples << d << r.seed << '\n';
  }
  out.flush();
  if (!out) throw IoError("write failed");
}

void emit(const std::vector<ResultRow>& rows, const CliConfig& config) {
  if (config.out_path.empty()) {
    emit(rows, config.format, std::cout);
    return;
  }
  std::ofstream file(config.out_path);
  if (!file) throw IoError("cannot open '" + config.out_path + "' for writing");
  emit(rows, config.format, file);
}

void print_summary(const RunResult& result, int verbosity, std::ostream& err) {
  const auto& s = result.summary;
  if (verbosity > 0) {
    for (const auto& w : s.warnings) err << "warning: " << w << '\n';
    for (const auto& t : s.timings) {
      err << "  ell=" << t.point.ell << " kappa=" << t.point.kappa << " n_p=" << t.point.n_p << ": "
          << format_number(t.seconds) << " s\n";
    }
  }
  for (const auto& r : result.rows) {
    if (r.error) {
      err << "error: ell=" << r.point.ell << " kappa=" << r.point.kappa << " n_p=" << r.point.n_p << " "
          << to_string(r.kind) << ": " << *r.error << '\n';
    }
  }
  err << "rows " << result.rows.size() << ", skipped points " << s.skipped << ", failures " << s.failures
      << ", flagged " << s.flagged << ", wall " << format_number(s.wall_seconds) << " s\n";
}

int run_main(int argc, const char* const* argv, std::ostream& err) {
  CliConfig config;
  try {
    config = parse(argc, argv);
  } catch (const HelpRequested& h) {
    std::cout << h.what();
    return kExitOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  try {
    RunOptions options;
    options.workers = config.threads;
    const RunResult result = run(config.sweep, options);
    emit(result.rows, config);
    print_summary(result, config.verbosity, err);
    return result.summary.failures > 0 ? kExitFailure : kExitOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace rician::cli
