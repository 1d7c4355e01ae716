#include "urnlab/cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "urnlab/error.hpp"
#include "urnlab/report.hpp"

namespace urnlab {

namespace {

std::vector<std::uint64_t> parse_schedule(const std::string& text, std::uint64_t steps) {
  if (text == "pow2") return pow2_schedule(steps);
  std::vector<std::uint64_t> out;
  std::istringstream in(text);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    try {
      std::size_t pos = 0;
      const long long v = std::stoll(cell, &pos);
      if (pos != cell.size() || v < 1) throw std::invalid_argument(cell);
      out.push_back(static_cast<std::uint64_t>(v));
    } catch (const std::exception&) {
      throw InputError("parse", "invalid checkpoint list entry: \"" + cell + "\"");
    }
  }
  if (out.empty()) throw InputError("parse", "empty checkpoint list");
  for (std::uint64_t n : out) {
    if (n > steps) throw InputError("parse", "checkpoint beyond --steps");
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("parse", "cannot write output file: " + path);
  out << text;
}

int report_error(std::ostream& err, const std::exception& e) {
  if (const auto* input = dynamic_cast<const InputError*>(&e)) {
    err << "error[" << input->code() << "]: " << input->what() << "\n";
  } else {
    err << "error: " << e.what() << "\n";
  }
  return kExitInputError;
}

}  // namespace

int cmd_analyze(const AnalyzeOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const ReplacementSpec spec = load_spec_file(options.input);
    const Analysis analysis = analyze(spec);
    const std::string report = analysis_report_json(analysis);
    if (options.output.empty()) {
      out << report;
    } else {
      write_text_file(options.output, report);
      out << "analysis report written to " << options.output << "\n";
    }
    return kExitPass;
  } catch (const std::exception& e) {
    return report_error(err, e);
  }
}

int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const ReplacementSpec spec = load_spec_file(options.input);
    analyze(spec);  // surface structural problems before burning simulation time
    const auto schedule = parse_schedule(options.checkpoints, options.steps);

    const auto traces = run_replications(spec, options.steps, schedule, options.seed,
                                         options.reps, options.threads);

    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(options.out_dir, ec);
    if (ec) throw InputError("parse", "cannot create output directory: " + options.out_dir);

    for (const auto& trace : traces) {
      const std::string path =
          (fs::path(options.out_dir) /
           ("rep_" + std::to_string(trace.replication_id) + ".csv"))
              .string();
      std::ofstream file(path, std::ios::binary);
      if (!file) throw InputError("parse", "cannot write trace file: " + path);
      write_trace_csv(file, trace);
    }
    const std::string agg_path = (fs::path(options.out_dir) / "aggregate.csv").string();
    std::ofstream agg_file(agg_path, std::ios::binary);
    if (!agg_file) throw InputError("parse", "cannot write aggregate file: " + agg_path);
    write_aggregate_csv(agg_file, aggregate_traces(traces));

    out << options.reps << " replication(s) of " << options.steps << " draws written to "
        << options.out_dir << "\n";
    return kExitPass;
  } catch (const std::exception& e) {
    return report_error(err, e);
  }
}

int cmd_verify(const VerifyCmdOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const ReplacementSpec spec = load_spec_file(options.input);
    const Analysis analysis = analyze(spec);
    const auto schedule = parse_schedule(options.checkpoints, options.steps);

    const auto traces = run_replications(spec, options.steps, schedule, options.seed,
                                         options.reps, options.threads);
    const auto expectations = expectation_checkpoints(spec, schedule);

    const ConvergenceReport report = verify(analysis, traces, expectations, options.tolerances);

    for (const auto& c : report.exponents) {
      out << "exponent block " << (c.block + 1) << ": alpha " << c.alpha << " fitted "
          << c.alpha_hat << ", beta " << c.beta << " fitted " << c.beta_hat << " -> "
          << (!c.checked ? "SKIPPED" : (c.alpha_ok && c.beta_ok) ? "PASS" : "FAIL") << "\n";
    }
    for (const auto& c : report.directions) {
      out << "direction block " << (c.block + 1) << ": median angle " << c.median_angle
          << " -> " << (!c.checked ? "SKIPPED" : c.ok ? "PASS" : "FAIL") << "\n";
    }
    for (const auto& c : report.ratios) {
      out << "ratio cluster " << (c.cluster + 1) << ": w " << c.w << " oracle "
          << c.oracle_ratio << " path median " << c.path_median << " -> "
          << ((!c.oracle_checked && !c.path_checked)
                  ? "SKIPPED"
                  : ((!c.oracle_checked || c.oracle_ok) && (!c.path_checked || c.path_ok))
                        ? "PASS"
                        : "FAIL")
          << "\n";
    }
    for (const auto& c : report.zero_limits) {
      out << "zero-cluster block " << (c.block + 1) << ": relative error " << c.rel_error
          << " -> " << (!c.checked ? "SKIPPED" : c.ok ? "PASS" : "FAIL") << "\n";
    }
    if (report.stationary) {
      out << "stationary: oracle max err " << report.stationary->oracle_max_error
          << ", path median max err " << report.stationary->path_median_max_error
          << " -> " << (report.stationary->ok ? "PASS" : "FAIL") << "\n";
    }
    for (const auto& w : report.warnings) out << "note: " << w << "\n";
    out << (report.pass ? "verify: PASS" : "verify: FAIL") << "\n";

    if (!options.output.empty()) {
      write_text_file(options.output, convergence_report_json(report));
    }
    return report.pass ? kExitPass : kExitCheckFailure;
  } catch (const std::exception& e) {
    return report_error(err, e);
  }
}

}  // namespace urnlab
