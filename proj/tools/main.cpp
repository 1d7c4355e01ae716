#include <CLI11.hpp>

#include "urnlab/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "urnlab: canonical block structure, growth rates and limit profile of "
      "balanced urn replacement matrices, with Monte Carlo verification"};
  app.require_subcommand(1);

  urnlab::AnalyzeOptions analyze_opts;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "Canonical form, clusters, rate pairs and limit profile");
  analyze->add_option("-i,--input", analyze_opts.input, "Input spec (JSON or CSV)")
      ->required();
  analyze->add_option("-o,--out", analyze_opts.output,
                      "Write the JSON report here (default: stdout)");

  urnlab::SimulateOptions sim_opts;
  CLI::App* simulate =
      app.add_subcommand("simulate", "Run urn replications and write CSV traces");
  simulate->add_option("-i,--input", sim_opts.input, "Input spec (JSON or CSV)")
      ->required();
  simulate->add_option("--steps", sim_opts.steps, "Draws per replication")
      ->capture_default_str();
  simulate->add_option("--reps", sim_opts.reps, "Number of replications")
      ->capture_default_str();
  simulate->add_option("--seed", sim_opts.seed, "Base seed; replication id picks the stream")
      ->capture_default_str();
  simulate
      ->add_option("--checkpoints", sim_opts.checkpoints,
                   "\"pow2\" or a comma-separated list of draw counts")
      ->capture_default_str();
  simulate->add_option("--threads", sim_opts.threads, "Worker threads (0 = hardware)")
      ->capture_default_str();
  simulate->add_option("--out", sim_opts.out_dir, "Output directory for CSV files")
      ->capture_default_str();

  urnlab::VerifyCmdOptions verify_opts;
  CLI::App* verify = app.add_subcommand(
      "verify", "Check predicted rates, directions and limits against simulation "
                "and the exact expectation oracle");
  verify->add_option("-i,--input", verify_opts.input, "Input spec (JSON or CSV)")
      ->required();
  verify->add_option("--steps", verify_opts.steps, "Draws per replication")
      ->capture_default_str();
  verify->add_option("--reps", verify_opts.reps, "Number of replications")
      ->capture_default_str();
  verify->add_option("--seed", verify_opts.seed, "Base seed")->capture_default_str();
  verify
      ->add_option("--checkpoints", verify_opts.checkpoints,
                   "\"pow2\" or a comma-separated list of draw counts")
      ->capture_default_str();
  verify->add_option("--threads", verify_opts.threads, "Worker threads (0 = hardware)")
      ->capture_default_str();
  verify->add_option("-o,--out", verify_opts.output, "Also write the JSON report here");
  verify
      ->add_option("--tolerance-direction", verify_opts.tolerances.tol_direction,
                   "Median direction angle (radians); also bounds stationary errors")
      ->capture_default_str();
  verify
      ->add_option("--tolerance-exponent", verify_opts.tolerances.tol_exponent,
                   "Allowed |fitted - predicted| for growth exponents")
      ->capture_default_str();
  verify
      ->add_option("--tolerance-ratio", verify_opts.tolerances.tol_ratio,
                   "Allowed deviation of V-hat ratios and zero-cluster limits")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : urnlab::kExitInputError;
  }

  if (analyze->parsed()) return urnlab::cmd_analyze(analyze_opts);
  if (simulate->parsed()) return urnlab::cmd_simulate(sim_opts);
  return urnlab::cmd_verify(verify_opts);
}
