#include <CLI11.hpp>

#include "cli.hpp"

int main(int argc, char** argv) {
  using namespace entlab::cli;
  CLI::App app{"entlab: compound states, entangled mutual information and channel capacities"};
  Options opt;
  std::uint64_t seed = 0;
  int samples = 0;
  double tol = 0.0;
  std::string out;

  app.add_option("task", opt.task, "task to run")->required()->check(CLI::IsMember(tasks()));
  app.add_option("--config", opt.config_path, "scenario JSON")->required();
  auto* seed_opt = app.add_option("--seed", seed, "sampler seed");
  auto* samples_opt = app.add_option("--samples", samples, "decompositions per ensemble size")->check(CLI::PositiveNumber);
  auto* tol_opt = app.add_option("--tol", tol, "ordering tolerance")->check(CLI::PositiveNumber);
  auto* out_opt = app.add_option("--out", out, "report path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidation;
  }
  if (*seed_opt) opt.seed = seed;
  if (*samples_opt) opt.samples = samples;
  if (*tol_opt) opt.tol = tol;
  if (*out_opt) opt.out_path = out;
  return run(opt, std::cout, std::cerr);
}
