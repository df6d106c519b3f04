// Command line front end: argument parsing, env based thread cap, report
// printing, exit code pass-through.
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "genform/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"exact laboratory for generalized geometric structures on tori"};
  app.require_subcommand(1);

  gf::RunConfig cfg;
  std::string format = "json";
  double tol = 0.0;
  int trunc = 0, order = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tol", tol, "residual tolerance");
    sub->add_option("--trunc", trunc, "frequency cutoff |m|_inf");
    sub->add_option("--order", order, "highest solved power of t");
    sub->add_option("--seed", cfg.seed, "rng seed")->capture_default_str();
    sub->add_option("--format", format, "json or text")
        ->check(CLI::IsMember({"json", "text"}));
  };

  CLI::App* verify = app.add_subcommand("verify", "run the identity suites");
  verify->add_option("--suite", cfg.suite, "run a single suite");
  verify->add_option("--flip-suite", cfg.flip_suite, "inject a sign error, harness testing")
      ->group("");
  add_common(verify);

  CLI::App* analyze = app.add_subcommand("analyze", "fiber analysis of one structure");
  analyze->add_option("spec", cfg.input, "structure spec, json file or inline")->required();
  add_common(analyze);

  CLI::App* deform = app.add_subcommand("deform", "run a deformation job");
  deform->add_option("job", cfg.input, "job description, json file or inline")->required();
  add_common(deform);

  CLI::App* decompose = app.add_subcommand("decompose", "type decomposition of one structure");
  decompose->add_option("spec", cfg.input, "structure spec, json file or inline")->required();
  add_common(decompose);

  CLI::App* ddj = app.add_subcommand("ddj", "complex type scan of the differential");
  ddj->add_option("spec", cfg.input, "structure spec, defaults to the four torus volume");
  add_common(ddj);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? gf::kExitOk : gf::kExitConfig;
  }

  CLI::App* sub = app.get_subcommands().front();
  cfg.command = sub->get_name();
  if (sub->count("--tol")) cfg.tol = tol;
  if (sub->count("--trunc")) cfg.trunc = trunc;
  if (sub->count("--order")) cfg.order = order;

  try {
    gf::apply_thread_cap();
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return gf::kExitConfig;
  }

  gf::RunResult res = gf::run_command(cfg);
  if (format == "text")
    std::cout << gf::text_view(res.report);
  else
    std::cout << res.report << "\n";
  return res.exit_code;
}
