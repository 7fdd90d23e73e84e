#include <CLI11.hpp>
#include <iostream>
#include <utility>

#include "levyexit/cli.hpp"
#include "levyexit/errors.hpp"
#include "levyexit/io.hpp"

int main(int argc, char** argv) {
  using namespace levyexit;
  CLI::App app{"Exit laws and double-barrier pricing for hyperexponential jump diffusions"};
  app.require_subcommand(1);

  RunManifest m;
  std::string format = "json";
  double q = 0.0;
  const std::pair<const char*, const char*> commands[] = {
      {"factorize", "Wiener-Hopf roots, factors and the downward ladder measure"},
      {"triple-law", "joint law of (X, inf, sup) on the range event at level x"},
      {"exit", "two-sided exit probabilities from (-a, b)"},
      {"vx", "first drawdown of size x"},
      {"vupx", "first drawup of size x"},
      {"ux", "first time the range reaches x"},
      {"price", "double-barrier knock-out call by Laplace inversion"},
      {"mc-check", "compare an analytic quantity against Monte Carlo"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--model", m.model_path, "model JSON file")->required();
    sub->add_option("--out", m.output_path, "output file (default: stdout)");
    sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--q", q, "kill rate overriding the model's kill_q");
    const std::string n = name;
    if (n == "triple-law" || n == "vx" || n == "vupx" || n == "ux" || n == "mc-check")
      sub->add_option("--x", m.params.x, "range / drawdown level");
    if (n == "exit" || n == "mc-check") {
      sub->add_option("--a", m.params.a, "lower barrier distance");
      sub->add_option("--b", m.params.b, "upper barrier distance");
    }
    if (n == "factorize" || n == "triple-law") sub->add_option("--lambda", m.params.lambdas, "evaluation grid");
    if (n == "price" || n == "mc-check") {
      sub->add_option("--contract", m.contract_path, "contract JSON file");
      sub->add_option("--terms", m.params.terms, "Euler averaging terms");
    }
    if (n == "mc-check") {
      sub->add_option("--quantity", m.params.quantity,
                      "range, vx, vupx, ux-top, ux-bottom, exit-up, exit-down, max, overshoot, ko, price");
      sub->add_option("--level", m.params.level, "threshold for max / overshoot CDFs");
      sub->add_option("--paths", m.params.paths, "number of paths");
      sub->add_option("--seed", m.params.seed, "RNG seed");
      sub->add_option("--step", m.params.step, "Brownian time step");
      sub->add_option("--workers", m.params.workers, "threads (0: all cores)");
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  for (auto* sub : app.get_subcommands()) m.command = parse_command(sub->get_name());
  m.format = parse_format(format);
  if (app.get_subcommands().front()->count("--q")) m.params.q = q;
  return run(m, std::cout);
}
