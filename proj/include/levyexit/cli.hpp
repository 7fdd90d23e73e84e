#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace levyexit {

enum class Command { Factorize, TripleLaw, Exit, Vx, Vupx, Ux, Price, McCheck };
enum class OutputFormat { Json, Csv };

struct RunParams {
  double x = 1.0;
  double a = 1.0;
  double b = 1.0;
  std::optional<double> q;        // overrides the model's kill rate
  std::vector<double> lambdas;    // transform evaluation grid
  std::uint64_t paths = 1000000;
  std::uint64_t seed = 20240601;
  double step = 0.01;
  int workers = 0;
  int terms = 20;
  std::string quantity = "range";  // mc-check target
  double level = 0.0;             // threshold for CDF-type mc-check quantities
};

struct RunManifest {
  Command command = Command::Factorize;
  std::string model_path;
  std::string contract_path;
  std::string output_path;  // empty: standard output
  OutputFormat format = OutputFormat::Json;
  RunParams params;
};

Command parse_command(const std::string& name);
OutputFormat parse_format(const std::string& name);

/// Exit status 0 on success, 2 on input errors, 1 on numerical failures; an
/// error record {code, message} is written where the output would have gone.
int run(const RunManifest& manifest, std::ostream& out);

}  // namespace levyexit
