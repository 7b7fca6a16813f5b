#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace spinbound {

// A fully resolved experiment: subcommand plus validated key=value parameters.
// Unknown keys are rejected at construction; every run record embeds the
// resolved configuration and seed.
struct ExperimentConfig {
  std::string subcommand;  // bound | perc | resist | mc | lemmas
  std::map<std::string, std::string> params;

  double get_double(const std::string& key) const;
  long get_long(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  const std::string& get_string(const std::string& key) const;
  std::vector<int> get_int_list(const std::string& key) const;
  std::uint64_t seed() const;
  std::string output_path() const;
};

// Known keys and their defaults for a subcommand.
const std::map<std::string, std::string>& config_schema(
    const std::string& subcommand);

// Builds a config from (optional) flat key=value file plus overrides, filling
// defaults from the schema. Throws std::invalid_argument naming the first
// unknown key.
ExperimentConfig make_config(const std::string& subcommand,
                             const std::map<std::string, std::string>& overrides,
                             const std::string& config_file = "");

// Canonical form: sorted "key=value" lines, subcommand first.
std::string canonical_serialization(const ExperimentConfig& config);

// Parses flat key=value text (comments start with '#').
std::map<std::string, std::string> parse_flat_config(const std::string& text);

// CSV float format: 17 significant digits; throws NumericalError on NaN/Inf
// so no non-finite value ever reaches an artifact.
std::string csv_number(double v);

// Runs the experiment: writes the CSV artifact and a plain-text summary
// (output + ".summary.txt"). Throws on validation / numerical failure.
void run(const ExperimentConfig& config);

// Re-runs a recorded experiment; bitwise-identical CSV for matching version
// and seed. output_override, when nonempty, redirects the CSV path.
void replay(const std::string& summary_path,
            const std::string& output_override = "");

// main() body: parses argv, maps errors to exit codes
// (0 ok, 2 validation, 3 numerical failure).
int run_cli(int argc, char** argv);

}  // namespace spinbound
