#include "spinbound/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spinbound {

namespace {

std::map<std::string, std::string> common_schema() {
  return {
      {"alpha", "5"},      {"normalized", "true"}, {"amplitude", "1"},
      {"seed", "1"},       {"output", ""},
  };
}

std::map<std::string, std::string> schema_for(const std::string& sub) {
  auto s = common_schema();
  if (sub == "bound") {
    s.merge(std::map<std::string, std::string>{
        {"beta", "1"},        {"interaction", "xy"}, {"R", "1024"},
        {"constraint", "warmup"}, {"c3", "0"},       {"epsilon", "0.05"},
        {"cutoff", "16"},     {"coeffs", ""},
    });
  } else if (sub == "perc") {
    s.merge(std::map<std::string, std::string>{
        {"rho", "0.05"},     {"R", "64"},   {"M", "0"},
        {"replicas", "100000"}, {"experiment", "tails"}, {"c3", "-1"},
        {"cutoff", "16"},    {"kmax", "32"},
    });
  } else if (sub == "resist") {
    s.merge(std::map<std::string, std::string>{
        {"epsilon", "0.01"}, {"x-list", "8,16,32,64"}, {"M", "0"},
        {"replicas", "200"}, {"tol", "1e-8"},          {"cutoff", "4"},
        {"c-tilde", "0"},
    });
  } else if (sub == "mc") {
    s.merge(std::map<std::string, std::string>{
        {"beta", "0.5"},     {"interaction", "xy"}, {"M", "64"},
        {"x-list", "2,4,8,16,32"}, {"sweeps", "100000"}, {"burn-in", "5000"},
        {"boundary", "const"},     {"boundary-angle", "0"},
        {"cutoff", "8"},     {"c3", "0"},          {"epsilon", "0.05"},
        {"coeffs", ""},
    });
  } else if (sub == "lemmas") {
    s.merge(std::map<std::string, std::string>{{"kmax", "10000"}});
  } else {
    throw std::invalid_argument("unknown subcommand '" + sub + "'");
  }
  return s;
}

}  // namespace

const std::map<std::string, std::string>& config_schema(
    const std::string& subcommand) {
  static std::map<std::string, std::map<std::string, std::string>> cache;
  auto it = cache.find(subcommand);
  if (it == cache.end())
    it = cache.emplace(subcommand, schema_for(subcommand)).first;
  return it->second;
}

std::map<std::string, std::string> parse_flat_config(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("malformed config line: " + line);
    out[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return out;
}

ExperimentConfig make_config(
    const std::string& subcommand,
    const std::map<std::string, std::string>& overrides,
    const std::string& config_file) {
  const auto& schema = config_schema(subcommand);
  ExperimentConfig cfg;
  cfg.subcommand = subcommand;
  cfg.params = schema;

  auto apply = [&](const std::map<std::string, std::string>& kv,
                   const std::string& origin) {
    for (const auto& [key, value] : kv) {
      if (schema.find(key) == schema.end())
        throw std::invalid_argument("unknown key '" + key + "' (" + origin +
                                    ") for subcommand " + subcommand);
      cfg.params[key] = value;
    }
  };
  if (!config_file.empty()) {
    std::ifstream in(config_file);
    if (!in) throw std::invalid_argument("cannot open config file " + config_file);
    std::ostringstream text;
    text << in.rdbuf();
    apply(parse_flat_config(text.str()), config_file);
  }
  apply(overrides, "flag");  // flags override file values
  if (cfg.params["output"].empty())
    cfg.params["output"] = "spinbound_" + subcommand + ".csv";
  return cfg;
}

double ExperimentConfig::get_double(const std::string& key) const {
  const auto it = params.find(key);
  if (it == params.end()) throw std::invalid_argument("missing key " + key);
  try {
    size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("key '" + key + "' is not a number: " +
                                it->second);
  }
}

long ExperimentConfig::get_long(const std::string& key) const {
  const double v = get_double(key);
  const long l = static_cast<long>(v);
  if (static_cast<double>(l) != v)
    throw std::invalid_argument("key '" + key + "' is not an integer");
  return l;
}

bool ExperimentConfig::get_bool(const std::string& key) const {
  const auto& v = get_string(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("key '" + key + "' is not a boolean: " + v);
}

const std::string& ExperimentConfig::get_string(const std::string& key) const {
  const auto it = params.find(key);
  if (it == params.end()) throw std::invalid_argument("missing key " + key);
  return it->second;
}

std::vector<int> ExperimentConfig::get_int_list(const std::string& key) const {
  const auto& v = get_string(key);
  std::vector<int> out;
  std::istringstream in(v);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stoi(item));
  }
  if (out.empty())
    throw std::invalid_argument("key '" + key + "' is an empty list");
  return out;
}

std::uint64_t ExperimentConfig::seed() const {
  return static_cast<std::uint64_t>(std::stoull(get_string("seed")));
}

std::string ExperimentConfig::output_path() const {
  return get_string("output");
}

std::string canonical_serialization(const ExperimentConfig& config) {
  std::ostringstream out;
  out << "subcommand=" << config.subcommand << "\n";
  for (const auto& [key, value] : config.params)  // std::map: sorted
    out << key << "=" << value << "\n";
  return out.str();
}

}  // namespace spinbound
