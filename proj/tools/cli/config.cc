#include "cli/config.h"

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "prag/error.h"

namespace prag::cli {
namespace {

using json = nlohmann::json;

std::string config_key(const CLI::Option& opt) {
  const auto& names = opt.get_lnames();
  if (names.empty()) return {};
  std::string key = names.front();
  for (char& c : key) {
    if (c == '-') c = '_';
  }
  return key;
}

void collect_keys(const CLI::App& app, std::map<std::string, bool>& keys) {
  for (const CLI::Option* opt : app.get_options()) {
    const std::string key = config_key(*opt);
    if (!key.empty() && key != "help" && key != "config") keys[key] = true;
  }
  for (const CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; })) {
    collect_keys(*sub, keys);
  }
}

std::string scalar_text(const std::string& key, const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number()) return v.dump();
  throw_invalid_argument("config key '" + key +
                         "' must be a string, number, boolean or array");
}

void fill(CLI::App& app, const json& cfg) {
  for (CLI::Option* opt : app.get_options()) {
    const std::string key = config_key(*opt);
    if (key.empty() || opt->count() > 0) continue;
    auto it = cfg.find(key);
    if (it == cfg.end()) continue;
    std::vector<std::string> values;
    if (it->is_array()) {
      for (const auto& v : *it) values.push_back(scalar_text(key, v));
    } else {
      values.push_back(scalar_text(key, *it));
    }
    for (auto& v : values) opt->add_result(v);
    try {
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw_invalid_argument("config key '" + key + "': " + e.what());
    }
  }
}

}  // namespace

void apply_config_file(CLI::App& app, CLI::App& command,
                       const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_not_found("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  json cfg;
  try {
    cfg = json::parse(buf.str());
  } catch (const json::exception& e) {
    throw_invalid_argument("malformed config file " + path.string() + ": " +
                           e.what());
  }
  if (!cfg.is_object()) {
    throw_invalid_argument("config file must hold a JSON object");
  }
  std::map<std::string, bool> known;
  collect_keys(app, known);
  for (const auto& [key, value] : cfg.items()) {
    if (!known.count(key)) {
      throw_invalid_argument("unknown config key '" + key + "'");
    }
  }
  fill(app, cfg);
  fill(command, cfg);
}

}  // namespace prag::cli
