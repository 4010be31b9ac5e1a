#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "nilesenti/cli.hpp"

namespace testing {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

inline CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliResult r;
  r.code = nilesenti::run_command(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

// Value of `key=` in a report block printed by the CLI, or "" when absent.
inline std::string report_value(const std::string& text, const std::string& key, const std::string& block = "") {
  std::istringstream in(text);
  bool inside = block.empty();
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line[0] == '#') {
      inside = block.empty() || line == "# " + block;
      continue;
    }
    if (inside && line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
  }
  return "";
}

}  // namespace testing
