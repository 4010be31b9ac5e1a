#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace nilesenti {

// Text container: `nilesenti-model v1`, `kind=<kind>`, then `[name]` headed
// sections of raw lines.
struct ModelFile {
  std::string kind;
  std::vector<std::pair<std::string, std::vector<std::string>>> sections;

  void add(std::string name, const std::string& body);
  const std::vector<std::string>& section(const std::string& name) const;
  std::string text(const std::string& name) const;
};

inline constexpr const char* kModelMagic = "nilesenti-model v1";

std::string render_model(const ModelFile& file);
ModelFile parse_model(std::istream& in, const std::string& source = "model");
ModelFile load_model(const std::string& path, const std::string& expected_kind);

// Flat `key = value` lines; blank lines and `#` comments skipped.
std::map<std::string, std::string> parse_key_values(std::span<const std::string> lines,
                                                    const std::string& source);
std::map<std::string, std::string> load_key_values(const std::string& path);

std::string hex_id(std::uint64_t id);

}  // namespace nilesenti
