#include "nilesenti/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "nilesenti/types.hpp"

namespace nilesenti {
namespace {

std::vector<std::string> split_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

bool is_section_header(const std::string& line) {
  return line.size() > 2 && line.front() == '[' && line.back() == ']' && line.find('\t') == std::string::npos &&
         line.find(' ') == std::string::npos;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

void ModelFile::add(std::string name, const std::string& body) {
  std::istringstream in(body);
  sections.emplace_back(std::move(name), split_lines(in));
}

const std::vector<std::string>& ModelFile::section(const std::string& name) const {
  for (const auto& [n, lines] : sections) {
    if (n == name) return lines;
  }
  throw Error(kind + " model: missing section [" + name + "]");
}

std::string ModelFile::text(const std::string& name) const {
  std::string out;
  for (const auto& l : section(name)) {
    out += l;
    out += '\n';
  }
  return out;
}

std::string render_model(const ModelFile& file) {
  std::string out = std::string(kModelMagic) + "\nkind=" + file.kind + "\n";
  for (const auto& [name, lines] : file.sections) {
    out += "[" + name + "]\n";
    for (const auto& l : lines) {
      if (is_section_header(l)) throw Error("section line looks like a header: " + l);
      out += l;
      out += '\n';
    }
  }
  return out;
}

ModelFile parse_model(std::istream& in, const std::string& source) {
  const auto lines = split_lines(in);
  if (lines.empty() || lines[0] != kModelMagic) throw Error(source + ": not a nilesenti model file");
  if (lines.size() < 2 || !lines[1].starts_with("kind=")) throw Error(source + ": line 2: expected kind=");
  ModelFile file;
  file.kind = lines[1].substr(5);
  for (std::size_t i = 2; i < lines.size(); ++i) {
    if (is_section_header(lines[i])) {
      file.sections.emplace_back(lines[i].substr(1, lines[i].size() - 2), std::vector<std::string>{});
    } else if (file.sections.empty()) {
      if (!lines[i].empty()) throw Error(source + ": line " + std::to_string(i + 1) + ": data before first section");
    } else {
      file.sections.back().second.push_back(lines[i]);
    }
  }
  return file;
}

ModelFile load_model(const std::string& path, const std::string& expected_kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model: " + path);
  ModelFile f = parse_model(in, path);
  if (f.kind != expected_kind) throw Error(path + ": expected a " + expected_kind + " model, found " + f.kind);
  return f;
}

std::map<std::string, std::string> parse_key_values(std::span<const std::string> lines, const std::string& source) {
  std::map<std::string, std::string> kv;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string line = trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(source + ": line " + std::to_string(i + 1) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw Error(source + ": line " + std::to_string(i + 1) + ": empty key");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

std::map<std::string, std::string> load_key_values(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open config: " + path);
  const auto lines = split_lines(in);
  return parse_key_values(lines, path);
}

std::string hex_id(std::uint64_t id) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(id));
  return buf;
}

}  // namespace nilesenti
