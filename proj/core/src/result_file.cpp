#include "thzorient/result_file.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace thzo {

std::string format_sig12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_text_atomic(const std::filesystem::path& path,
                       const std::string& content) {
  std::filesystem::create_directories(path.parent_path().empty()
                                          ? "."
                                          : path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    }
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void MetadataHeader::line(const std::string& text) { lines_.push_back(text); }

void MetadataHeader::kv(const std::string& key, const std::string& value) {
  lines_.push_back(key + " = " + value);
}

void MetadataHeader::kv(const std::string& key, double value) {
  kv(key, format_sig12(value));
}

void MetadataHeader::config(const std::string& key, const std::string& value) {
  config_.emplace_back(key, value);
}

void MetadataHeader::columns(const std::string& comma_separated) {
  columns_ = comma_separated;
}

std::string MetadataHeader::render() const {
  std::ostringstream out;
  for (const auto& l : lines_) out << "# " << l << "\n";
  for (const auto& [k, v] : config_) out << "# config: " << k << " = " << v << "\n";
  if (!columns_.empty()) out << "# columns: " << columns_ << "\n";
  return out.str();
}

std::vector<std::pair<std::string, std::string>> parse_config_echo(
    const std::string& file_content) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(file_content);
  std::string line;
  const std::string prefix = "# config: ";
  while (std::getline(in, line)) {
    if (line.rfind(prefix, 0) != 0) continue;
    const std::string rest = line.substr(prefix.size());
    const auto eq = rest.find(" = ");
    if (eq == std::string::npos) continue;
    out.emplace_back(rest.substr(0, eq), rest.substr(eq + 3));
  }
  return out;
}

std::string data_section(const std::string& file_content) {
  std::ostringstream out;
  std::istringstream in(file_content);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') continue;
    out << line << "\n";
  }
  return out.str();
}

}  // namespace thzo
