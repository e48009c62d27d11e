#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace thzo {

// Numeric CSV field: 12 significant digits.
std::string format_sig12(double v);

// Writes content to a temporary sibling file and renames it into place, so a
// result file is never observed half-written.
void write_text_atomic(const std::filesystem::path& path,
                       const std::string& content);

std::uint64_t fnv1a64(std::string_view s);
std::string hash_hex(std::uint64_t h);

// Result-file metadata header: comment-marker lines followed by a column list,
// then the data section. The data section parses independently of the header.
class MetadataHeader {
 public:
  void line(const std::string& text);                 // "# <text>"
  void kv(const std::string& key, const std::string& value);
  void kv(const std::string& key, double value);
  void config(const std::string& key, const std::string& value);
  void columns(const std::string& comma_separated);

  const std::vector<std::pair<std::string, std::string>>& config_entries() const {
    return config_;
  }
  std::string render() const;  // header lines incl. trailing newline

 private:
  std::vector<std::string> lines_;
  std::vector<std::pair<std::string, std::string>> config_;
  std::string columns_;
};

// Extracts "key = value" pairs back out of "# config: ..." header lines.
std::vector<std::pair<std::string, std::string>> parse_config_echo(
    const std::string& file_content);

// Strips header comment lines, returning only the data section.
std::string data_section(const std::string& file_content);

}  // namespace thzo
