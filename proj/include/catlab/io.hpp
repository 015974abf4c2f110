#ifndef CATLAB_IO_HPP
#define CATLAB_IO_HPP

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace catlab {

/// 17-significant-digit formatting; parsing the result recovers the exact bits.
std::string format_double(double value);

/// Exact inverse of format_double.
double parse_double(const std::string& text);

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_string() const;
  static Csv parse(std::string_view text);
};

/// Writes through a sibling temp file and renames into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

/// FNV-1a over the bytes, hex-encoded; used for config and input fingerprints.
std::string content_hash(std::string_view bytes);

}  // namespace catlab

#endif
