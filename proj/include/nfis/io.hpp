// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace nfis {

/// printf-style %.{significant}g.
std::string format_number(double value, int significant = 6);

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

struct FileRecord {
  std::string path;  // relative to the run directory
  std::string sha256;
  std::uintmax_t bytes = 0;
};

/// Output directory for one CLI run. Every file goes through write() so the
/// manifest can list it with its content hash.
class RunDirectory {
 public:
  explicit RunDirectory(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }
  const std::vector<FileRecord>& files() const { return files_; }

  void write(const std::string& relative_path, std::string_view content);

 private:
  std::filesystem::path root_;
  std::vector<FileRecord> files_;
};

}  // namespace nfis
