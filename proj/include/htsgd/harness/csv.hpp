#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace htsgd {

class IoError : public std::runtime_error {
 public:
  IoError(const std::string& what, std::string path)
      : std::runtime_error(what + ": " + path), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// 12 significant digits, "%.12g".
std::string format_number(double v);

/// Comma-separated with LF line endings. Fields containing a comma or quote
/// are quoted.
std::string to_csv(const CsvTable& table);
void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& text);

void write_text(const std::string& path, const std::string& text);

}  // namespace htsgd
