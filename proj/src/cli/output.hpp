#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mobsamp::cli {

/// "%.10g"; "inf" / "-inf" / "nan" for non-finite values.
std::string fmt(double v);

/// CSV with a header row and a provenance comment row (tool, command, seed,
/// config hash). LF line endings.
class CsvWriter {
 public:
  CsvWriter(std::vector<std::string> columns, const std::string& command, std::uint64_t seed, std::uint64_t hash);

  void row(const std::vector<std::string>& cells);
  void row(const std::vector<double>& values);
  std::string str() const { return text_; }

 private:
  std::size_t width_;
  std::string text_;
};

/// Writes `text` to dir/name, creating dir. No-op when dir is empty.
void write_file(const std::string& dir, const std::string& name, const std::string& text);

std::string hex64(std::uint64_t v);

}  // namespace mobsamp::cli
