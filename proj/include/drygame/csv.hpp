#pragma once

// Plain CSV with '.' decimals, LF line endings and 17 significant digits, so
// files written on different machines compare byte for byte.

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

namespace drygame::csv {

/// "%.17g", with inf / -inf / nan spelled out.
std::string number(double v);

class Writer {
 public:
  Writer(const std::filesystem::path& path, std::initializer_list<const char*> header);

  Writer& cell(double v);
  Writer& cell(long long v);
  Writer& cell(int v) { return cell(static_cast<long long>(v)); }
  Writer& cell(std::size_t v) { return cell(static_cast<long long>(v)); }
  Writer& cell(const std::string& v);
  void end_row();

 private:
  std::ofstream out_;
  bool first_ = true;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by name, throws std::out_of_range when missing.
  std::size_t column(const std::string& name) const;
};

/// Throws std::runtime_error when the file cannot be read or rows are ragged.
Table read(const std::filesystem::path& path);

/// Parses a number written by number(); accepts inf and nan.
double parse_number(const std::string& s);

}  // namespace drygame::csv
