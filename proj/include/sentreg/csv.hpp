#pragma once

// RFC 4180 reading/writing plus the file and number helpers every stage uses.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sentreg {

struct CsvRecord {
  std::size_t line = 0;  // 1-based line on which the record starts
  std::vector<std::string> fields;
};

class CsvTable {
 public:
  /// Parses `content`; the first record is the header. `source` labels errors.
  static CsvTable parse(std::string_view content, std::string source);
  static CsvTable read_file(const std::filesystem::path& path);

  const std::string& source() const noexcept { return source_; }
  const std::vector<std::string>& header() const noexcept { return header_; }
  const std::vector<CsvRecord>& rows() const noexcept { return rows_; }

  std::optional<std::size_t> find_column(std::string_view name) const;
  /// Index of a required column; throws InputError naming the column otherwise.
  std::size_t column(std::string_view name) const;

 private:
  std::string source_;
  std::vector<std::string> header_;
  std::vector<CsvRecord> rows_;
};

/// Quotes a field only when it contains a comma, quote, CR or LF.
std::string csv_escape(std::string_view field);
/// Joins fields into one CSV line terminated by '\n'.
std::string csv_line(const std::vector<std::string>& fields);

/// Shortest decimal text that parses back to the identical double.
std::string format_double(double value);
/// Strict full-field parse; `context` prefixes the InputError message.
double parse_double(std::string_view text, std::string_view context);
long long parse_int(std::string_view text, std::string_view context);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

std::string_view trim(std::string_view s);

}  // namespace sentreg
