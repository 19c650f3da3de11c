#include "sentreg/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sentreg/error.hpp"

namespace sentreg {

namespace {

std::string at_line(const std::string& source, std::size_t line) {
  return source + ":" + std::to_string(line);
}

}  // namespace

CsvTable CsvTable::parse(std::string_view content, std::string source) {
  CsvTable table;
  table.source_ = std::move(source);

  if (content.substr(0, 3) == "\xEF\xBB\xBF") content.remove_prefix(3);

  std::vector<CsvRecord> records;
  CsvRecord current;
  std::string field;
  std::size_t line = 1;
  std::size_t i = 0;
  bool record_open = false;
  bool field_quoted = false;

  auto end_field = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
    field_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    // A physically empty line carries no data.
    if (!(current.fields.size() == 1 && current.fields[0].empty())) records.push_back(std::move(current));
    current = CsvRecord{};
    record_open = false;
  };

  while (i < content.size()) {
    char c = content[i];
    if (!record_open) {
      current.line = line;
      record_open = true;
    }
    if (c == '"') {
      if (!field.empty() || field_quoted)
        throw InputError(at_line(table.source_, line) + ": malformed row: stray quote inside unquoted field");
      field_quoted = true;
      ++i;
      const std::size_t open_line = line;
      bool closed = false;
      while (i < content.size()) {
        char q = content[i];
        if (q == '"') {
          if (i + 1 < content.size() && content[i + 1] == '"') {
            field.push_back('"');
            i += 2;
            continue;
          }
          ++i;
          closed = true;
          break;
        }
        if (q == '\n') ++line;
        field.push_back(q);
        ++i;
      }
      if (!closed)
        throw InputError(at_line(table.source_, open_line) + ": malformed row: unterminated quoted field");
      if (i < content.size() && content[i] != ',' && content[i] != '\n' && content[i] != '\r')
        throw InputError(at_line(table.source_, line) + ": malformed row: text after closing quote");
      continue;
    }
    if (c == ',') {
      end_field();
      ++i;
      continue;
    }
    if (c == '\r' || c == '\n') {
      end_record();
      if (c == '\r' && i + 1 < content.size() && content[i + 1] == '\n') ++i;
      ++i;
      ++line;
      continue;
    }
    if (field_quoted)
      throw InputError(at_line(table.source_, line) + ": malformed row: text after closing quote");
    field.push_back(c);
    ++i;
  }
  if (record_open) end_record();

  if (records.empty()) throw InputError(table.source_ + ": missing header row");
  table.header_ = std::move(records.front().fields);
  for (auto& h : table.header_) h = std::string(trim(h));
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].fields.size() != table.header_.size()) {
      throw InputError(at_line(table.source_, records[r].line) + ": malformed row: expected " +
                       std::to_string(table.header_.size()) + " fields, found " +
                       std::to_string(records[r].fields.size()));
    }
    table.rows_.push_back(std::move(records[r]));
  }
  return table;
}

CsvTable CsvTable::read_file(const std::filesystem::path& path) {
  return parse(read_text_file(path), path.string());
}

std::optional<std::size_t> CsvTable::find_column(std::string_view name) const {
  for (std::size_t i = 0; i < header_.size(); ++i)
    if (header_[i] == name) return i;
  return std::nullopt;
}

std::size_t CsvTable::column(std::string_view name) const {
  if (auto idx = find_column(name)) return *idx;
  throw InputError(source_ + ": missing required column '" + std::string(name) + "'");
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string csv_line(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    out += csv_escape(fields[i]);
  }
  out.push_back('\n');
  return out;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";  // folds -0 as well
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

double parse_double(std::string_view text, std::string_view context) {
  std::string_view t = trim(text);
  double value = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (!t.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (t.empty() || ec != std::errc{} || ptr != last)
    throw InputError(std::string(context) + ": not a number: '" + std::string(text) + "'");
  return value;
}

long long parse_int(std::string_view text, std::string_view context) {
  std::string_view t = trim(text);
  long long value = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size())
    throw InputError(std::string(context) + ": not an integer: '" + std::string(text) + "'");
  return value;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) throw IoError("file not found: " + path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write: " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

}  // namespace sentreg
