#include "shadowforge/core/csv.hpp"

#include <fstream>
#include <sstream>

#include "shadowforge/core/errors.hpp"

namespace shadowforge {

namespace {

bool needs_quoting(const std::string& cell) {
  return cell.find_first_of(",\"\n\r") != std::string::npos;
}

std::string quote(const std::string& cell) {
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string csv_format(const std::vector<CsvRow>& rows) {
  std::string out;
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += needs_quoting(row[i]) ? quote(row[i]) : row[i];
    }
    out += '\n';
  }
  return out;
}

std::vector<CsvRow> csv_parse(const std::string& text) {
  std::vector<CsvRow> rows;
  CsvRow row;
  std::string cell;
  bool in_quotes = false;
  bool row_started = false;

  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        cell += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        row_started = true;
        break;
      case ',':
        row.push_back(std::move(cell));
        cell.clear();
        row_started = true;
        break;
      case '\r':
        break;
      case '\n':
        if (row_started || !cell.empty()) {
          row.push_back(std::move(cell));
          cell.clear();
          rows.push_back(std::move(row));
          row.clear();
          row_started = false;
        }
        break;
      default:
        cell += c;
        row_started = true;
    }
  }
  if (row_started || !cell.empty()) {
    row.push_back(std::move(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

void csv_write(const std::filesystem::path& path, const std::vector<CsvRow>& rows) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("csv_write: cannot open " + path.string());
  f << csv_format(rows);
  if (!f) throw IoError("csv_write: short write to " + path.string());
}

std::vector<CsvRow> csv_read(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("csv_read: cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return csv_parse(ss.str());
}

}  // namespace shadowforge
