#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace shadowforge {

using CsvRow = std::vector<std::string>;

/// Minimal CSV with RFC-style quoting for cells containing , " or newline.
std::string csv_format(const std::vector<CsvRow>& rows);
std::vector<CsvRow> csv_parse(const std::string& text);

void csv_write(const std::filesystem::path& path, const std::vector<CsvRow>& rows);
std::vector<CsvRow> csv_read(const std::filesystem::path& path);

}  // namespace shadowforge
