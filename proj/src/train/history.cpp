#include <cstdio>

#include "shadowforge/core/csv.hpp"
#include "shadowforge/core/errors.hpp"
#include "shadowforge/train/trainer.hpp"

namespace shadowforge {

namespace {
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}
}  // namespace

void save_history_csv(const std::filesystem::path& path, const History& history) {
  std::vector<CsvRow> rows;
  rows.push_back({"epoch", "lr", "train_loss", "train_acc"});
  for (const auto& h : history)
    rows.push_back({std::to_string(h.epoch), fmt(h.lr), fmt(h.train_loss), fmt(h.train_acc)});
  csv_write(path, rows);
}

History load_history_csv(const std::filesystem::path& path) {
  auto rows = csv_read(path);
  if (rows.empty() || rows[0] != CsvRow{"epoch", "lr", "train_loss", "train_acc"})
    throw IoError("load_history_csv: " + path.string() + " missing header");
  History history;
  for (size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != 4)
      throw IoError("load_history_csv: bad row in " + path.string());
    history.push_back({std::stoi(rows[i][0]), std::stod(rows[i][1]),
                       std::stod(rows[i][2]), std::stod(rows[i][3])});
  }
  return history;
}

}  // namespace shadowforge
