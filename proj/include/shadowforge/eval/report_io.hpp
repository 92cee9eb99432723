#pragma once

#include <filesystem>
#include <vector>

#include <json.hpp>

#include "shadowforge/eval/metrics.hpp"

namespace shadowforge {

/// Fixed-width decimal used everywhere a rate or attack knob is printed, so
/// report files are byte-stable across reruns.
std::string format_rate(double v);

nlohmann::json extraction_report_to_json(const ExtractionReport& rep);
nlohmann::json asr_report_to_json(const AsrReport& rep);

std::string extraction_reports_csv(const std::vector<ExtractionReport>& reps);
std::string asr_reports_csv(const std::vector<AsrReport>& reps);
std::string report_markdown(const std::vector<ExtractionReport>& extraction,
                            const std::vector<AsrReport>& asr);

/// Writes extraction.csv, asr.csv, report.json, and report.md into `dir`
/// (created if needed). `ledger_snapshot` is embedded in report.json; pass a
/// null json to omit it. Output contains no timestamps.
void emit_report(const std::filesystem::path& dir,
                 const std::vector<ExtractionReport>& extraction,
                 const std::vector<AsrReport>& asr,
                 const nlohmann::json& ledger_snapshot);

}  // namespace shadowforge
