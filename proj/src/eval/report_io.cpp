#include "shadowforge/eval/report_io.hpp"

#include <cstdio>
#include <sstream>

#include "shadowforge/core/csv.hpp"
#include "shadowforge/core/image_io.hpp"

namespace shadowforge {

std::string format_rate(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

nlohmann::json extraction_report_to_json(const ExtractionReport& rep) {
  return nlohmann::json{{"dataset_id", rep.dataset_id},
                        {"target_arch", rep.target_arch},
                        {"substitute_arch", rep.substitute_arch},
                        {"budget", rep.budget},
                        {"queries_used", rep.queries_used},
                        {"eval_queries", rep.eval_queries},
                        {"target_test_accuracy", format_rate(rep.target_test_accuracy)},
                        {"substitute_test_accuracy", format_rate(rep.substitute_test_accuracy)},
                        {"agreement_rate", format_rate(rep.agreement_rate)},
                        {"seed", rep.seed},
                        {"ledger", rep.ledger_snapshot.is_null() ? nlohmann::json()
                                                                 : rep.ledger_snapshot}};
}

nlohmann::json asr_report_to_json(const AsrReport& rep) {
  return nlohmann::json{{"method", rep.method},
                        {"targeted", rep.targeted},
                        {"epsilon", format_rate(rep.epsilon)},
                        {"alpha", format_rate(rep.alpha)},
                        {"steps", rep.steps},
                        {"n_eligible", rep.n_eligible},
                        {"n_success", rep.n_success},
                        {"asr", format_rate(rep.asr)}};
}

std::string extraction_reports_csv(const std::vector<ExtractionReport>& reps) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"dataset_id", "target_arch", "substitute_arch", "budget",
                  "queries_used", "eval_queries", "target_test_accuracy",
                  "substitute_test_accuracy", "agreement_rate", "seed"});
  for (const auto& r : reps)
    rows.push_back({r.dataset_id, r.target_arch, r.substitute_arch,
                    std::to_string(r.budget), std::to_string(r.queries_used),
                    std::to_string(r.eval_queries), format_rate(r.target_test_accuracy),
                    format_rate(r.substitute_test_accuracy),
                    format_rate(r.agreement_rate), std::to_string(r.seed)});
  return csv_format(rows);
}

std::string asr_reports_csv(const std::vector<AsrReport>& reps) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"method", "targeted", "epsilon", "alpha", "steps", "n_eligible",
                  "n_success", "asr"});
  for (const auto& r : reps)
    rows.push_back({r.method, r.targeted ? "true" : "false", format_rate(r.epsilon),
                    format_rate(r.alpha), std::to_string(r.steps),
                    std::to_string(r.n_eligible), std::to_string(r.n_success),
                    format_rate(r.asr)});
  return csv_format(rows);
}

std::string report_markdown(const std::vector<ExtractionReport>& extraction,
                            const std::vector<AsrReport>& asr) {
  std::ostringstream md;
  md << "# Run report\n\n## Extraction\n\n";
  if (extraction.empty()) {
    md << "_No extraction cycles recorded._\n";
  } else {
    md << "| dataset | target | substitute | budget | used | target acc | "
          "substitute acc | agreement |\n";
    md << "|---|---|---|---:|---:|---:|---:|---:|\n";
    for (const auto& r : extraction)
      md << "| " << r.dataset_id << " | " << r.target_arch << " | "
         << r.substitute_arch << " | " << r.budget << " | " << r.queries_used
         << " | " << format_rate(r.target_test_accuracy) << " | "
         << format_rate(r.substitute_test_accuracy) << " | "
         << format_rate(r.agreement_rate) << " |\n";
  }
  md << "\n## Attack success\n\n";
  if (asr.empty()) {
    md << "_No attacks recorded._\n";
  } else {
    md << "| method | targeted | epsilon | alpha | steps | eligible | success | "
          "ASR |\n";
    md << "|---|---|---:|---:|---:|---:|---:|---:|\n";
    for (const auto& r : asr)
      md << "| " << r.method << " | " << (r.targeted ? "yes" : "no") << " | "
         << format_rate(r.epsilon) << " | " << format_rate(r.alpha) << " | "
         << r.steps << " | " << r.n_eligible << " | " << r.n_success << " | "
         << format_rate(r.asr) << " |\n";
  }
  return md.str();
}

void emit_report(const std::filesystem::path& dir,
                 const std::vector<ExtractionReport>& extraction,
                 const std::vector<AsrReport>& asr,
                 const nlohmann::json& ledger_snapshot) {
  std::filesystem::create_directories(dir);

  nlohmann::json j;
  j["schema_version"] = 1;
  j["extraction"] = nlohmann::json::array();
  for (const auto& r : extraction) j["extraction"].push_back(extraction_report_to_json(r));
  j["attacks"] = nlohmann::json::array();
  for (const auto& r : asr) j["attacks"].push_back(asr_report_to_json(r));
  if (!ledger_snapshot.is_null()) j["ledger"] = ledger_snapshot;

  write_file_atomic(dir / "extraction.csv", extraction_reports_csv(extraction));
  write_file_atomic(dir / "asr.csv", asr_reports_csv(asr));
  write_file_atomic(dir / "report.json", j.dump(2) + "\n");
  write_file_atomic(dir / "report.md", report_markdown(extraction, asr));
}

}  // namespace shadowforge
