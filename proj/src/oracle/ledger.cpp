#include "shadowforge/oracle/ledger.hpp"

#include "shadowforge/core/errors.hpp"
#include "shadowforge/synth/manifest.hpp"

namespace shadowforge {

QueryLedger::QueryLedger(int64_t budget) : QueryLedger(budget, false) {
  if (budget < 0) throw InvalidInput("QueryLedger: budget must be non-negative");
}

QueryLedger::QueryLedger(int64_t budget, bool unlimited)
    : budget_(budget), unlimited_(unlimited) {}

QueryLedger QueryLedger::unlimited() { return QueryLedger(0, true); }

void QueryLedger::debit(int n, const std::string& purpose) {
  if (n <= 0) throw InvalidInput("QueryLedger::debit: batch size must be positive");
  std::lock_guard lock(mutex_);
  if (!unlimited_ && used_ + n > budget_)
    throw BudgetExhausted("query budget exhausted: used " + std::to_string(used_) +
                          " of " + std::to_string(budget_) + ", requested " +
                          std::to_string(n));
  used_ += n;
  log_.push_back({iso8601_utc_now(), n, purpose});
}

int64_t QueryLedger::budget() const {
  std::lock_guard lock(mutex_);
  return budget_;
}

int64_t QueryLedger::used() const {
  std::lock_guard lock(mutex_);
  return used_;
}

int64_t QueryLedger::remaining() const {
  std::lock_guard lock(mutex_);
  return unlimited_ ? std::numeric_limits<int64_t>::max() : budget_ - used_;
}

bool QueryLedger::is_unlimited() const { return unlimited_; }

std::vector<QueryLogEntry> QueryLedger::log() const {
  std::lock_guard lock(mutex_);
  return log_;
}

std::map<std::string, int64_t> QueryLedger::totals_by_purpose() const {
  std::lock_guard lock(mutex_);
  std::map<std::string, int64_t> totals;
  for (const auto& e : log_) totals[e.purpose] += e.batch_size;
  return totals;
}

nlohmann::json QueryLedger::snapshot() const {
  std::lock_guard lock(mutex_);
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : log_)
    entries.push_back({{"batch_size", e.batch_size}, {"purpose", e.purpose}});
  std::map<std::string, int64_t> totals;
  for (const auto& e : log_) totals[e.purpose] += e.batch_size;
  return {{"budget", unlimited_ ? nlohmann::json(nullptr) : nlohmann::json(budget_)},
          {"used", used_},
          {"entries", std::move(entries)},
          {"totals_by_purpose", totals}};
}

}  // namespace shadowforge
