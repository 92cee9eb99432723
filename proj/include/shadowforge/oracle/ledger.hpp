#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

namespace shadowforge {

struct QueryLogEntry {
  std::string timestamp;
  int batch_size = 0;
  std::string purpose;
};

/// Enforced query budget: atomic check-and-debit, all-or-nothing, append-only
/// log. `used` only ever grows, and always equals the sum of logged batches.
class QueryLedger {
 public:
  explicit QueryLedger(int64_t budget);
  static QueryLedger unlimited();

  /// Throws BudgetExhausted (leaving the ledger untouched) when n would
  /// overrun the budget; n must be positive.
  void debit(int n, const std::string& purpose);

  int64_t budget() const;
  int64_t used() const;
  int64_t remaining() const;
  bool is_unlimited() const;

  std::vector<QueryLogEntry> log() const;
  std::map<std::string, int64_t> totals_by_purpose() const;

  /// Deterministic snapshot for reports (timestamps withheld so reruns are
  /// byte-identical).
  nlohmann::json snapshot() const;

 private:
  QueryLedger(int64_t budget, bool unlimited);

  mutable std::mutex mutex_;
  int64_t budget_;
  bool unlimited_;
  int64_t used_ = 0;
  std::vector<QueryLogEntry> log_;
};

}  // namespace shadowforge
