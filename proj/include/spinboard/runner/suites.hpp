#pragma once
// Named verification suites.

#include "spinboard/runner/config.hpp"
#include "spinboard/runner/records.hpp"

#include <ostream>
#include <vector>

namespace spinboard::runner {

struct SuiteResult {
  std::vector<Table> tables;
  std::vector<CheckRecord> records;
  bool hard_failure() const;
};

SuiteResult run_suite(const RunConfig& config);

// Runs the suite, writes <out>/<suite>_<table>.csv, <out>/<suite>_config.toml
// and appends to <out>/ledger.jsonl. Returns the process exit status.
int run(const RunConfig& config, std::ostream& log);

}  // namespace spinboard::runner
