#pragma once
#include <cstdint>
#include <string>
#include <vector>

namespace qss {

// Published result tables bundled next to what this library computes for the
// same configuration, so a build can be compared against the record in one
// pass. The computed column targets the published theoretical value; the
// experimental columns are context from the tabletop run, not a target.

struct ReproRow {
  std::string label;
  double published = 0.0;  // published reference value for the computed column
  double computed = 0.0;
  double delta = 0.0;  // computed - published
  double experimental = 0.0;
  double experimental_err = 0.0;
};

struct ReproTable {
  std::string name;
  std::string title;
  std::string note;
  std::vector<ReproRow> rows;
};

/// Table names accepted by reproduce_table, in report order:
/// det-pure, det-v072, stoch-v1, stoch-v047, tomo-fidelity.
std::vector<std::string> reproduce_table_names();

/// One table by name. The seed only affects the tomography table, which
/// simulates counting noise; the score tables are exact evaluations.
ReproTable reproduce_table(const std::string& name, uint64_t seed);

std::vector<ReproTable> reproduce_all(uint64_t seed);

std::string repro_csv(const ReproTable& table);
std::string repro_json(const std::vector<ReproTable>& tables);

}  // namespace qss
