#pragma once

#include <string>
#include <vector>

#include "tel/simplex.hpp"

namespace tel {

struct RunReport {
  std::string command;       // echo of the parsed invocation
  std::string status;        // ok | hypothesis-violation | budget-exceeded | usage-error
  std::string results_json;  // canonical JSON payload
  long timing_ms = 0;        // reported separately; not part of the canonical payload
  int exit_code = 0;
};

std::string profile_to_json(const TransfiniteProfile& p);
std::string profile_to_tsv(const TransfiniteProfile& p);

// Serialize with canonical key order; byte-identical across runs for identical
// inputs. Timing is opt-in (it would break determinism).
std::string serialize_report(const RunReport& r, const std::string& format,
                             bool with_timing = false);

// Route a token list to the module operations. Deterministic output ordering;
// exit code 0 iff status ok, 2 usage, 3 hypothesis violation, 4 budget.
RunReport dispatch(const std::vector<std::string>& argv);

}  // namespace tel
