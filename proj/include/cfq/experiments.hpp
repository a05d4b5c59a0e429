#pragma once

#include "cfq/scenario.hpp"

#include <string>
#include <vector>

namespace cfq {

struct RunOutcome {
    std::vector<std::string> files_written;
    int points_total = 0;
    int points_failed = 0;
    bool ok() const { return points_failed == 0; }
};

// Executes the scenario and writes its CSV tables (plus plots when asked).
// Per-point solver failures are recorded in the rows and the manifest, not
// thrown, so partial sweeps still land on disk.
RunOutcome run(const Scenario& s);

// Cross-module consistency report: algebra spot checks, drift comparison,
// bistability anchors, the three-way g2 comparison, and the known
// discrepancies, as PASS/FAIL lines plus commentary.
std::string validation_report(const Scenario& s, int* fails_out = nullptr,
                              int* checks_out = nullptr);

} // namespace cfq
