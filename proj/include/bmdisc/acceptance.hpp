#ifndef BMDISC_ACCEPTANCE_HPP
#define BMDISC_ACCEPTANCE_HPP

#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace bmdisc {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;  // measured values against their pinned thresholds
};

using CriterionCallback = std::function<void(const CriterionResult&)>;

/**
 * Runs the full verification suite with pinned seeds and tolerances.  Each
 * criterion reports as it completes through `on_result` (may be empty).
 * A criterion that throws is reported as a failure, never skipped.
 *
 * The whole suite is deterministic; expect a few minutes on one core.
 */
std::vector<CriterionResult> run_acceptance(const CriterionCallback& on_result);

/** Failures only, as an array of {id, name, detail} objects. */
nlohmann::ordered_json failures_json(const std::vector<CriterionResult>& results);

}  // namespace bmdisc

#endif  // BMDISC_ACCEPTANCE_HPP
