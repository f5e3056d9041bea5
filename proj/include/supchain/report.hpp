#pragma once

#include <string>
#include <vector>

#include "supchain/montecarlo.hpp"

namespace supchain {

// Shortest decimal form that parses back to the identical double.
std::string format_double(double x);

// Sweep table serialization.  Fixed column set, one row per scale, repeated
// runs with the same config produce byte identical output.
inline constexpr const char* kSweepCsvHeader =
    "eps,b_eps,var_t0,entropy_sum,constant_C,theory_bound,"
    "empirical_prob,ci_low,ci_high,replicates,seed";

std::string sweep_csv(const std::vector<SweepRow>& rows);
std::vector<SweepRow> parse_sweep_csv(const std::string& text);

// Bound-only table (no Monte Carlo columns).
std::string bound_csv(const std::vector<SweepRow>& rows);

// Moment audit table.
std::string audit_csv(const std::vector<MomentAuditRow>& rows);

// Machine readable run summary: overall pass flag plus one entry per check.
std::string sweep_summary_json(const SupExperimentResult& result,
                               const std::vector<HypothesisCheck>& hypotheses,
                               const ExperimentConfig& config);

// Write with atomic-enough semantics for a CLI: temp file then rename.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace supchain
