#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace nra::tools {

struct BenchOutcome {
  std::string verdict;
  std::uint64_t conflicts = 0;
  std::uint64_t decisions = 0;
  std::uint64_t interpolant_clauses = 0;
};

struct BenchJob {
  std::string name;
  std::string kind;
  std::function<BenchOutcome()> run;
};

/// Runs every job in its own process, at most `parallel` at a time, killing
/// any that outlives `timeout_s` (0: no limit). Writes one CSV row per job,
/// in job order:
///   file,kind,verdict,time_ms,conflicts,decisions,interpolant_clauses
/// A killed job reports verdict `timeout`, a crashed one `error`.
void run_bench(const std::vector<BenchJob>& jobs, unsigned parallel, double timeout_s, std::ostream& csv);

}  // namespace nra::tools
