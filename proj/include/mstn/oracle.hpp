#pragma once

#include <cstdint>

#include "mstn/instance.hpp"
#include "mstn/solve_report.hpp"
#include "mstn/subproblem.hpp"

namespace mstn {

struct OracleOptions {
  std::int64_t tree_cap = 10'000'000;
  double time_limit = 3600.0;
  SubproblemOptions subproblem;
};

// Proven optimum by exhausting every spanning tree and solving the placement
// problem on each, pruning trees whose min-length sum already meets the
// incumbent. Only for instances whose tree count fits under the cap.
SolveReport solve_enumerate(const Instance& instance, const OracleOptions& opts = {});

}  // namespace mstn
