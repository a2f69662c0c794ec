#ifndef FSP_ACCEPTANCE_HPP
#define FSP_ACCEPTANCE_HPP

#include <ostream>

namespace fsp {

// Runs the full verification scoreboard at the canonical configuration
// (L = P1 = 1, R = 100, n = 8192, lambda = 0.4, T = 1): fourteen criteria,
// one PASS/FAIL line each with the measured numbers and the pinned
// tolerances, then a summary line.  Returns the number of failed criteria.
//
// Criteria that are physically unreachable at this resolution or window
// size are still measured and reported honestly; they fail rather than
// being weakened.
int run_acceptance(std::ostream& out);

}  // namespace fsp

#endif
