#ifndef FRONTLAB_ERRORS_HPP
#define FRONTLAB_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace frontlab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Speed bracket does not exhibit the shooting dichotomy.
struct BracketFailure : Error { using Error::Error; };
// Iterative solve exceeded its iteration cap.
struct NonConvergence : Error { using Error::Error; };
// Adaptive ODE integration could not meet tolerance.
struct StepFailure : Error { using Error::Error; };
// Tridiagonal system singular; cannot occur for dt > 0, reported defensively.
struct LinearSolveFailure : Error { using Error::Error; };
// Window shift would move the interface out of the window.
struct ShiftTooLarge : Error { using Error::Error; };
// Requested level is not attained on the window.
struct LevelOutOfRange : Error { using Error::Error; };
// Every node lies below the envelope floor.
struct AllBelowFloor : Error { using Error::Error; };
// |u_x| at the interface below the speed-formula floor.
struct DegenerateSlope : Error { using Error::Error; };
// Bistable companion fails the positive-integral condition.
struct IntegralNonPositive : Error { using Error::Error; };
// No admissible comparison speed found within the search cap.
struct NoAdmissibleC : Error { using Error::Error; };
// No admissible propagation delay found within the cap.
struct NoAdmissibleDelay : Error { using Error::Error; };
// Period map failed to contract within the horizon cap.
struct NoContraction : Error { using Error::Error; };
// Too few snapshots for a time average.
struct InsufficientSnapshots : Error { using Error::Error; };
// Invalid or unknown configuration input.
struct ConfigError : Error { using Error::Error; };

// Successive-run gaps failed to drop below tolerance; carries the gap table.
struct NonCauchy : Error {
    NonCauchy(const std::string& msg, std::vector<double> gap_table)
        : Error(msg), gaps(std::move(gap_table)) {}
    std::vector<double> gaps;
};

}  // namespace frontlab

#endif
