#pragma once

#include <stdexcept>
#include <string>

namespace lyatel {

// Base for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad argument (outside an operation's stated domain).
struct DomainError : Error {
    using Error::Error;
};

// Malformed map grammar / config input.
struct ParseError : Error {
    using Error::Error;
};

// Two candidate preimages are equidistant within tolerance; the caller
// must refine the continuation path.
struct AmbiguousBranch : Error {
    using Error::Error;
};

// The pullback target coincides with the singular value.
struct SingularHit : Error {
    using Error::Error;
};

// The singular value lies inside (or within the guard band of) a traced
// region; carries the offending level.
struct SingularCrossed : Error {
    int level;
    explicit SingularCrossed(int lvl)
        : Error("singular value crossed at level " + std::to_string(lvl)), level(lvl) {}
};

// An orbit point lies in the singular set: delta_n = 0 and every
// downstream bound divides by it.
struct DegenerateOrbit : Error {
    using Error::Error;
};

// Bisection / tracing cannot resolve within the active precision.
struct PrecisionExhausted : Error {
    using Error::Error;
};

// Cycle search came up empty; widen the box or grid.
struct NoCycleFound : Error {
    using Error::Error;
};

// The orbit converges to an attracting cycle, so the theorem's
// hypotheses fail and bound evaluation is refused.
struct BasinDetected : Error {
    using Error::Error;
};

} // namespace lyatel
