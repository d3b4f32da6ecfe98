#ifndef SHADOWLAB_ERRORS_HPP
#define SHADOWLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace shadowlab {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConstraintViolation : Error {
    using Error::Error;
};
struct OnBinding : Error {
    using Error::Error;
};
struct DegenerateProjection : Error {
    using Error::Error;
};
struct DegenerateLeaf : Error {
    using Error::Error;
};
struct CollisionGuard : Error {
    using Error::Error;
};
struct StepFailure : Error {
    using Error::Error;
};
struct EnergyAboveFloor : Error {
    using Error::Error;
};
struct RootNotBracketed : Error {
    using Error::Error;
};
struct TransversalityLoss : Error {
    using Error::Error;
};
struct OutOfDomain : Error {
    using Error::Error;
};
struct SolvabilityFailure : Error {
    using Error::Error;
};
struct ZeroOnLoop : Error {
    using Error::Error;
};
struct AdaptiveRefineNeeded : Error {
    using Error::Error;
};
struct IntegrationBudgetExceeded : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace shadowlab

#endif
