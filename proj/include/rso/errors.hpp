#pragma once

#include <stdexcept>
#include <string>

namespace rso {

// Base class for all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- simulation kernel ---
struct SchedulingInPast : Error { using Error::Error; };

// --- queueing network construction / execution ---
struct InvalidDistributionParams : Error { using Error::Error; };
struct OccupancyOutOfRange : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct MutuallyExclusiveFlags : Error { using Error::Error; };
struct UnsupportedArchetype : Error { using Error::Error; };

// --- trace metrics ---
struct InsufficientTrace : Error { using Error::Error; };
struct MismatchedOccupancy : Error { using Error::Error; };

// --- calibration ---
struct SingularFit : Error { using Error::Error; };
struct TimingUnstable : Error { using Error::Error; };
struct ProfileSchemaError : Error { using Error::Error; };
struct ProfileCorrupt : Error { using Error::Error; };

// --- simplification ---
struct FitDataTooSmall : Error { using Error::Error; };
struct MissingLosModel : Error { using Error::Error; };
struct RoutingInconsistency : Error { using Error::Error; };

// --- prediction / metrics ---
struct MissingClass : Error { using Error::Error; };
struct InvalidOperation : Error { using Error::Error; };
struct ZeroObservation : Error { using Error::Error; };
struct DegenerateVariance : Error { using Error::Error; };

}  // namespace rso
