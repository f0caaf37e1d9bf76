#pragma once

#include <stdexcept>
#include <string>

namespace affinelab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// geometry_kernel
struct NonPositiveSupport : Error { using Error::Error; };
struct NotStrictlyConvex : Error { using Error::Error; };
struct GridMismatch : Error { using Error::Error; };

// affine_functionals
struct InvalidP : Error { using Error::Error; };
struct NotNormalized : Error { using Error::Error; };

// ellipse_tools
struct SolverFailure : Error { using Error::Error; };
struct NotContained : Error { using Error::Error; };

// flow_engine
struct StepRejected : Error { using Error::Error; };
struct ExtinctionReached : Error { using Error::Error; };
struct HorizonExceeded : Error { using Error::Error; };
struct NotNested : Error { using Error::Error; };
struct BadSandwich : Error { using Error::Error; };

// stability_verifier
struct MonotonicityViolated : Error { using Error::Error; };
struct DegenerateDeficit : Error { using Error::Error; };

// experiment_cli
struct InsufficientRange : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

} // namespace affinelab
