#pragma once

#include <stdexcept>
#include <string>

namespace egoflow {

/// Base class for all egoflow errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// camera_model
struct NonPositiveDepth : Error { using Error::Error; };
struct AboveHorizon : Error { using Error::Error; };
struct NonForwardTranslation : Error { using Error::Error; };
struct DegenerateDepth : Error { using Error::Error; };

// optical_flow
struct TooManyLevels : Error { using Error::Error; };
struct GeometryMismatch : Error { using Error::Error; };

// foe_estimator
struct ZeroMagnitude : Error { using Error::Error; };
struct SingularSystem : Error { using Error::Error; };
struct TooFewVectors : Error { using Error::Error; };

// synthetic_field
struct InvalidRange : Error { using Error::Error; };

// regression
struct RankDeficient : Error { using Error::Error; };
struct TooFewSamples : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };

// pipeline
struct NoFrames : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct InvalidScenario : Error { using Error::Error; };

// i/o and configuration
struct IoError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

}  // namespace egoflow
