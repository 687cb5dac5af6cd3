#pragma once

#include <stdexcept>
#include <string>

namespace normnet {

// Base class for every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A sample with zero variance was given to an operation that standardizes.
struct ConstantSampleError : Error {
  using Error::Error;
};

// Sample size outside the range an operation supports.
struct SampleSizeError : Error {
  using Error::Error;
};

struct InvalidProbabilityError : Error {
  using Error::Error;
};

// kurt <= skew^2 + 1: no distribution has these moments.
struct InfeasibleMomentsError : Error {
  using Error::Error;
};

// The moment-to-coefficient map degenerates (common denominator is zero).
struct DegenerateDenominatorError : Error {
  using Error::Error;
};

struct InvalidParameterError : Error {
  using Error::Error;
};

// Entropy-statistic window covers a zero spacing (duplicate-heavy sample).
struct ZeroSpacingError : Error {
  using Error::Error;
};

struct InvalidWindowError : Error {
  using Error::Error;
};

struct DegenerateCorrelationError : Error {
  using Error::Error;
};

struct ZeroBandwidthError : Error {
  using Error::Error;
};

struct DimensionMismatchError : Error {
  using Error::Error;
};

struct SingleClassError : Error {
  using Error::Error;
};

struct EmptyDatasetError : Error {
  using Error::Error;
};

struct LengthMismatchError : Error {
  using Error::Error;
};

struct SingleClassLabelsError : Error {
  using Error::Error;
};

struct TooFewPointsError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

struct MalformedCsvError : Error {
  using Error::Error;
};

struct MissingColumnError : Error {
  using Error::Error;
};

struct CatalogTooSmallError : Error {
  using Error::Error;
};

struct FormatVersionMismatchError : Error {
  using Error::Error;
};

struct InfeasibleSpecError : Error {
  using Error::Error;
};

}  // namespace normnet
