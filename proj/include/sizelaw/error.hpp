#pragma once

#include <stdexcept>
#include <string>

namespace sizelaw {

// Base class for every error raised by the library. Callers that only care
// about "data error vs. bug" catch this.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Fewer than the minimum number of usable observations.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

// Transformed predictor has zero variance; slope is undefined.
class DegeneratePredictorError : public Error {
 public:
  using Error::Error;
};

// Correlation requested on a series with zero variance.
class UndefinedCorrelationError : public Error {
 public:
  using Error::Error;
};

// NRMSE test set with y_max == y_min.
class UndefinedNormalizationError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Every project of a bin was excluded from a ratio summary.
class EmptyBinError : public Error {
 public:
  using Error::Error;
};

class UnknownMetricError : public Error {
 public:
  using Error::Error;
};

class UnsupportedVersionError : public Error {
 public:
  using Error::Error;
};

// Archive or table is truncated or fails its checksum.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

class DuplicateProjectError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class EmptyCorpusError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace sizelaw
