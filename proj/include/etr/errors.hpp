#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace etr {

// Base of every error the library throws. The CLI maps `ConfigError` to
// exit code 1 and every other `Error` to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed input. Line and column are 1-based; 0 means "unknown".
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0,
             std::size_t column = 0);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

#define ETR_DECLARE_ERROR(Name)  \
  class Name : public Error {    \
   public:                       \
    using Error::Error;          \
  }

ETR_DECLARE_ERROR(ValidationError);
ETR_DECLARE_ERROR(UnknownId);
ETR_DECLARE_ERROR(EmptyContext);
ETR_DECLARE_ERROR(EmptyPropertySet);
ETR_DECLARE_ERROR(DimensionMismatch);
ETR_DECLARE_ERROR(TooFewSamples);
ETR_DECLARE_ERROR(DegenerateLabels);
ETR_DECLARE_ERROR(ManifestMismatch);
ETR_DECLARE_ERROR(FormatVersionMismatch);
ETR_DECLARE_ERROR(MissingTruth);
ETR_DECLARE_ERROR(EmptyFeatureSet);
ETR_DECLARE_ERROR(InvalidSpec);

#undef ETR_DECLARE_ERROR

// Wraps an error raised while processing element `index` of a list.
class PairError : public Error {
 public:
  PairError(std::size_t index, const std::string& what);
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

}  // namespace etr
