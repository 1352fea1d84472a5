#pragma once

#include <stdexcept>
#include <string>

namespace optomech {

/// Input that could not be parsed (config JSON, spectrum CSV). Messages name
/// the offending line or row. Maps to CLI exit code 1.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Analysis that ran but failed its quality contract (unconverged fit,
/// refused calibration, guard violation). Maps to CLI exit code 2.
class AnalysisError : public std::runtime_error {
 public:
  explicit AnalysisError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace optomech
