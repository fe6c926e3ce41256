#pragma once

#include <stdexcept>
#include <string>

namespace plab {

/// Bad user input: malformed config, violated selection rules known at
/// configuration time, unknown keys.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Physically meaningless request, e.g. a polariton observable on an
/// unconnected lambda configuration.
struct ModelError : std::runtime_error {
  explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

/// Curve analysis could not produce a result (no revival found,
/// undersampled grid).
struct AnalysisError : std::runtime_error {
  explicit AnalysisError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace plab
