#pragma once

#include <stdexcept>
#include <string>

namespace npd {

struct NotNormalized : std::runtime_error {
  explicit NotNormalized(const std::string& what) : std::runtime_error(what) {}
};

struct KTooLarge : std::invalid_argument {
  explicit KTooLarge(const std::string& what) : std::invalid_argument(what) {}
};

struct SOutOfRange : std::invalid_argument {
  explicit SOutOfRange(const std::string& what) : std::invalid_argument(what) {}
};

struct DivisibilityViolation : std::invalid_argument {
  explicit DivisibilityViolation(const std::string& what) : std::invalid_argument(what) {}
};

// No admissible mixture exists for the requested (k, m).
struct EmptyQkm : std::runtime_error {
  explicit EmptyQkm(const std::string& what) : std::runtime_error(what) {}
};

// Gram matrix of a selected atom set is numerically singular (condition > 1e12).
struct SingularGram : std::runtime_error {
  explicit SingularGram(const std::string& what) : std::runtime_error(what) {}
};

// A noise threshold was requested while its recovery condition fails.
struct ConditionNotMet : std::runtime_error {
  explicit ConditionNotMet(const std::string& what) : std::runtime_error(what) {}
};

struct NoConvergence : std::runtime_error {
  explicit NoConvergence(const std::string& what) : std::runtime_error(what) {}
};

struct MalformedFile : std::runtime_error {
  explicit MalformedFile(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace npd
