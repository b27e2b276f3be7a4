#pragma once

#include <stdexcept>
#include <string>

namespace bcg {

// Every library failure derives from Error so callers can catch one type.
// The category drives the CLI exit code.
enum class ErrorCategory {
  Input,       // unreadable or malformed files
  Config,      // invalid configuration or filter specification
  Degenerate,  // signal cannot support detection
  Metric,      // evaluation quantity undefined
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

#define BCG_DEFINE_ERROR(Name, Category)                               \
  class Name : public Error {                                          \
   public:                                                             \
    explicit Name(const std::string& what)                             \
        : Error(Category, #Name ": " + what) {}                          \
  };

BCG_DEFINE_ERROR(InvalidSpec, ErrorCategory::Config)
BCG_DEFINE_ERROR(SpecUnachievable, ErrorCategory::Config)
BCG_DEFINE_ERROR(InvalidConfig, ErrorCategory::Config)
BCG_DEFINE_ERROR(DegenerateSignal, ErrorCategory::Degenerate)
BCG_DEFINE_ERROR(EmptyWindow, ErrorCategory::Degenerate)
BCG_DEFINE_ERROR(UnsortedInput, ErrorCategory::Input)
BCG_DEFINE_ERROR(UndefinedMetric, ErrorCategory::Metric)
BCG_DEFINE_ERROR(NoEstimates, ErrorCategory::Metric)
BCG_DEFINE_ERROR(IoError, ErrorCategory::Input)
BCG_DEFINE_ERROR(MalformedHeader, ErrorCategory::Input)
BCG_DEFINE_ERROR(NonNumericSample, ErrorCategory::Input)

#undef BCG_DEFINE_ERROR

}  // namespace bcg
