#pragma once

#include <stdexcept>
#include <string>

namespace befpp {

struct NotStronglyConnected : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonPositiveWeight : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NonPositiveParameter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct GraphFormatError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct TiedMinimum : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidPath : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct InvalidConstraint : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct GraphTooLarge : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct SingularSystem : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InconsistentStationaryInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NotClosed : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct TooFewSamples : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DegenerateBins : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace befpp
