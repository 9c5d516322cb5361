#ifndef QBACKBONE_ERRORS_HPP
#define QBACKBONE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qbackbone {

/// Raised when a scenario document cannot be parsed or fails validation.
/// `field()` names the offending key path, empty for syntax errors.
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

/// A caller broke an operation's precondition (for example consuming more
/// pairs than are stored).
class ContractViolation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Egress and ingress disagree about which memory slots a teleportation
/// consumed.
class ProtocolViolation : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace qbackbone

#endif  // QBACKBONE_ERRORS_HPP
