#pragma once

#include <stdexcept>
#include <string>

namespace sticky {

//! Raised when an argument violates a documented precondition.
class ParameterError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

//! Raised when a simulation leaves the finite range (ODE blow-up, ULA escape).
class DivergenceError : public std::runtime_error
{
public:
  DivergenceError(const std::string& what, long step)
    : std::runtime_error(what + " (step " + std::to_string(step) + ")")
    , step_(step)
  {}
  long step() const { return step_; }

private:
  long step_;
};

} // namespace sticky

namespace sticky {

//! Invalid or unknown configuration entry; key() names it as section.key.
class ConfigError : public ParameterError
{
public:
  ConfigError(const std::string& key, const std::string& what)
    : ParameterError(key + ": " + what)
    , key_(key)
  {}
  const std::string& key() const { return key_; }

private:
  std::string key_;
};

} // namespace sticky
