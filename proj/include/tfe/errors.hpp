#pragma once

#include <stdexcept>
#include <string>

namespace tfe {

struct OutOfRange : std::domain_error {
  using std::domain_error::domain_error;
};

struct RootBracketFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonPositiveZ : std::domain_error {
  using std::domain_error::domain_error;
};

struct FitFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SeedUnderflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OrbitMissing : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BracketInvalid : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NoConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoEquilibrium : std::domain_error {
  using std::domain_error::domain_error;
};

struct PersistentIndeterminate : std::runtime_error {
  double n;
  PersistentIndeterminate(double n_, const std::string& msg) : std::runtime_error(msg), n(n_) {}
};

struct ToleranceStall : std::runtime_error {
  double mu;
  ToleranceStall(double mu_, const std::string& msg) : std::runtime_error(msg), mu(mu_) {}
};

struct WindowTooClose : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace tfe
