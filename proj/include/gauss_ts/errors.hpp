#pragma once

#include <stdexcept>
#include <string>

namespace gauss_ts {

// Argument outside the mathematical domain of a function.
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// B(1/2, -alpha) and friends: the quantity does not exist for these arguments.
class bound_undefined : public domain_error {
 public:
  using domain_error::domain_error;
};

// Posterior requested before an arm has n0 observations.
class insufficient_data : public domain_error {
 public:
  using domain_error::domain_error;
};

// Centered sum of squares too small relative to the data to define a posterior.
class degenerate_variance : public domain_error {
 public:
  using domain_error::domain_error;
};

// Parameter combination rejected by a bound's hypotheses (epsilon, alpha, uniqueness).
class infeasible_parameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Iterative method ran out of iterations. Indicates a bug or an argument
// outside the tested range, not bad user input.
class convergence_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gauss_ts
