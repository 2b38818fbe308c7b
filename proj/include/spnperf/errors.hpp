#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace spnperf {

// Base of every error raised by the library.
class spn_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Marking or weight vector does not match the net's place count.
class dimension_error : public spn_error {
 public:
  using spn_error::spn_error;
};

// Firing or querying the rate of a transition that is not enabled.
class enabling_error : public spn_error {
 public:
  using spn_error::spn_error;
};

// A net, parameter set, or document violates its invariants.
class validation_error : public spn_error {
 public:
  explicit validation_error(const std::string& what,
                            std::vector<std::string> violations = {})
      : spn_error(what), violations_(std::move(violations)) {}
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

class domain_error : public spn_error {
 public:
  using spn_error::spn_error;
};

// Unknown place or transition name.
class lookup_error : public spn_error {
 public:
  using spn_error::spn_error;
};

// State space grew past the configured bound.
class explosion_error : public spn_error {
 public:
  explosion_error(const std::string& what, std::size_t states_reached)
      : spn_error(what), states_reached_(states_reached) {}
  std::size_t states_reached() const { return states_reached_; }

 private:
  std::size_t states_reached_;
};

// The chain is not irreducible (deadlocks or several strongly connected
// components). offending_states() lists a sample of the states involved.
class structure_error : public spn_error {
 public:
  structure_error(const std::string& what, std::vector<std::size_t> states)
      : spn_error(what), states_(std::move(states)) {}
  const std::vector<std::size_t>& offending_states() const { return states_; }

 private:
  std::vector<std::size_t> states_;
};

class convergence_error : public spn_error {
 public:
  convergence_error(const std::string& what, double residual)
      : spn_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

}  // namespace spnperf
