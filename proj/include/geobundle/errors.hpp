#pragma once

#include <stdexcept>
#include <string>

namespace geobundle {

/// Violated precondition or type invariant (wrong kind, off-manifold point, bad parameter).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Input outside the domain of a map, e.g. a cut-locus pair for log/transport.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical procedure could not deliver its postcondition.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ContractViolation(message);
}

}  // namespace geobundle
