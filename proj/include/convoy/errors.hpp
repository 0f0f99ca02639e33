#pragma once

#include <stdexcept>
#include <string>

namespace convoy {

// Quadrature / series evaluation failed to reach the requested tolerance.
// Carries the tolerance actually achieved so callers can decide what to do.
class numeric_error : public std::runtime_error {
 public:
  numeric_error(const std::string& what, double achieved_tol)
      : std::runtime_error(what + " (achieved tolerance " +
                           std::to_string(achieved_tol) + ")"),
        achieved_tol_(achieved_tol) {}
  double achieved_tol() const { return achieved_tol_; }

 private:
  double achieved_tol_;
};

// A request exceeded a hard enumeration/size budget.
class resource_error : public std::runtime_error {
 public:
  explicit resource_error(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace convoy
