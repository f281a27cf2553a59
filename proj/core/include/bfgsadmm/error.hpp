#pragma once

#include <stdexcept>
#include <string>

namespace bfgsadmm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an iterate stops being finite.
class DivergenceError : public Error {
 public:
  DivergenceError(std::size_t iteration, int agent)
      : Error("non-finite iterate at iteration " + std::to_string(iteration) + ", agent " +
              std::to_string(agent)),
        iteration_(iteration),
        agent_(agent) {}

  std::size_t iteration() const { return iteration_; }
  int agent() const { return agent_; }

 private:
  std::size_t iteration_;
  int agent_;
};

}  // namespace bfgsadmm
