#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mfgp {

// Invalid sizes, counts, shapes, or option values.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Transported support leaves the computational interval.
class DomainViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Every grid point of some time level carries less mass than the threshold.
class DegenerateDensity : public std::runtime_error {
 public:
  DegenerateDensity(std::size_t level, const std::string& what)
      : std::runtime_error(what), level_(level) {}
  std::size_t level() const noexcept { return level_; }

 private:
  std::size_t level_;
};

// A non-finite value appeared while evaluating or differentiating the network.
class NumericError : public std::runtime_error {
 public:
  NumericError(std::string node, const std::string& what)
      : std::runtime_error(what), node_(std::move(node)) {}
  const std::string& node() const noexcept { return node_; }

 private:
  std::string node_;
};

// Optimization produced a non-finite loss.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(long step, const std::string& what)
      : std::runtime_error(what), step_(step) {}
  long step() const noexcept { return step_; }

 private:
  long step_;
};

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mfgp
