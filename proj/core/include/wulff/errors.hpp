#pragma once

#include <stdexcept>
#include <string>

namespace wulff {

// Exit codes of the command-line driver map one-to-one onto these types.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class OracleSizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

class StarvationError : public std::runtime_error {
 public:
  StarvationError(const std::string& what, double acceptance_estimate)
      : std::runtime_error(what), acceptance_(acceptance_estimate) {}
  double acceptance_estimate() const { return acceptance_; }

 private:
  double acceptance_;
};

// A precondition of an algorithm was violated by its input; carries a trace.
class AlgorithmError : public std::runtime_error {
 public:
  AlgorithmError(const std::string& what, std::string trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}
  const std::string& trace() const { return trace_; }

 private:
  std::string trace_;
};

}  // namespace wulff
