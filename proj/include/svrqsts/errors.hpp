#pragma once

#include <stdexcept>
#include <string>

namespace svrqsts {

/// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Bad input data: malformed config, unknown ids, invalid parameter values.
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// File read/write failures and malformed persisted data.
class IoError : public Error {
  public:
    using Error::Error;
};

class TopologyError : public Error {
  public:
    using Error::Error;
};

/// An energized island contains a cycle.
class LoopError : public TopologyError {
  public:
    using TopologyError::TopologyError;
};

/// An energized island contains more than one grid source.
class MultiSourceError : public TopologyError {
  public:
    using TopologyError::TopologyError;
};

/// Power flow failed to converge during a time-series run.
class NonConvergenceError : public Error {
  public:
    NonConvergenceError(const std::string& msg, long step_index, double mismatch_pu)
        : Error(msg), step(step_index), mismatch(mismatch_pu) {}
    long step;
    double mismatch;
};

/// Pre-dispatch contract cannot be met; carries the best achievable average.
class InfeasibleError : public Error {
  public:
    InfeasibleError(const std::string& msg, double achievable)
        : Error(msg), achievable_mw(achievable) {}
    double achievable_mw;
};

}  // namespace svrqsts
