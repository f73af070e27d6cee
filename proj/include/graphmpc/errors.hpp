#pragma once

#include <stdexcept>
#include <string>

namespace graphmpc {

// Problems with inputs or configuration, detected before or while setting up a
// run. The command line maps these to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed graph or query document. Messages carry the line number.
class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A graph that parses but does not describe a usable controller setup.
// Messages name the offending node and predicate.
class DeriveError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Time-series store violations: out-of-order writes, reads outside the
// stored extent, non-uniform sampling.
class SeriesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A forecast was requested for a time the backing data does not cover.
class CoverageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical faults while simulating: non-finite states, temperatures outside
// the physically plausible range. The command line maps runtime faults to
// exit code 3.
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace graphmpc
