#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ocdens {

//! Malformed or out-of-range user input (files, parameters, grids).
class InputError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

//! Parse failure that remembers the offending 1-based line number.
class ParseError : public InputError
{
public:
  ParseError(std::size_t line, const std::string& what)
    : InputError("line " + std::to_string(line) + ": " + what)
    , line_(line)
  {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

//! Numerical failure inside an iterative solver.
class SolverError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

//! An iterate left the representable range (e^{y2} would overflow).
class DivergedIterate : public SolverError
{
public:
  using SolverError::SolverError;
};

//! The Newton matrix had a zero or non-finite pivot.
class SingularSystem : public SolverError
{
public:
  SingularSystem(int iteration, const std::string& what)
    : SolverError("iteration " + std::to_string(iteration) + ": " + what)
    , iteration_(iteration)
  {}

  int iteration() const noexcept { return iteration_; }

private:
  int iteration_;
};

} // namespace ocdens
