#ifndef VORTEXSIM_ERRORS_HPP
#define VORTEXSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace vortexsim
{

/// Process exit codes used by the command line tool.
enum class ExitCode : int
{
  Ok = 0,
  Internal = 1,
  Config = 2,
  Sampling = 3,
  Analysis = 4,
  Io = 5,
};

/// Base class of all errors raised by the library. Each subclass maps to one
/// exit code so the CLI can report failures without inspecting messages.
class Error : public std::runtime_error
{
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual ExitCode exitCode() const noexcept { return ExitCode::Internal; }
};

/// Invalid argument values (non-positive wavelength, zero-power normalization).
class DomainError : public Error
{
public:
  using Error::Error;
  ExitCode exitCode() const noexcept override { return ExitCode::Config; }
};

/// Arrays that do not share a grid.
class ShapeError : public Error
{
public:
  using Error::Error;
  ExitCode exitCode() const noexcept override { return ExitCode::Config; }
};

class ConfigError : public Error
{
public:
  using Error::Error;
  ExitCode exitCode() const noexcept override { return ExitCode::Config; }
};

/// A quantity cannot be represented on the chosen grid.
class SamplingError : public Error
{
public:
  using Error::Error;
  ExitCode exitCode() const noexcept override { return ExitCode::Sampling; }
};

/// A measurement cannot be made (region outside the grid, circle through a
/// null, ambiguous sort).
class AnalysisError : public Error
{
public:
  using Error::Error;
  ExitCode exitCode() const noexcept override { return ExitCode::Analysis; }
};

class IoError : public Error
{
public:
  using Error::Error;
  ExitCode exitCode() const noexcept override { return ExitCode::Io; }
};

} // namespace vortexsim

#endif
