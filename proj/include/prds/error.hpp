#pragma once

#include <stdexcept>
#include <string>

namespace prds {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input text (bad row, unparseable number). Carries line info in the message.
struct ParseError : Error {
  using Error::Error;
};

// Store file does not start with the expected magic/version.
struct FormatError : Error {
  using Error::Error;
};

// Store file is truncated or internally inconsistent.
struct CorruptionError : Error {
  using Error::Error;
};

// Invalid options, parameters or attribute references.
struct ConfigError : Error {
  using Error::Error;
};

// Input table has no rows.
struct EmptyUniverseError : Error {
  using Error::Error;
};

// Discernibility quality requested but the pair universe is empty.
struct UndefinedMeasureError : Error {
  using Error::Error;
};

// A reshape strategy cannot be applied to this table's structure.
struct StrategyError : Error {
  using Error::Error;
};

// Mathematical argument outside the supported domain.
struct DomainError : Error {
  using Error::Error;
};

}  // namespace prds
