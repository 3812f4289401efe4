#pragma once

#include <stdexcept>
#include <string>

namespace agriseg {

/// Bad parameters or configuration. CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad or missing input data. CLI exit code 3.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed file contents (interchange JSON, MSST, LMAP).
class FormatError : public DataError {
public:
    using DataError::DataError;
};

/// No valid NDVI timestep; the tile cannot be snapshotted.
class UnusableTileError : public DataError {
public:
    using DataError::DataError;
};

}  // namespace agriseg
