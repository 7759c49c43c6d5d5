#pragma once

#include <stdexcept>
#include <string>

namespace osmosis {

/// Shapes, grid spacings, or channel layouts that do not line up.
class DimensionError : public std::invalid_argument {
public:
    explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

/// Input values outside the documented domain (non-positive guide, bad offset, ...).
class ValueError : public std::invalid_argument {
public:
    explicit ValueError(const std::string& what) : std::invalid_argument(what) {}
};

/// A linear solve that could not be completed (zero pivot, iteration cap hit).
class SolveError : public std::runtime_error {
public:
    explicit SolveError(const std::string& what) : std::runtime_error(what) {}
};

/// Unreadable, unwritable, or malformed raster files.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace osmosis
