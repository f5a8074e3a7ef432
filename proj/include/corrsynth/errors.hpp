#pragma once

#include <stdexcept>
#include <string>

namespace corrsynth {

/// Invalid argument or configuration value.
class parameter_error : public std::runtime_error {
public:
    explicit parameter_error(const std::string& what) : std::runtime_error(what) {}
};

/// An indicator has no defined value on this input (constant grid, too few
/// occupied cells, ...). Callers drop the replication instead of recording a
/// sentinel number.
class undefined_indicator_error : public std::runtime_error {
public:
    explicit undefined_indicator_error(const std::string& what) : std::runtime_error(what) {}
};

/// Correlation undefined (zero variance in one of the samples).
class undefined_correlation_error : public std::runtime_error {
public:
    explicit undefined_correlation_error(const std::string& what) : std::runtime_error(what) {}
};

/// Degenerate geometry the planarizer refuses (collinear overlapping segments).
class geometry_error : public std::runtime_error {
public:
    explicit geometry_error(const std::string& what) : std::runtime_error(what) {}
};

/// A request that cannot be satisfied by the input (more centers than occupied
/// cells, more links than distinct node pairs, ...).
class infeasible_error : public std::runtime_error {
public:
    explicit infeasible_error(const std::string& what) : std::runtime_error(what) {}
};

/// File parsing / serialization failure.
class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace corrsynth
