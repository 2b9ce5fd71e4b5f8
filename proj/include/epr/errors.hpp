#pragma once

#include <stdexcept>
#include <string>

namespace epr {

// Adaptive quadrature ran out of subdivision depth before meeting tolerances.
class QuadratureError : public std::runtime_error {
public:
    explicit QuadratureError(const std::string& what) : std::runtime_error(what) {}
};

// A smoothing profile failed its normalization check.
class NormalizationError : public std::runtime_error {
public:
    explicit NormalizationError(const std::string& what) : std::runtime_error(what) {}
};

// Zero separation between distinct particles under the exact (singular) kernel.
class CollisionError : public std::runtime_error {
public:
    explicit CollisionError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace epr
