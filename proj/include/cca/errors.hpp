#pragma once

#include <stdexcept>
#include <string>

namespace cca {

// Domain errors: the request is outside the model's validity (missing pole,
// degenerate population, band-edge division). CLI maps these to exit code 3.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

class PoleNotFound : public DomainError {
public:
    explicit PoleNotFound(const std::string& what) : DomainError(what) {}
};

class WindowNotFound : public DomainError {
public:
    explicit WindowNotFound(const std::string& what) : DomainError(what) {}
};

class DegeneratePopulation : public DomainError {
public:
    explicit DegeneratePopulation(const std::string& what) : DomainError(what) {}
};

// Numerical failures: an algorithm did not converge or a solver failed.
// CLI maps these to exit code 4.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace cca
