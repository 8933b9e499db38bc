#ifndef QGEOM_ERROR_HPP
#define QGEOM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace qgeom {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Integrand is not absolutely integrable for the requested parameters.
class IntegrabilityError : public DomainError {
public:
    explicit IntegrabilityError(const std::string& what) : DomainError(what) {}
};

/// Numerical breakdown (NaN from an integrand, non-convergent quadrature
/// that the caller asked to treat as fatal).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qgeom

#endif  // QGEOM_ERROR_HPP
