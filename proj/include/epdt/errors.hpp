#pragma once

#include <stdexcept>
#include <string>

namespace epdt {

// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// delta = (mu-1)^2 - 4 nu^2 < 0: the damping does not dominate the mass term and
// no exponent classification exists.
class NegativeDiscriminant : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// The exponent p lies outside every blow-up range, so there is no lifespan bound.
class EmptyRange : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class NotFound : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SignConditionViolated : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class StepUnderflow : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InsufficientData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid parameters, configuration keys or grid layout.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace epdt
