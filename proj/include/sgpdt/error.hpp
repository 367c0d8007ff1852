#ifndef SGPDT_ERROR_HPP
#define SGPDT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace sgpdt {

// Bad hyperparameters or an impossible split. CLI exit code 1.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data. CLI exit code 2.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A violated precondition inside the library. CLI exit code 3.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

inline void require(bool condition, const std::string& message)
{
    if (!condition) {
        throw ContractViolation(message);
    }
}

} // namespace sgpdt

#endif
