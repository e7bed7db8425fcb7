#ifndef DCLOCATE_ERRORS_HPP
#define DCLOCATE_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dclocate {

// Precondition violated by the caller (e.g. dimension mismatch).
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Out-of-range numeric parameter such as a non-positive smoothing value.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Problem data that cannot be solved as configured (e.g. no positive weights).
class ConfigurationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Input data rejected during validation.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed text input; line numbers are 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Iterates or objective values became non-finite.
class NumericalFailure : public std::runtime_error {
public:
    NumericalFailure(std::size_t stage, std::size_t iteration, const std::string& what)
        : std::runtime_error("stage " + std::to_string(stage) + ", iteration " +
                             std::to_string(iteration) + ": " + what),
          stage_(stage),
          iteration_(iteration) {}

    std::size_t stage() const noexcept { return stage_; }
    std::size_t iteration() const noexcept { return iteration_; }

private:
    std::size_t stage_;
    std::size_t iteration_;
};

}  // namespace dclocate

#endif  // DCLOCATE_ERRORS_HPP
