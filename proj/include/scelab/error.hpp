#pragma once

#include <stdexcept>
#include <string>

namespace scelab {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Inconsistent or out-of-range configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Argument outside a function's mathematical domain.
class DomainError : public Error {
public:
    using Error::Error;
};

// Random structure generation gave up after bounded retries.
class GenerationError : public Error {
public:
    GenerationError(const std::string& what, int retries)
        : Error(what + " (after " + std::to_string(retries) + " retries)"), retries_(retries) {}
    int retries() const noexcept { return retries_; }

private:
    int retries_;
};

class PairingError : public Error {
public:
    PairingError(const std::string& what, std::size_t agent)
        : Error(what + " (agent " + std::to_string(agent) + ")"), agent_(agent) {}
    std::size_t agent() const noexcept { return agent_; }

private:
    std::size_t agent_;
};

// Payment would be negative (limited liability).
class LiabilityError : public Error {
public:
    using Error::Error;
};

class CalibrationError : public Error {
public:
    using Error::Error;
};

// Pearson correlation of a constant vector.
class UndefinedCorrelation : public Error {
public:
    using Error::Error;
};

class EstimationError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace scelab
