#pragma once

#include <stdexcept>
#include <string>

namespace twd {

// Error taxonomy shared by the C API and the CLI exit codes:
// domain/usage -> 2, numerical evaluation -> 3.
enum class ErrorCode : int {
    Domain = 2,
    Evaluation = 3,
    Configuration = 2,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(ErrorCode::Domain, what) {}
};

class EvalError : public Error {
public:
    explicit EvalError(const std::string& what) : Error(ErrorCode::Evaluation, what) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorCode::Configuration, what) {}
};

}  // namespace twd
