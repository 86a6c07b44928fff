#pragma once

#include <stdexcept>
#include <string>

namespace multiroot {

// Every library failure derives from Error so callers can catch one type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConvergenceFailure : public Error { using Error::Error; };
class InvalidDegree : public Error { using Error::Error; };
class UnsupportedDim : public Error { using Error::Error; };
class DimensionMismatch : public Error { using Error::Error; };
class LinearSolveFailure : public Error { using Error::Error; };
class AtDeflatedRoot : public Error { using Error::Error; };
class UnsupportedExponent : public Error { using Error::Error; };
class UnsupportedTransform : public Error { using Error::Error; };
class PolishFailed : public Error { using Error::Error; };

class ConfigError : public Error { using Error::Error; };

class ParseError : public ConfigError {
public:
    ParseError(int line, const std::string& reason)
        : ConfigError("line " + std::to_string(line) + ": " + reason), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

class UnknownKey : public ConfigError {
public:
    UnknownKey(int line, const std::string& key)
        : ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "'"), key_(key) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

class MissingRequired : public ConfigError {
public:
    explicit MissingRequired(const std::string& key)
        : ConfigError("missing required key '" + key + "'") {}
};

} // namespace multiroot
