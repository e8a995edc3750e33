#ifndef LADDERBUS_ERROR_HPP
#define LADDERBUS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ladderbus
{

/// Base of every error raised by the flow.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input document. `where` locates the problem (JSON path, line).
class FormatError : public Error
{
public:
    FormatError(std::string where, const std::string &what)
        : Error(where.empty() ? what : where + ": " + what),
          where_(std::move(where))
    {
    }
    [[nodiscard]] const std::string &where() const noexcept { return where_; }

private:
    std::string where_;
};

/// Bad argument or configuration value.
class ConfigError : public Error
{
public:
    using Error::Error;
};

/// A data-structure invariant does not hold (e.g. a scenario with two
/// intersecting paths, or a collision seen by the simulator).
class InvariantViolation : public Error
{
public:
    using Error::Error;
};

} // namespace ladderbus

#endif // LADDERBUS_ERROR_HPP
