#pragma once

#include <stdexcept>
#include <string>

namespace mcsym {

/// Malformed input text. Line and column are 1-based; 0 means unknown.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line = 0, int column = 0)
        : std::runtime_error(format(what, line, column)), line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    static std::string format(const std::string& what, int line, int column) {
        if (line == 0) return what;
        return std::to_string(line) + ":" + std::to_string(column) + ": " + what;
    }
    int line_;
    int column_;
};

/// A configured brute-force or enumeration bound was exceeded.
class BoundExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An internal consistency check failed (a bug or a corrupt input object).
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace mcsym
