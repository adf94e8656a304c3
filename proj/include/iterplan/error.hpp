#pragma once

#include <stdexcept>
#include <string>

namespace iterplan {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A model (LTS, fluent, formula, grid, ...) violates a structural invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Location inside a specification or configuration text. Lines and columns are 1-based.
struct SourceSpan {
    int line = 0;
    int column = 0;
    int length = 0;
};

/// Parse or semantic error with a source location.
class SpecError : public Error {
public:
    enum class Kind { lexical, syntax, undeclared, controllability, duplicate, semantic };

    SpecError(Kind kind, SourceSpan span, const std::string& message)
        : Error(std::to_string(span.line) + ":" + std::to_string(span.column) + ": " + message),
          kind_(kind), span_(span), message_(message)
    {
    }

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] const SourceSpan& span() const noexcept { return span_; }
    [[nodiscard]] const std::string& message() const noexcept { return message_; }

private:
    Kind kind_;
    SourceSpan span_;
    std::string message_;
};

} // namespace iterplan
