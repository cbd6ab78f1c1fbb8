#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace tmt {

/// Half-open character region in a source file, 1-based lines and columns.
struct SourceSpan {
    std::string file;
    int line = 0;
    int column = 0;
    int end_line = 0;
    int end_column = 0;

    bool valid() const { return line > 0; }

    std::string str() const {
        if (!valid()) return file.empty() ? "<unknown>" : file;
        return file + ":" + std::to_string(line) + ":" + std::to_string(column);
    }

    friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

/// Error in a specification: syntax, semantic, or a violation detected while
/// rewriting (e.g. a rule producing a non-conformant model).
class SpecError : public std::runtime_error {
public:
    SpecError(SourceSpan span, const std::string& message)
        : std::runtime_error(span.valid() ? span.str() + ": " + message : message),
          span_(std::move(span)),
          message_(message) {}

    explicit SpecError(const std::string& message) : SpecError(SourceSpan{}, message) {}

    const SourceSpan& span() const { return span_; }
    const std::string& message() const { return message_; }

private:
    SourceSpan span_;
    std::string message_;
};

/// Runtime evaluation failure (kind mismatch, unresolvable object literal,
/// division by zero). Always indicates a bug in the spec under analysis.
class EvalError : public SpecError {
public:
    using SpecError::SpecError;
};

/// Engine-level failure, e.g. an instantaneous livelock.
class EngineError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Exploration aborted because a state or memory budget was exceeded.
class BudgetError : public std::runtime_error {
public:
    BudgetError(const std::string& what, std::uint64_t states_explored)
        : std::runtime_error(what + " (states explored: " + std::to_string(states_explored) + ")"),
          states_explored_(states_explored) {}

    std::uint64_t states_explored() const { return states_explored_; }

private:
    std::uint64_t states_explored_;
};

}  // namespace tmt
