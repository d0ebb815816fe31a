#pragma once

#include <stdexcept>
#include <string>

namespace unseen {

// Raised when a numerical routine loses too much accuracy to proceed
// (rank-deficient factorization, singular linear system).
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised by file/stream ingestion on malformed records or invariant violations.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line ? what + " (line " + std::to_string(line) + ")" : what),
          line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Raised when an estimator is mathematically undefined on the given input,
// e.g. Good-Turing coverage equal to zero on an all-singleton sample.
class undefined_estimator_error : public std::runtime_error {
public:
    explicit undefined_estimator_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace unseen
