#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fodgmm {

/// Shape or size precondition violated (T < 2, length mismatch, ...).
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A matrix that must be inverted failed the pivot threshold.
///
/// `label` names the matrix ("A_N" or "S_t") and `index` carries the
/// identifying dimension: m for A_N, t for S_t.
class SingularMatrixError : public std::runtime_error {
public:
    SingularMatrixError(std::string label, std::size_t index, const std::string& detail)
        : std::runtime_error(detail), label_(std::move(label)), index_(index) {}

    const std::string& label() const noexcept { return label_; }
    std::size_t index() const noexcept { return index_; }

private:
    std::string label_;
    std::size_t index_;
};

/// Denominator of the GMM ratio vanished.
class DegenerateEstimateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file. `line()` is 1-based; 0 when not tied to a line.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& msg)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace fodgmm
