#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace citerank {

// Opaque record ids as they appear in the source database.
using PaperId = std::int64_t;
using AuthorId = std::int64_t;
using InstitutionId = std::int64_t;
using JournalId = std::int64_t;

// Dense node index inside a CitationGraph.
using node = std::uint32_t;

constexpr node kNoNode = std::numeric_limits<node>::max();

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid or inconsistent input data.
class DataError : public Error {
public:
    using Error::Error;
};

// Out-of-range algorithm parameter (damping, tolerance, G_max, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string &what, double residual, std::size_t iterations)
        : Error(what), residual_(residual), iterations_(iterations) {}

    double residual() const noexcept { return residual_; }
    std::size_t iterations() const noexcept { return iterations_; }

private:
    double residual_;
    std::size_t iterations_;
};

/// Inclusive range of publication years. Open ends use the numeric limits.
struct YearRange {
    int first = std::numeric_limits<int>::min();
    int last = std::numeric_limits<int>::max();

    bool contains(int year) const noexcept { return year >= first && year <= last; }
    bool empty() const noexcept { return first > last; }
    bool operator==(const YearRange &) const = default;

    static YearRange after(int year) { return {year, std::numeric_limits<int>::max()}; }
};

} // namespace citerank
