#pragma once

#include <citerank/fixture.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace citerank::cli {

enum ExitCode : int {
    kOk = 0,
    kInternal = 1,     // unexpected failure
    kUsage = 2,        // bad arguments or invalid configuration
    kData = 3,         // malformed or inconsistent input data
    kConvergence = 4,  // an iterative solver hit max_iters
    kIo = 5,           // unreadable input or unwritable output
};

struct RunConfig {
    std::string subcommand;

    std::string input;
    std::string output = "-";   // "-" is stdout
    std::string graph_cache;
    std::string geo_denominators;
    std::string summary;        // run summary path; empty means stderr

    // Filters.
    std::optional<int> after;
    bool no_self_citations = false;
    bool published_only = false;

    // Solver parameters. Unset damping means the metric's default.
    std::optional<double> damping;
    double tolerance = 1e-10;
    std::size_t max_iters = 10'000;

    std::string format = "csv";
    unsigned threads = 0;

    std::string metric;
    std::string by;
    std::string entity = "paper";
    std::optional<std::size_t> top;
    std::optional<std::int64_t> author;
    std::optional<std::string> category;
    double radius_km = 30.0;
    bool strict = false;

    FixtureParams fixture;

    /// Every problem with the configuration, empty when it can run.
    std::vector<std::string> problems() const;
};

struct ParseResult {
    std::optional<RunConfig> config;
    int exit_code = kOk;   // meaningful when config is empty (help or parse error)
};

ParseResult parse_args(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

/// Runs a configuration. Tables go to config.output (or `out` for "-");
/// diagnostics and the one-line JSON run summary go to `err` (or config.summary).
int run(const RunConfig &config, std::ostream &out, std::ostream &err);

/// parse_args followed by run.
int main(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace citerank::cli
