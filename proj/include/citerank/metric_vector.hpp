#pragma once

#include <citerank/common.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace citerank {

enum class MetricKind {
    // papers
    ncit,
    nicit,
    paperrank,
    authorrank_of_papers,
    ccoin_paper,
    // authors
    npap,
    nipap,
    ncit_author,
    nicit_author,
    h_index,
    paperrank_author,
    authorrank,
    ccoin_author,
    ccoin_plus,
};

enum class EntityKind { paper, author, institution, town, country, continent, journal, gender };

std::string_view to_string(MetricKind k);
std::string_view to_string(EntityKind k);

/// Solver parameters and diagnostics carried alongside a score vector.
/// Unused fields stay NaN / zero.
struct MetricParams {
    double damping = std::nan("");
    double r_total = std::nan("");
    double tolerance = std::nan("");
    std::size_t iterations = 0;
    double residual = std::nan("");
};

/// A named score per entity. ids are ascending; values[i] belongs to ids[i].
struct MetricVector {
    MetricKind kind{};
    EntityKind entity = EntityKind::paper;
    std::optional<YearRange> window;
    MetricParams params;
    std::vector<std::int64_t> ids;
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }

    std::optional<double> value_of(std::int64_t id) const {
        auto it = std::lower_bound(ids.begin(), ids.end(), id);
        if (it == ids.end() || *it != id)
            return std::nullopt;
        return values[static_cast<std::size_t>(it - ids.begin())];
    }

    double sum() const {
        double s = 0.0;
        for (double v : values)
            s += v;
        return s;
    }
};

} // namespace citerank
