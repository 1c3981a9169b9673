#pragma once

#include <citerank/citegraph.hpp>
#include <citerank/dataset.hpp>
#include <citerank/metric_vector.hpp>

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace citerank {

/// Fractional assignment of papers to groups. Rows follow Dataset::papers();
/// every covered paper's shares sum to one.
struct GroupingScheme {
    EntityKind kind = EntityKind::institution;
    std::vector<std::int64_t> group_ids;    // ascending
    std::vector<std::string> group_names;   // parallel to group_ids
    std::vector<PaperId> paper_ids;         // dataset order
    std::vector<std::size_t> offsets{0};
    std::vector<std::uint32_t> groups;      // indices into group_ids
    std::vector<double> weights;
    std::size_t uncovered_papers = 0;       // papers with no resolvable group

    std::size_t n_papers() const noexcept { return paper_ids.size(); }
    std::size_t n_groups() const noexcept { return group_ids.size(); }
    std::span<const std::uint32_t> groups_of(std::size_t p) const {
        return {groups.data() + offsets[p], offsets[p + 1] - offsets[p]};
    }
    std::span<const double> weights_of(std::size_t p) const {
        return {weights.data() + offsets[p], offsets[p + 1] - offsets[p]};
    }
    /// Share of paper row `p` assigned to group index `gi` (0 if none).
    double share(std::size_t p, std::uint32_t gi) const;
};

/// p_I = (1/N_aut) sum over the paper's authors in I of 1/N_aff(author),
/// renormalized over authors that list at least one affiliation.
GroupingScheme institution_shares(const Dataset &d);

/// Partition of institutions into towns.
struct TownClustering {
    // Cluster index per institution (Dataset order); kNoNode for excluded institutions.
    std::vector<std::uint32_t> cluster_of;
    // Representative (smallest) institution id per cluster; clusters ordered by it.
    std::vector<InstitutionId> representative;
    std::vector<InstitutionId> without_coordinates;   // singleton clusters
    std::vector<InstitutionId> invalid_coordinates;   // excluded

    std::size_t n_clusters() const noexcept { return representative.size(); }
};

constexpr double kEarthRadiusKm = 6371.0088;

/// Great-circle distance on a sphere of radius kEarthRadiusKm.
double haversine_km(double lat1, double lon1, double lat2, double lon2);

/// Single-linkage clustering: institutions connected by a chain of hops of at
/// most radius_km share a town.
TownClustering cluster_towns(std::span<const InstitutionRecord> institutions, double radius_km = 30.0);

GroupingScheme town_shares(const Dataset &d, const TownClustering &towns);
/// Country groups keyed by position in the sorted list of country codes.
GroupingScheme country_shares(const Dataset &d);
/// Continent groups keyed by the Continent enum value.
GroupingScheme continent_shares(const Dataset &d);
GroupingScheme journal_shares(const Dataset &d);
/// Each paper is split equally among its gender-tagged authors. Keyed by the Gender enum value.
GroupingScheme gender_shares(const Dataset &d);

/// values[G] = sum_p share(p, G) * paper_metric[p], over papers present in the metric.
MetricVector group_metric(const GroupingScheme &scheme, const MetricVector &paper_metric);

// ---------------------------------------------------------------------------
// Tables

struct NamedMetric {
    std::string name;
    MetricVector values;   // author metric
};

struct AffiliationTable {
    std::vector<InstitutionId> ids;
    std::vector<std::string> names;
    std::vector<double> n_iaut;                    // fractional active authors
    std::vector<std::string> metric_names;
    std::vector<std::vector<double>> percentages;  // [metric][institution], world %
    std::size_t active_authors = 0;
    std::size_t active_without_affiliation = 0;
};

/// Active authors are those with a paper dated inside `active_window`. Each
/// active author's affiliation fractions are averaged over those papers.
AffiliationTable affiliate_rank_table(const Dataset &d, std::span<const NamedMetric> author_metrics,
                                      const YearRange &active_window);

struct JournalRow {
    std::optional<JournalId> journal_id;   // nullopt: the unpublished bucket
    std::string name;
    std::size_t n_pap = 0;
    double n_icit = 0.0;
    double n_icit_per_paper = 0.0;
    double ccoin = 0.0;                    // n_icit - n_pap
};

/// Per-journal totals over papers in the graph (optionally also inside `window`).
/// The last row is the unpublished bucket.
std::vector<JournalRow> journal_table(const Dataset &d, const CitationGraph &g,
                                      const std::optional<YearRange> &window = std::nullopt);

/// Mean-absolute-difference Gini coefficient. Throws DataError on empty,
/// negative or all-zero input.
double gini(std::span<const double> values);

struct CorrelationMatrix {
    std::vector<std::string> names;
    std::size_t k = 0;
    std::vector<double> pearson;    // k x k row-major; NaN where undefined
    std::vector<double> spearman;
    std::vector<bool> undefined;    // zero-variance inputs

    double pearson_at(std::size_t i, std::size_t j) const { return pearson[i * k + j]; }
    double spearman_at(std::size_t i, std::size_t j) const { return spearman[i * k + j]; }
};

/// Pairwise Pearson and Spearman (average ranks for ties) correlations of
/// metric vectors over a common entity set.
CorrelationMatrix metric_correlations(std::span<const MetricVector> vectors,
                                      std::vector<std::string> names = {});

/// Fractional ranks (1-based, ties averaged).
std::vector<double> average_ranks(std::span<const double> xs);

struct TrendRow {
    int year = 0;
    std::size_t n_papers = 0;
    double mean_declared_refs = 0.0;
    double mean_authors = 0.0;
    double mean_citations = 0.0;
    double mean_citations_from_published = 0.0;
};

struct TurnoverRow {
    int year = 0;
    std::size_t active = 0;
    std::size_t born = 0;   // active in year, not in year-1
    std::size_t died = 0;   // active in year-1, not in year
    double born_pct = 0.0;  // of authors active in year
    double died_pct = 0.0;  // of authors active in year-1
};

struct TrendTables {
    std::vector<TrendRow> years;        // every year from first to last paper
    std::vector<TurnoverRow> turnover;  // first year to last year + 1
};

/// Per-year trend statistics over graph papers, optionally restricted to a category.
TrendTables trend_series(const Dataset &d, const CitationGraph &g,
                         const std::optional<std::string> &category = std::nullopt);

struct TimeSeries {
    std::vector<int> years;
    std::vector<std::int64_t> group_ids;
    std::vector<std::string> group_names;
    std::vector<std::vector<double>> percent;   // [year][group]
};

/// For every year, each group's percentage of the world total of `paper_metric`
/// over papers written that year (restricted to `category` when given; the
/// world total is then the category total).
TimeSeries time_series(const Dataset &d, const GroupingScheme &scheme, const MetricVector &paper_metric,
                       const std::optional<std::string> &category = std::nullopt);

struct GenderShare {
    Gender gender;
    std::size_t n_authors = 0;
    double author_pct = 0.0;
    double icit_pct = 0.0;
    double rank_pct = 0.0;
};

struct GenderSummary {
    std::vector<GenderShare> shares;   // empty when nobody is tagged
    TimeSeries female_icit;            // per-year female share of individual citations
};

GenderSummary gender_stats(const Dataset &d, const CitationGraph &g, const MetricVector &author_icit,
                           const MetricVector &author_rank,
                           const std::optional<std::string> &category = std::nullopt);

struct GeoDenominator {
    double population = 0.0;
    double gdp_usd = 0.0;
};

/// Reads "country,population,gdp_usd" CSV (header line required).
std::map<std::string, GeoDenominator> read_geo_denominators(std::istream &in);

} // namespace citerank
