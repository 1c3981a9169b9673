#include <citerank/group_metrics.hpp>
#include <citerank/paper_metrics.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace citerank {

double GroupingScheme::share(std::size_t p, std::uint32_t gi) const {
    const auto gs = groups_of(p);
    auto it = std::lower_bound(gs.begin(), gs.end(), gi);
    if (it == gs.end() || *it != gi)
        return 0.0;
    return weights_of(p)[static_cast<std::size_t>(it - gs.begin())];
}

namespace {

// Accumulates (group, weight) pairs for one paper, then appends the
// normalized row to the scheme.
class RowBuilder {
public:
    void add(std::uint32_t group, double w) { entries_.emplace_back(group, w); }

    void commit(GroupingScheme &s) {
        std::sort(entries_.begin(), entries_.end(),
                  [](const auto &a, const auto &b) { return a.first < b.first; });
        double total = 0.0;
        for (const auto &e : entries_)
            total += e.second;
        if (entries_.empty() || total <= 0.0) {
            ++s.uncovered_papers;
        } else {
            for (std::size_t i = 0; i < entries_.size();) {
                const auto g = entries_[i].first;
                double w = 0.0;
                for (; i < entries_.size() && entries_[i].first == g; ++i)
                    w += entries_[i].second;
                s.groups.push_back(g);
                s.weights.push_back(w / total);
            }
        }
        s.offsets.push_back(s.groups.size());
        entries_.clear();
    }

private:
    std::vector<std::pair<std::uint32_t, double>> entries_;
};

GroupingScheme empty_scheme(const Dataset &d, EntityKind kind) {
    GroupingScheme s;
    s.kind = kind;
    s.paper_ids.reserve(d.papers().size());
    for (const auto &p : d.papers())
        s.paper_ids.push_back(p.paper_id);
    s.offsets.reserve(d.papers().size() + 1);
    return s;
}

// Maps institution-level shares onto coarser groups, dropping unmapped
// institutions and renormalizing.
GroupingScheme regroup(const Dataset &d, const GroupingScheme &inst, EntityKind kind,
                       const std::vector<std::uint32_t> &group_of_institution, std::vector<std::int64_t> ids,
                       std::vector<std::string> names) {
    auto s = empty_scheme(d, kind);
    s.group_ids = std::move(ids);
    s.group_names = std::move(names);
    RowBuilder row;
    for (std::size_t p = 0; p < inst.n_papers(); ++p) {
        const auto gs = inst.groups_of(p);
        const auto ws = inst.weights_of(p);
        for (std::size_t k = 0; k < gs.size(); ++k)
            if (group_of_institution[gs[k]] != kNoNode)
                row.add(group_of_institution[gs[k]], ws[k]);
        row.commit(s);
    }
    return s;
}

} // namespace

GroupingScheme institution_shares(const Dataset &d) {
    auto s = empty_scheme(d, EntityKind::institution);
    for (const auto &inst : d.institutions()) {
        s.group_ids.push_back(inst.institution_id);
        s.group_names.push_back(inst.name);
    }
    RowBuilder row;
    std::vector<std::uint32_t> affs;
    for (const auto &p : d.papers()) {
        for (const auto &link : p.authors) {
            affs.clear();
            for (auto id : link.affiliation_ids)
                if (auto i = d.institution_index(id))
                    affs.push_back(static_cast<std::uint32_t>(*i));
            std::sort(affs.begin(), affs.end());
            affs.erase(std::unique(affs.begin(), affs.end()), affs.end());
            // The 1/N_aut factor is common to every author and cancels in the renormalization.
            for (auto i : affs)
                row.add(i, 1.0 / static_cast<double>(affs.size()));
        }
        row.commit(s);
    }
    return s;
}

double haversine_km(double lat1, double lon1, double lat2, double lon2) {
    constexpr double rad = std::numbers::pi / 180.0;
    const double dphi = (lat2 - lat1) * rad;
    const double dlambda = (lon2 - lon1) * rad;
    const double a = std::sin(dphi / 2) * std::sin(dphi / 2) +
                     std::cos(lat1 * rad) * std::cos(lat2 * rad) * std::sin(dlambda / 2) * std::sin(dlambda / 2);
    return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(a)));
}

TownClustering cluster_towns(std::span<const InstitutionRecord> institutions, double radius_km) {
    if (!(radius_km >= 0.0))
        throw ParameterError("cluster_towns: radius must be nonnegative");
    const std::size_t n = institutions.size();
    TownClustering out;
    out.cluster_of.assign(n, kNoNode);

    std::vector<std::uint32_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0u);
    auto find = [&](std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    auto unite = [&](std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a != b)
            parent[std::max(a, b)] = std::min(a, b);
    };

    std::vector<std::uint32_t> located;
    std::vector<char> excluded(n, 0);
    for (std::uint32_t i = 0; i < n; ++i) {
        const auto &inst = institutions[i];
        if (!inst.latitude && !inst.longitude) {
            out.without_coordinates.push_back(inst.institution_id);
            continue;
        }
        const bool valid = inst.latitude && inst.longitude && std::isfinite(*inst.latitude) &&
                           std::isfinite(*inst.longitude) && std::abs(*inst.latitude) <= 90.0 &&
                           std::abs(*inst.longitude) <= 180.0;
        if (!valid) {
            out.invalid_coordinates.push_back(inst.institution_id);
            excluded[i] = 1;
            continue;
        }
        located.push_back(i);
    }

    // Great-circle distance is at least R * |dlat|, so a latitude sweep prunes pairs.
    const double max_dlat = radius_km / (kEarthRadiusKm * std::numbers::pi / 180.0);
    std::sort(located.begin(), located.end(), [&](std::uint32_t a, std::uint32_t b) {
        return std::tie(*institutions[a].latitude, institutions[a].institution_id) <
               std::tie(*institutions[b].latitude, institutions[b].institution_id);
    });
    for (std::size_t x = 0; x < located.size(); ++x) {
        const auto &a = institutions[located[x]];
        for (std::size_t y = x + 1; y < located.size(); ++y) {
            const auto &b = institutions[located[y]];
            if (*b.latitude - *a.latitude > max_dlat)
                break;
            if (haversine_km(*a.latitude, *a.longitude, *b.latitude, *b.longitude) <= radius_km)
                unite(located[x], located[y]);
        }
    }

    // Representative = smallest institution id; clusters ordered by it.
    std::unordered_map<std::uint32_t, InstitutionId> rep;
    for (std::uint32_t i = 0; i < n; ++i) {
        if (excluded[i])
            continue;
        const auto r = find(i);
        auto [it, inserted] = rep.emplace(r, institutions[i].institution_id);
        if (!inserted)
            it->second = std::min(it->second, institutions[i].institution_id);
    }
    for (const auto &[root, id] : rep)
        out.representative.push_back(id);
    std::sort(out.representative.begin(), out.representative.end());
    for (std::uint32_t i = 0; i < n; ++i) {
        if (excluded[i])
            continue;
        const auto id = rep.at(find(i));
        out.cluster_of[i] = static_cast<std::uint32_t>(
            std::lower_bound(out.representative.begin(), out.representative.end(), id) -
            out.representative.begin());
    }
    std::sort(out.without_coordinates.begin(), out.without_coordinates.end());
    std::sort(out.invalid_coordinates.begin(), out.invalid_coordinates.end());
    return out;
}

GroupingScheme town_shares(const Dataset &d, const TownClustering &towns) {
    if (towns.cluster_of.size() != d.institutions().size())
        throw DataError("town clustering does not match the dataset's institutions");
    std::vector<std::string> names;
    for (auto id : towns.representative)
        names.push_back(d.institutions()[*d.institution_index(id)].name);
    return regroup(d, institution_shares(d), EntityKind::town, towns.cluster_of,
                   {towns.representative.begin(), towns.representative.end()}, std::move(names));
}

GroupingScheme country_shares(const Dataset &d) {
    std::vector<std::string> codes;
    for (const auto &inst : d.institutions())
        if (inst.country_code)
            codes.push_back(*inst.country_code);
    std::sort(codes.begin(), codes.end());
    codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
    std::vector<std::uint32_t> group_of(d.institutions().size(), kNoNode);
    for (std::size_t i = 0; i < group_of.size(); ++i)
        if (const auto &c = d.institutions()[i].country_code)
            group_of[i] = static_cast<std::uint32_t>(std::lower_bound(codes.begin(), codes.end(), *c) - codes.begin());
    std::vector<std::int64_t> ids(codes.size());
    std::iota(ids.begin(), ids.end(), std::int64_t{0});
    return regroup(d, institution_shares(d), EntityKind::country, group_of, std::move(ids), std::move(codes));
}

GroupingScheme continent_shares(const Dataset &d) {
    std::vector<int> present;
    for (const auto &inst : d.institutions())
        if (inst.continent)
            present.push_back(static_cast<int>(*inst.continent));
    std::sort(present.begin(), present.end());
    present.erase(std::unique(present.begin(), present.end()), present.end());
    std::vector<std::uint32_t> group_of(d.institutions().size(), kNoNode);
    for (std::size_t i = 0; i < group_of.size(); ++i)
        if (const auto &c = d.institutions()[i].continent)
            group_of[i] = static_cast<std::uint32_t>(
                std::lower_bound(present.begin(), present.end(), static_cast<int>(*c)) - present.begin());
    std::vector<std::int64_t> ids(present.begin(), present.end());
    std::vector<std::string> names;
    for (int c : present)
        names.emplace_back(to_string(static_cast<Continent>(c)));
    return regroup(d, institution_shares(d), EntityKind::continent, group_of, std::move(ids), std::move(names));
}

GroupingScheme journal_shares(const Dataset &d) {
    auto s = empty_scheme(d, EntityKind::journal);
    for (const auto &j : d.journals()) {
        s.group_ids.push_back(j.journal_id);
        s.group_names.push_back(j.name);
    }
    RowBuilder row;
    for (const auto &p : d.papers()) {
        if (p.journal_id)
            row.add(static_cast<std::uint32_t>(*d.journal_index(*p.journal_id)), 1.0);
        row.commit(s);
    }
    return s;
}

GroupingScheme gender_shares(const Dataset &d) {
    auto s = empty_scheme(d, EntityKind::gender);
    for (auto g : {Gender::female, Gender::male, Gender::indeterminate}) {
        s.group_ids.push_back(static_cast<std::int64_t>(g));
        s.group_names.emplace_back(to_string(g));
    }
    RowBuilder row;
    for (std::size_t p = 0; p < d.papers().size(); ++p) {
        for (auto a : d.paper_authors(p))
            if (const auto &g = d.authors()[a].gender)
                row.add(static_cast<std::uint32_t>(*g), 1.0);
        row.commit(s);
    }
    return s;
}

MetricVector group_metric(const GroupingScheme &scheme, const MetricVector &paper_metric) {
    if (paper_metric.entity != EntityKind::paper)
        throw DataError("group_metric expects a paper metric");
    MetricVector v;
    v.kind = paper_metric.kind;
    v.entity = scheme.kind;
    v.window = paper_metric.window;
    v.params = paper_metric.params;
    v.ids = scheme.group_ids;
    v.values.assign(scheme.n_groups(), 0.0);
    // Both id lists are ascending: merge join.
    std::size_t row = 0;
    for (std::size_t i = 0; i < paper_metric.size(); ++i) {
        const auto id = paper_metric.ids[i];
        while (row < scheme.n_papers() && scheme.paper_ids[row] < id)
            ++row;
        if (row == scheme.n_papers() || scheme.paper_ids[row] != id)
            throw DataError("paper " + std::to_string(id) + " is not covered by the grouping scheme");
        const auto gs = scheme.groups_of(row);
        const auto ws = scheme.weights_of(row);
        for (std::size_t k = 0; k < gs.size(); ++k)
            v.values[gs[k]] += ws[k] * paper_metric.values[i];
    }
    return v;
}

// ---------------------------------------------------------------------------

AffiliationTable affiliate_rank_table(const Dataset &d, std::span<const NamedMetric> author_metrics,
                                      const YearRange &active_window) {
    const auto insts = d.institutions();
    const auto authors = d.authors();
    AffiliationTable t;
    for (const auto &i : insts) {
        t.ids.push_back(i.institution_id);
        t.names.push_back(i.name);
    }
    t.n_iaut.assign(insts.size(), 0.0);

    std::vector<std::vector<double>> metric_by_author;
    for (const auto &m : author_metrics) {
        t.metric_names.push_back(m.name);
        std::vector<double> vals(authors.size(), 0.0);
        for (std::size_t a = 0; a < authors.size(); ++a)
            vals[a] = m.values.value_of(authors[a].author_id).value_or(0.0);
        metric_by_author.push_back(std::move(vals));
    }
    t.percentages.assign(author_metrics.size(), std::vector<double>(insts.size(), 0.0));
    std::vector<double> world(author_metrics.size(), 0.0);

    std::vector<std::pair<std::uint32_t, double>> fractions;
    std::vector<std::uint32_t> affs;
    for (std::size_t a = 0; a < authors.size(); ++a) {
        fractions.clear();
        std::size_t active_papers = 0, with_aff = 0;
        for (auto pi : d.author_papers(a)) {
            const auto &p = d.papers()[pi];
            if (!active_window.contains(p.date.year))
                continue;
            ++active_papers;
            affs.clear();
            for (const auto &link : p.authors)
                if (link.author_id == authors[a].author_id)
                    for (auto id : link.affiliation_ids)
                        affs.push_back(static_cast<std::uint32_t>(*d.institution_index(id)));
            std::sort(affs.begin(), affs.end());
            affs.erase(std::unique(affs.begin(), affs.end()), affs.end());
            if (affs.empty())
                continue;
            ++with_aff;
            for (auto i : affs)
                fractions.emplace_back(i, 1.0 / static_cast<double>(affs.size()));
        }
        if (active_papers == 0)
            continue;
        ++t.active_authors;
        for (std::size_t m = 0; m < metric_by_author.size(); ++m)
            world[m] += metric_by_author[m][a];
        if (with_aff == 0) {
            ++t.active_without_affiliation;
            continue;
        }
        for (const auto &[i, f] : fractions) {
            const double share = f / static_cast<double>(with_aff);
            t.n_iaut[i] += share;
            for (std::size_t m = 0; m < metric_by_author.size(); ++m)
                t.percentages[m][i] += share * metric_by_author[m][a];
        }
    }
    for (std::size_t m = 0; m < world.size(); ++m)
        for (auto &x : t.percentages[m])
            x = world[m] != 0.0 ? 100.0 * x / world[m] : 0.0;
    return t;
}

std::vector<JournalRow> journal_table(const Dataset &d, const CitationGraph &g,
                                      const std::optional<YearRange> &window) {
    const auto icit = n_icit_papers(g, RefCount::declared);
    std::vector<JournalRow> rows(d.journals().size() + 1);
    for (std::size_t j = 0; j < d.journals().size(); ++j) {
        rows[j].journal_id = d.journals()[j].journal_id;
        rows[j].name = d.journals()[j].name;
    }
    rows.back().name = "unpublished";
    for (node p = 0; p < g.n_papers(); ++p) {
        if (window && !window->contains(g.year(p)))
            continue;
        if (g.dataset_index(p) == kNoNode)
            throw DataError("journal_table needs a graph built from a Dataset");
        const auto &rec = d.papers()[g.dataset_index(p)];
        auto &row = rec.journal_id ? rows[*d.journal_index(*rec.journal_id)] : rows.back();
        ++row.n_pap;
        row.n_icit += icit.values[p];
    }
    std::vector<JournalRow> out;
    for (std::size_t j = 0; j < rows.size(); ++j) {
        auto &row = rows[j];
        if (row.n_pap == 0 && j + 1 < rows.size())
            continue;
        row.n_icit_per_paper = row.n_pap ? row.n_icit / static_cast<double>(row.n_pap) : 0.0;
        row.ccoin = row.n_icit - static_cast<double>(row.n_pap);
        out.push_back(std::move(row));
    }
    return out;
}

double gini(std::span<const double> values) {
    if (values.empty())
        throw DataError("gini: empty input");
    std::vector<double> xs(values.begin(), values.end());
    for (double x : xs)
        if (!(x >= 0.0) || !std::isfinite(x))
            throw DataError("gini: values must be finite and nonnegative");
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double total = 0.0, weighted = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        total += xs[i];
        weighted += (2.0 * static_cast<double>(i + 1) - n - 1.0) * xs[i];
    }
    if (total == 0.0)
        throw DataError("gini: undefined for an all-zero input");
    return weighted / (n * total);
}

std::vector<double> average_ranks(std::span<const double> xs) {
    std::vector<std::size_t> order(xs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::vector<double> ranks(xs.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]])
            ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k)
            ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

namespace {

// Centered, unit-norm copy; empty when the variance vanishes.
std::vector<double> standardize(std::span<const double> xs) {
    const double n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs)
        mean += x;
    mean /= n;
    std::vector<double> out(xs.size());
    double norm = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        out[i] = xs[i] - mean;
        norm += out[i] * out[i];
    }
    norm = std::sqrt(norm);
    if (!(norm > 0.0) || norm <= 1e-14 * std::sqrt(n) * (std::abs(mean) + 1e-300))
        return {};
    for (double &x : out)
        x /= norm;
    return out;
}

void fill_correlations(const std::vector<std::vector<double>> &z, std::vector<double> &out, std::size_t k) {
    out.assign(k * k, std::nan(""));
    for (std::size_t i = 0; i < k; ++i) {
        if (z[i].empty())
            continue;
        for (std::size_t j = i; j < k; ++j) {
            if (z[j].empty())
                continue;
            double r = 1.0;
            if (i != j) {
                r = 0.0;
                for (std::size_t e = 0; e < z[i].size(); ++e)
                    r += z[i][e] * z[j][e];
                r = std::clamp(r, -1.0, 1.0);
            }
            out[i * k + j] = out[j * k + i] = r;
        }
    }
}

} // namespace

CorrelationMatrix metric_correlations(std::span<const MetricVector> vectors, std::vector<std::string> names) {
    if (vectors.size() < 2)
        throw ParameterError("metric_correlations needs at least two vectors");
    for (const auto &v : vectors)
        if (v.ids != vectors.front().ids)
            throw DataError("metric_correlations: vectors must share the same entity set");
    if (vectors.front().size() < 2)
        throw DataError("metric_correlations: need at least two entities");
    CorrelationMatrix c;
    c.k = vectors.size();
    if (names.empty())
        for (const auto &v : vectors)
            names.emplace_back(to_string(v.kind));
    if (names.size() != c.k)
        throw ParameterError("metric_correlations: one name per vector required");
    c.names = std::move(names);

    std::vector<std::vector<double>> zp, zs;
    for (const auto &v : vectors) {
        zp.push_back(standardize(v.values));
        const auto ranks = average_ranks(v.values);
        zs.push_back(standardize(ranks));
        c.undefined.push_back(zp.back().empty());
    }
    fill_correlations(zp, c.pearson, c.k);
    fill_correlations(zs, c.spearman, c.k);
    return c;
}

// ---------------------------------------------------------------------------

namespace {

bool in_category(const PaperRecord &p, const std::optional<std::string> &category) {
    return !category || std::find(p.categories.begin(), p.categories.end(), *category) != p.categories.end();
}

} // namespace

TrendTables trend_series(const Dataset &d, const CitationGraph &g, const std::optional<std::string> &category) {
    TrendTables t;
    std::vector<node> papers;
    int first = std::numeric_limits<int>::max(), last = std::numeric_limits<int>::min();
    for (node p = 0; p < g.n_papers(); ++p) {
        if (g.dataset_index(p) == kNoNode)
            throw DataError("trend_series needs a graph built from a Dataset");
        if (!in_category(d.papers()[g.dataset_index(p)], category))
            continue;
        papers.push_back(p);
        first = std::min(first, g.year(p));
        last = std::max(last, g.year(p));
    }
    if (papers.empty())
        return t;

    struct Acc {
        std::size_t n = 0;
        double refs = 0, authors = 0, cites = 0, cites_pub = 0;
    };
    std::vector<Acc> acc(static_cast<std::size_t>(last - first + 1));
    for (auto p : papers) {
        auto &a = acc[static_cast<std::size_t>(g.year(p) - first)];
        const auto &rec = d.papers()[g.dataset_index(p)];
        ++a.n;
        a.refs += rec.declared_ref_count;
        a.authors += static_cast<double>(rec.authors.size());
        a.cites += g.citation_count(p);
        for (auto q : g.citations(p))
            if (d.papers()[g.dataset_index(q)].published)
                a.cites_pub += 1.0;
    }
    for (int y = first; y <= last; ++y) {
        const auto &a = acc[static_cast<std::size_t>(y - first)];
        TrendRow row;
        row.year = y;
        row.n_papers = a.n;
        if (a.n > 0) {
            const double n = static_cast<double>(a.n);
            row.mean_declared_refs = a.refs / n;
            row.mean_authors = a.authors / n;
            row.mean_citations = a.cites / n;
            row.mean_citations_from_published = a.cites_pub / n;
        }
        t.years.push_back(row);
    }

    // Author turnover from calendar-year presence.
    const std::size_t span = static_cast<std::size_t>(last - first + 2);
    std::vector<std::size_t> active(span, 0), born(span, 0), died(span, 0);
    std::vector<char> present(span);
    std::vector<char> in_graph(d.papers().size(), 0);
    for (auto p : papers)
        in_graph[g.dataset_index(p)] = 1;
    for (std::size_t a = 0; a < d.authors().size(); ++a) {
        std::fill(present.begin(), present.end(), 0);
        bool any = false;
        for (auto pi : d.author_papers(a))
            if (in_graph[pi]) {
                present[static_cast<std::size_t>(d.papers()[pi].date.year - first)] = 1;
                any = true;
            }
        if (!any)
            continue;
        for (std::size_t y = 0; y < span; ++y) {
            const bool prev = y > 0 && present[y - 1];
            if (present[y]) {
                ++active[y];
                if (!prev)
                    ++born[y];
            } else if (prev) {
                ++died[y];
            }
        }
    }
    for (std::size_t y = 0; y < span; ++y) {
        TurnoverRow row;
        row.year = first + static_cast<int>(y);
        row.active = active[y];
        row.born = born[y];
        row.died = died[y];
        row.born_pct = active[y] ? 100.0 * static_cast<double>(born[y]) / static_cast<double>(active[y]) : 0.0;
        row.died_pct =
            (y > 0 && active[y - 1]) ? 100.0 * static_cast<double>(died[y]) / static_cast<double>(active[y - 1]) : 0.0;
        t.turnover.push_back(row);
    }
    return t;
}

namespace {

TimeSeries time_series_impl(const Dataset &d, const GroupingScheme &scheme, const MetricVector &paper_metric,
                            const std::optional<std::string> &category, bool world_is_covered) {
    TimeSeries ts;
    ts.group_ids = scheme.group_ids;
    ts.group_names = scheme.group_names;
    struct Item {
        std::size_t row;
        std::size_t metric;
        int year;
    };
    std::vector<Item> items;
    int first = std::numeric_limits<int>::max(), last = std::numeric_limits<int>::min();
    for (std::size_t i = 0; i < paper_metric.size(); ++i) {
        const auto p = d.paper_index(paper_metric.ids[i]);
        if (!p)
            throw DataError("paper " + std::to_string(paper_metric.ids[i]) + " is not in the dataset");
        const auto &rec = d.papers()[*p];
        if (!in_category(rec, category))
            continue;
        items.push_back({*p, i, rec.date.year});
        first = std::min(first, rec.date.year);
        last = std::max(last, rec.date.year);
    }
    if (items.empty())
        return ts;
    const auto n_years = static_cast<std::size_t>(last - first + 1);
    std::vector<double> world(n_years, 0.0);
    ts.percent.assign(n_years, std::vector<double>(scheme.n_groups(), 0.0));
    for (const auto &it : items) {
        const auto y = static_cast<std::size_t>(it.year - first);
        const double m = paper_metric.values[it.metric];
        const auto gs = scheme.groups_of(it.row);
        const auto ws = scheme.weights_of(it.row);
        if (!world_is_covered || !gs.empty())
            world[y] += m;
        for (std::size_t k = 0; k < gs.size(); ++k)
            ts.percent[y][gs[k]] += ws[k] * m;
    }
    for (std::size_t y = 0; y < n_years; ++y) {
        ts.years.push_back(first + static_cast<int>(y));
        for (auto &x : ts.percent[y])
            x = world[y] != 0.0 ? 100.0 * x / world[y] : 0.0;
    }
    return ts;
}

} // namespace

TimeSeries time_series(const Dataset &d, const GroupingScheme &scheme, const MetricVector &paper_metric,
                       const std::optional<std::string> &category) {
    return time_series_impl(d, scheme, paper_metric, category, false);
}

GenderSummary gender_stats(const Dataset &d, const CitationGraph &g, const MetricVector &author_icit,
                           const MetricVector &author_rank, const std::optional<std::string> &category) {
    GenderSummary s;
    std::vector<char> in_graph(d.papers().size(), 0);
    for (node p = 0; p < g.n_papers(); ++p)
        if (g.dataset_index(p) != kNoNode)
            in_graph[g.dataset_index(p)] = 1;

    constexpr std::array<Gender, 3> kGenders{Gender::female, Gender::male, Gender::indeterminate};
    std::array<double, 3> count{}, icit{}, rank{};
    for (std::size_t a = 0; a < d.authors().size(); ++a) {
        const auto &rec = d.authors()[a];
        if (!rec.gender)
            continue;
        const auto papers = d.author_papers(a);
        if (std::none_of(papers.begin(), papers.end(), [&](auto p) { return in_graph[p] != 0; }))
            continue;
        const auto k = static_cast<std::size_t>(*rec.gender);
        count[k] += 1.0;
        icit[k] += author_icit.value_of(rec.author_id).value_or(0.0);
        rank[k] += author_rank.value_of(rec.author_id).value_or(0.0);
    }
    const double total_count = count[0] + count[1] + count[2];
    if (total_count == 0.0)
        return s;
    const double total_icit = icit[0] + icit[1] + icit[2];
    const double total_rank = rank[0] + rank[1] + rank[2];
    for (std::size_t k = 0; k < 3; ++k) {
        GenderShare share;
        share.gender = kGenders[k];
        share.n_authors = static_cast<std::size_t>(count[k]);
        share.author_pct = 100.0 * count[k] / total_count;
        share.icit_pct = total_icit != 0.0 ? 100.0 * icit[k] / total_icit : 0.0;
        share.rank_pct = total_rank != 0.0 ? 100.0 * rank[k] / total_rank : 0.0;
        s.shares.push_back(share);
    }
    s.female_icit = time_series_impl(d, gender_shares(d), n_icit_papers(g, RefCount::declared), category, true);
    return s;
}

std::map<std::string, GeoDenominator> read_geo_denominators(std::istream &in) {
    std::map<std::string, GeoDenominator> out;
    std::string line;
    if (!std::getline(in, line))
        throw DataError("geo denominators: missing header line");
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::istringstream fields(line);
        std::string country, pop, gdp;
        if (!std::getline(fields, country, ',') || !std::getline(fields, pop, ',') || !std::getline(fields, gdp))
            throw DataError("geo denominators line " + std::to_string(lineno) + ": expected 3 fields");
        try {
            out[country] = {std::stod(pop), std::stod(gdp)};
        } catch (const std::exception &) {
            throw DataError("geo denominators line " + std::to_string(lineno) + ": bad number");
        }
    }
    return out;
}

} // namespace citerank
