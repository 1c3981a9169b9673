#include <citerank/author_metrics.hpp>
#include <citerank/fixture.hpp>
#include <citerank/group_metrics.hpp>

#include <doctest.h>

#include "oracle.hpp"

#include <numbers>
#include <sstream>

using namespace citerank;

namespace {

InstitutionRecord inst(InstitutionId id, std::string name, std::optional<double> lat = {},
                       std::optional<double> lon = {}, std::optional<std::string> country = {},
                       std::optional<Continent> continent = {}) {
    return {id, std::move(name), lat, lon, std::move(country), continent};
}

PaperRecord paper(PaperId id, int year, std::vector<AuthorLink> authors, std::vector<PaperId> refs = {},
                  std::uint32_t declared = 0) {
    PaperRecord p;
    p.paper_id = id;
    p.date = {year, 0, 0};
    p.authors = std::move(authors);
    p.references = std::move(refs);
    p.declared_ref_count = declared;
    return p;
}

// CERN = 1, INFN-Pisa = 2, Pisa U = 3, INFN-Genova = 4.
Dataset share_example() {
    Dataset::Builder b;
    b.add(inst(1, "CERN", 46.23, 6.05, "CH", Continent::europe))
        .add(inst(2, "INFN-Pisa", 43.72, 10.40, "IT", Continent::europe))
        .add(inst(3, "Pisa U", 43.72, 10.40, "IT", Continent::europe))
        .add(inst(4, "INFN-Genova", 44.41, 8.93, "IT", Continent::europe));
    b.add(AuthorRecord{1, "", Gender::male}).add(AuthorRecord{2, "", Gender::female});
    b.add(paper(10, 2000, {{1, {1, 2, 3}}, {2, {1, 4}}}));
    b.add(paper(11, 2001, {{1, {1}}}, {10}, 1));
    return std::move(b).build().dataset;
}

Dataset fixture(std::uint64_t seed, std::size_t n) {
    FixtureParams p;
    p.seed = seed;
    p.n_papers = n;
    std::stringstream s;
    gen_fixture(p, s);
    return ingest(s).dataset;
}

MetricVector paper_values(std::vector<PaperId> ids, std::vector<double> values) {
    MetricVector v;
    v.ids = std::move(ids);
    v.values = std::move(values);
    return v;
}

void check_share_conservation(const GroupingScheme &s) {
    std::size_t covered = 0;
    for (std::size_t p = 0; p < s.n_papers(); ++p) {
        const auto ws = s.weights_of(p);
        if (ws.empty())
            continue;
        ++covered;
        double sum = 0.0;
        for (double w : ws) {
            CHECK(w > 0.0);
            CHECK(w <= 1.0 + 1e-15);
            sum += w;
        }
        CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
    CHECK(covered + s.uncovered_papers == s.n_papers());
}

double gini_brute(const std::vector<double> &xs) {
    double num = 0.0, total = 0.0;
    for (double x : xs) {
        total += x;
        for (double y : xs)
            num += std::abs(x - y);
    }
    return num / (2.0 * static_cast<double>(xs.size()) * total);
}

} // namespace

TEST_CASE("institution shares") {
    SUBCASE("two-author example") {
        auto d = share_example();
        auto s = institution_shares(d);
        CHECK(s.share(0, 0) == doctest::Approx(5.0 / 12).epsilon(1e-15));
        CHECK(s.share(0, 1) == doctest::Approx(1.0 / 6).epsilon(1e-15));
        CHECK(s.share(0, 2) == doctest::Approx(1.0 / 6).epsilon(1e-15));
        CHECK(s.share(0, 3) == doctest::Approx(1.0 / 4).epsilon(1e-15));
        CHECK(s.share(1, 0) == 1.0);
        check_share_conservation(s);
    }
    SUBCASE("author without affiliation is renormalized away") {
        Dataset::Builder b;
        b.add(inst(1, "A")).add(inst(2, "B"));
        b.add(AuthorRecord{1, "", {}}).add(AuthorRecord{2, "", {}});
        b.add(paper(1, 2000, {{1, {1, 2}}, {2, {}}}));
        b.add(paper(2, 2000, {{2, {}}}));
        auto d = std::move(b).build().dataset;
        auto s = institution_shares(d);
        CHECK(s.share(0, 0) == 0.5);
        CHECK(s.share(0, 1) == 0.5);
        CHECK(s.groups_of(1).empty());
        CHECK(s.uncovered_papers == 1);
    }
    SUBCASE("unresolved authors still carry affiliations") {
        Dataset::Builder b;
        b.add(inst(1, "A"));
        b.add(paper(1, 2000, {{std::nullopt, {1}}}));
        auto s = institution_shares(std::move(b).build().dataset);
        CHECK(s.share(0, 0) == 1.0);
    }
}

TEST_CASE("group_metric") {
    auto d = share_example();
    auto s = institution_shares(d);
    auto v = group_metric(s, paper_values({10, 11}, {2.0, 0.0}));
    CHECK(v.values[0] == doctest::Approx(5.0 / 6));
    CHECK(v.entity == EntityKind::institution);
    CHECK(v.sum() == doctest::Approx(2.0));

    auto missing = paper_values({10, 12}, {1.0, 1.0});
    CHECK_THROWS_AS(group_metric(s, missing), DataError);

    MetricVector author_metric;
    author_metric.entity = EntityKind::author;
    CHECK_THROWS_AS(group_metric(s, author_metric), DataError);
}

TEST_CASE("countries sum their institutions") {
    auto d = fixture(21, 2000);
    auto g = build_graph(d).graph;
    auto icit = n_icit_papers(g);
    auto by_inst = group_metric(institution_shares(d), icit);
    auto countries = country_shares(d);
    auto by_country = group_metric(countries, icit);
    for (std::size_t c = 0; c < countries.n_groups(); ++c) {
        double sum = 0.0;
        for (std::size_t i = 0; i < d.institutions().size(); ++i)
            if (d.institutions()[i].country_code == countries.group_names[c])
                sum += by_inst.values[i];
        CHECK(by_country.values[c] == doctest::Approx(sum).epsilon(1e-12));
    }
    CHECK(by_country.sum() == doctest::Approx(by_inst.sum()).epsilon(1e-12));
}

TEST_CASE("single group covering everything totals the metric") {
    Dataset::Builder b;
    b.add(inst(1, "Only"));
    b.add(AuthorRecord{1, "", {}});
    for (PaperId p = 1; p <= 5; ++p)
        b.add(paper(p, 2000, {{1, {1}}}));
    auto d = std::move(b).build().dataset;
    auto v = group_metric(institution_shares(d), paper_values({1, 2, 3, 4, 5}, {1, 2, 3, 4, 5}));
    CHECK(v.values[0] == doctest::Approx(15.0));
}

TEST_CASE("share conservation for every scheme on a random fixture") {
    auto d = fixture(33, 10'000);
    const auto towns = cluster_towns(d.institutions());
    for (const auto &s : {institution_shares(d), town_shares(d, towns), country_shares(d), continent_shares(d),
                          journal_shares(d), gender_shares(d)})
        check_share_conservation(s);
}

TEST_CASE("haversine") {
    CHECK(haversine_km(0, 0, 0, 0) == 0.0);
    const double quarter = kEarthRadiusKm * std::numbers::pi / 2;
    CHECK(haversine_km(0, 0, 0, 90) == doctest::Approx(quarter).epsilon(1e-12));
    CHECK(haversine_km(0, 0, 90, 0) == doctest::Approx(quarter).epsilon(1e-12));
    CHECK(haversine_km(0, 0, 0, 180) == doctest::Approx(2 * quarter).epsilon(1e-12));
    CHECK(haversine_km(46.2, 6.1, 43.7, 10.4) == doctest::Approx(haversine_km(43.7, 10.4, 46.2, 6.1)));
}

TEST_CASE("town clustering") {
    const double deg_per_km = 180.0 / (std::numbers::pi * kEarthRadiusKm);
    SUBCASE("10 km apart") {
        std::vector<InstitutionRecord> is{inst(1, "a", 0, 0), inst(2, "b", 0, 10 * deg_per_km)};
        CHECK(cluster_towns(is).n_clusters() == 1);
    }
    SUBCASE("single linkage chain") {
        std::vector<InstitutionRecord> is{inst(1, "a", 0, 0), inst(2, "b", 0, 25 * deg_per_km),
                                          inst(3, "c", 0, 50 * deg_per_km)};
        CHECK(haversine_km(0, 0, 0, 50 * deg_per_km) > 30.0);
        auto t = cluster_towns(is);
        CHECK(t.n_clusters() == 1);
        CHECK(t.representative == std::vector<InstitutionId>{1});
    }
    SUBCASE("100 km apart") {
        std::vector<InstitutionRecord> is{inst(1, "a", 0, 0), inst(2, "b", 100 * deg_per_km, 0)};
        CHECK(cluster_towns(is).n_clusters() == 2);
    }
    SUBCASE("missing and invalid coordinates") {
        std::vector<InstitutionRecord> is{inst(5, "a", 0, 0), inst(3, "none"), inst(4, "bad", 91.0, 0.0),
                                          inst(6, "half", 10.0, {})};
        auto t = cluster_towns(is);
        CHECK(t.without_coordinates == std::vector<InstitutionId>{3});
        CHECK(t.invalid_coordinates == std::vector<InstitutionId>{4, 6});
        CHECK(t.n_clusters() == 2);
        CHECK(t.cluster_of[2] == kNoNode);
        CHECK(t.cluster_of[3] == kNoNode);
        CHECK_THROWS_AS(cluster_towns(is, -1.0), ParameterError);
    }
    SUBCASE("partition, brute-force agreement and order invariance") {
        auto d = fixture(8, 10);
        std::vector<InstitutionRecord> is(d.institutions().begin(), d.institutions().end());
        auto t = cluster_towns(is);
        // Brute force single linkage.
        const std::size_t n = is.size();
        std::vector<std::size_t> comp(n);
        std::iota(comp.begin(), comp.end(), 0);
        for (bool changed = true; changed;) {
            changed = false;
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b)
                    if (haversine_km(*is[a].latitude, *is[a].longitude, *is[b].latitude, *is[b].longitude) <= 30.0 &&
                        comp[b] > comp[a]) {
                        comp[b] = comp[a];
                        changed = true;
                    }
        }
        for (std::size_t a = 0; a < n; ++a) {
            CHECK(t.cluster_of[a] < t.n_clusters());
            for (std::size_t b = 0; b < n; ++b)
                CHECK((comp[a] == comp[b]) == (t.cluster_of[a] == t.cluster_of[b]));
        }
        CHECK(t.n_clusters() < n);

        std::vector<InstitutionRecord> reversed(is.rbegin(), is.rend());
        auto r = cluster_towns(reversed);
        CHECK(r.representative == t.representative);
        for (std::size_t a = 0; a < n; ++a)
            CHECK(r.cluster_of[n - 1 - a] == t.cluster_of[a]);
    }
}

TEST_CASE("affiliate rank table") {
    SUBCASE("single active author") {
        Dataset::Builder b;
        b.add(inst(1, "A")).add(AuthorRecord{1, "", {}});
        b.add(paper(1, 2017, {{1, {1}}}));
        auto d = std::move(b).build().dataset;
        auto t = affiliate_rank_table(d, {}, YearRange::after(2017));
        CHECK(t.n_iaut[0] == 1.0);
        CHECK(t.active_authors == 1);
    }
    SUBCASE("split and averaged affiliations") {
        Dataset::Builder b;
        b.add(inst(1, "I1")).add(inst(2, "I2"));
        b.add(AuthorRecord{1, "", {}}).add(AuthorRecord{2, "", {}}).add(AuthorRecord{3, "", {}});
        b.add(paper(1, 2016, {{1, {1}}}));
        b.add(paper(2, 2017, {{1, {1, 2}}, {2, {1, 2}}}));
        b.add(paper(3, 2017, {{3, {}}}));
        b.add(paper(4, 2010, {{3, {2}}}));
        auto d = std::move(b).build().dataset;
        NamedMetric m{"score", {}};
        m.values.ids = {1, 2, 3};
        m.values.values = {4.0, 2.0, 2.0};
        std::vector<NamedMetric> metrics{m};
        auto t = affiliate_rank_table(d, metrics, YearRange{2016, 2017});
        CHECK(t.n_iaut[0] == doctest::Approx(0.75 + 0.5));
        CHECK(t.n_iaut[1] == doctest::Approx(0.25 + 0.5));
        CHECK(t.active_authors == 3);
        CHECK(t.active_without_affiliation == 1);
        CHECK(t.percentages[0][0] == doctest::Approx(100.0 * (0.75 * 4 + 0.5 * 2) / 8));
        CHECK(t.percentages[0][1] == doctest::Approx(100.0 * (0.25 * 4 + 0.5 * 2) / 8));
    }
}

TEST_CASE("journal table") {
    Dataset::Builder b;
    b.add(JournalRecord{1, "J1"}).add(JournalRecord{2, "Proceedings"}).add(JournalRecord{3, "Empty"});
    for (PaperId p = 1; p <= 2; ++p) {
        auto rec = paper(p, 2000, {});
        rec.journal_id = 1;
        b.add(rec);
    }
    for (PaperId p = 100; p < 110; ++p) {
        auto rec = paper(p, 2000, {});
        rec.journal_id = 2;
        b.add(rec);
    }
    // Five individual citations into journal 1.
    b.add(paper(200, 2001, {}, {1, 2}, 2));
    b.add(paper(201, 2001, {}, {1}, 1));
    b.add(paper(202, 2001, {}, {1, 2}, 1));
    b.add(paper(203, 2001, {}, {2}, 1));
    b.add(paper(204, 2001, {}, {1}, 1));
    auto d = std::move(b).build().dataset;
    auto rows = journal_table(d, build_graph(d).graph);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].journal_id == 1);
    CHECK(rows[0].n_icit == doctest::Approx(5.0));
    CHECK(rows[0].n_icit_per_paper == doctest::Approx(2.5));
    CHECK(rows[0].ccoin == doctest::Approx(3.0));
    CHECK(rows[1].ccoin == doctest::Approx(-10.0));
    CHECK_FALSE(rows[2].journal_id);
    CHECK(rows[2].n_pap == 5);
    std::size_t published = 0;
    for (std::size_t i = 0; i + 1 < rows.size(); ++i)
        published += rows[i].n_pap;
    CHECK(published == 12);

    auto windowed = journal_table(d, build_graph(d).graph, YearRange::after(2001));
    REQUIRE(windowed.size() == 1);
    CHECK(windowed[0].n_pap == 5);
}

TEST_CASE("gini") {
    std::vector<double> equal{1, 1, 1, 1}, one{0, 0, 0, 1}, ramp{1, 2, 3, 4};
    CHECK(gini(equal) == 0.0);
    CHECK(gini(one) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(gini(ramp) == doctest::Approx(0.25).epsilon(1e-15));
    std::vector<double> zeros{0, 0}, negative{1, -1};
    CHECK_THROWS_AS(gini(zeros), DataError);
    CHECK_THROWS_AS(gini(negative), DataError);
    CHECK_THROWS_AS(gini(std::vector<double>{}), DataError);

    std::mt19937_64 rng(2);
    std::exponential_distribution<double> e(0.3);
    for (int t = 0; t < 30; ++t) {
        std::vector<double> xs(1 + rng() % 40);
        for (auto &x : xs)
            x = e(rng);
        const double g = gini(xs);
        CHECK(std::abs(g - gini_brute(xs)) < 1e-12);
        CHECK(g >= 0.0);
        CHECK(g <= 1.0 - 1.0 / static_cast<double>(xs.size()) + 1e-12);
        auto scaled = xs;
        for (auto &x : scaled)
            x *= 13.0;
        CHECK(gini(scaled) == doctest::Approx(g).epsilon(1e-12));
    }
}

TEST_CASE("average ranks") {
    std::vector<double> xs{3, 1, 3, 2};
    CHECK(average_ranks(xs) == std::vector<double>{3.5, 1, 3.5, 2});
}

TEST_CASE("metric correlations") {
    MetricVector x, y, flat;
    x.ids = y.ids = flat.ids = {1, 2, 3, 4};
    x.values = {1, 2, 3, 10};
    y.values = {-1, -2, -3, -10};
    flat.values = {5, 5, 5, 5};
    std::vector<MetricVector> vs{x, y, flat};
    auto c = metric_correlations(vs, {"x", "y", "flat"});
    CHECK(c.pearson_at(0, 0) == 1.0);
    CHECK(c.pearson_at(0, 1) == doctest::Approx(-1.0));
    CHECK(c.spearman_at(0, 1) == doctest::Approx(-1.0));
    CHECK(c.undefined == std::vector<bool>{false, false, true});
    CHECK(std::isnan(c.pearson_at(0, 2)));
    CHECK(std::isnan(c.spearman_at(2, 2)));

    std::vector<MetricVector> single{x};
    CHECK_THROWS_AS(metric_correlations(single), ParameterError);
    MetricVector other = x;
    other.ids = {1, 2, 3, 5};
    std::vector<MetricVector> mismatched{x, other};
    CHECK_THROWS_AS(metric_correlations(mismatched), DataError);

    SUBCASE("symmetric positive semidefinite on fixture metrics") {
        auto d = fixture(44, 2000);
        auto g = build_graph(d).graph;
        std::vector<MetricVector> ms{n_cit(g), n_icit_papers(g), paperrank(g), ccoin_papers(g)};
        auto m = metric_correlations(ms);
        for (const auto *mat : {&m.pearson, &m.spearman}) {
            Eigen::MatrixXd e(4, 4);
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    e(i, j) = (*mat)[static_cast<std::size_t>(i * 4 + j)];
                    CHECK(e(i, j) == (*mat)[static_cast<std::size_t>(j * 4 + i)]);
                }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(e);
            CHECK(es.eigenvalues().minCoeff() >= -1e-10);
        }
        CHECK(m.names[0] == "ncit");
        // Individual citations track raw citations more closely than PaperRank does.
        CHECK(m.spearman_at(0, 1) > m.spearman_at(0, 2));
    }
}

TEST_CASE("trend series") {
    SUBCASE("mean references") {
        Dataset::Builder b;
        b.add(paper(1, 2000, {}, {}, 4)).add(paper(2, 2000, {}, {}, 6));
        auto d = std::move(b).build().dataset;
        auto t = trend_series(d, build_graph(d).graph);
        REQUIRE(t.years.size() == 1);
        CHECK(t.years[0].mean_declared_refs == 5.0);
    }
    SUBCASE("birth and death years, empty years") {
        Dataset::Builder b;
        b.add(AuthorRecord{1, "", {}}).add(AuthorRecord{2, "", {}});
        b.add(paper(1, 2001, {{1, {}}}));
        b.add(paper(2, 2003, {{1, {}}, {2, {}}}));
        auto d = std::move(b).build().dataset;
        auto t = trend_series(d, build_graph(d).graph);
        REQUIRE(t.years.size() == 3);
        CHECK(t.years[1].year == 2002);
        CHECK(t.years[1].n_papers == 0);
        CHECK(t.years[1].mean_citations == 0.0);
        CHECK(t.years[2].mean_authors == 2.0);
        REQUIRE(t.turnover.size() == 4);
        CHECK(t.turnover[0].born == 1);
        CHECK(t.turnover[1].died == 1);
        CHECK(t.turnover[1].died_pct == 100.0);
        CHECK(t.turnover[2].born == 2);
        CHECK(t.turnover[2].born_pct == 100.0);
        CHECK(t.turnover[3].year == 2004);
        CHECK(t.turnover[3].died == 2);
    }
    SUBCASE("citations from published citers and categories") {
        Dataset::Builder b;
        auto a = paper(1, 2000, {});
        a.categories = {"hep-th"};
        auto c1 = paper(2, 2001, {}, {1});
        c1.published = true;
        auto c2 = paper(3, 2001, {}, {1});
        b.add(a).add(c1).add(c2);
        auto d = std::move(b).build().dataset;
        auto g = build_graph(d).graph;
        auto t = trend_series(d, g);
        CHECK(t.years[0].mean_citations == 2.0);
        CHECK(t.years[0].mean_citations_from_published == 1.0);
        auto th = trend_series(d, g, std::string("hep-th"));
        CHECK(th.years.size() == 1);
        CHECK(trend_series(d, g, std::string("none")).years.empty());
    }
}

TEST_CASE("time series") {
    auto d = fixture(50, 3000);
    auto g = build_graph(d).graph;
    auto icit = n_icit_papers(g);
    SUBCASE("a partition of the world sums to 100 per year") {
        // Every fixture paper lists at least one affiliation.
        REQUIRE(institution_shares(d).uncovered_papers == 0);
        auto ts = time_series(d, institution_shares(d), icit);
        for (std::size_t y = 0; y < ts.years.size(); ++y) {
            double sum = 0.0;
            for (double x : ts.percent[y])
                sum += x;
            CHECK((sum == 0.0 || std::abs(sum - 100.0) < 0.01));
        }
    }
    SUBCASE("category totals are renormalized within the category") {
        auto ts = time_series(d, institution_shares(d), icit, std::string("hep-th"));
        CHECK_FALSE(ts.years.empty());
        for (std::size_t y = 0; y < ts.years.size(); ++y) {
            double sum = 0.0;
            for (double x : ts.percent[y])
                sum += x;
            CHECK((sum == 0.0 || std::abs(sum - 100.0) < 0.01));
        }
    }
}

TEST_CASE("gender stats") {
    SUBCASE("two authors") {
        Dataset::Builder b;
        b.add(AuthorRecord{1, "", Gender::female}).add(AuthorRecord{2, "", Gender::male});
        b.add(AuthorRecord{3, "", std::nullopt});
        b.add(paper(1, 2000, {{1, {}}})).add(paper(2, 2000, {{2, {}}})).add(paper(3, 2000, {{3, {}}}));
        auto d = std::move(b).build().dataset;
        auto g = build_graph(d).graph;
        MetricVector icit, rank;
        icit.ids = rank.ids = {1, 2, 3};
        icit.values = {3, 1, 50};
        rank.values = {1, 1, 1};
        auto s = gender_stats(d, g, icit, rank);
        REQUIRE(s.shares.size() == 3);
        CHECK(s.shares[0].gender == Gender::female);
        CHECK(s.shares[0].icit_pct == doctest::Approx(75.0));
        CHECK(s.shares[0].author_pct == doctest::Approx(50.0));
        CHECK(s.shares[2].n_authors == 0);
    }
    SUBCASE("everybody female") {
        Dataset::Builder b;
        b.add(AuthorRecord{1, "", Gender::female}).add(AuthorRecord{2, "", Gender::female});
        b.add(paper(1, 2000, {{1, {}}})).add(paper(2, 2001, {{2, {}}}, {1}));
        auto d = std::move(b).build().dataset;
        auto g = build_graph(d).graph;
        auto counts = author_counts(d, g);
        auto s = gender_stats(d, g, counts.n_icit, counts.n_pap);
        CHECK(s.shares[0].author_pct == 100.0);
        CHECK(s.shares[0].icit_pct == 100.0);
        REQUIRE_FALSE(s.female_icit.years.empty());
        CHECK(s.female_icit.percent[0][0] == 100.0);
    }
    SUBCASE("nobody tagged") {
        Dataset::Builder b;
        b.add(AuthorRecord{1, "", std::nullopt});
        b.add(paper(1, 2000, {{1, {}}}));
        auto d = std::move(b).build().dataset;
        auto g = build_graph(d).graph;
        auto counts = author_counts(d, g);
        CHECK(gender_stats(d, g, counts.n_icit, counts.n_pap).shares.empty());
    }
    SUBCASE("shares sum to 100 on fixtures") {
        auto d = fixture(61, 2000);
        auto g = build_graph(d).graph;
        auto counts = author_counts(d, g);
        auto rank = paperrank_of_authors(paperrank(g), d);
        auto s = gender_stats(d, g, counts.n_icit, rank);
        double a = 0, i = 0, r = 0;
        for (const auto &sh : s.shares) {
            a += sh.author_pct;
            i += sh.icit_pct;
            r += sh.rank_pct;
        }
        CHECK(a == doctest::Approx(100.0));
        CHECK(i == doctest::Approx(100.0));
        CHECK(r == doctest::Approx(100.0));
    }
}

TEST_CASE("geo denominators") {
    std::istringstream good("country,population,gdp_usd\nCH,8.7e6,8.0e11\r\n\nIT,5.9e7,2.1e12\n");
    auto m = read_geo_denominators(good);
    CHECK(m.size() == 2);
    CHECK(m["CH"].population == 8.7e6);
    std::istringstream bad("country,population,gdp_usd\nCH,lots,1\n");
    CHECK_THROWS_AS(read_geo_denominators(bad), DataError);
    std::istringstream short_line("country,population,gdp_usd\nCH,1\n");
    CHECK_THROWS_AS(read_geo_denominators(short_line), DataError);
    std::istringstream empty("");
    CHECK_THROWS_AS(read_geo_denominators(empty), DataError);
}
