#include <citerank/author_metrics.hpp>
#include <citerank/fixture.hpp>

#include <doctest.h>

#include "oracle.hpp"

#include <sstream>

using namespace citerank;

namespace {

struct P {
    PaperId id;
    int year;
    std::vector<AuthorId> authors;
    std::vector<PaperId> refs = {};
    std::uint32_t declared = 0;
};

Dataset make(const std::vector<P> &papers, std::vector<AuthorId> author_ids) {
    Dataset::Builder b;
    for (auto a : author_ids)
        b.add(AuthorRecord{a, "", std::nullopt});
    for (const auto &p : papers) {
        PaperRecord r;
        r.paper_id = p.id;
        r.date = {p.year, 0, 0};
        r.references = p.refs;
        r.declared_ref_count = p.declared;
        for (auto a : p.authors)
            r.authors.push_back({a, {}});
        b.add(std::move(r));
    }
    return std::move(b).build().dataset;
}

Dataset fixture(std::uint64_t seed, std::size_t n) {
    FixtureParams p;
    p.seed = seed;
    p.n_papers = n;
    p.unresolved_author_prob = 0.05;
    std::stringstream s;
    gen_fixture(p, s);
    return ingest(s).dataset;
}

using T = AuthorFlowMatrix::Triplet;

} // namespace

TEST_CASE("author counts") {
    SUBCASE("two solo papers each cited once by a one-reference paper") {
        auto d = make({{1, 2000, {7}}, {2, 2000, {7}}, {3, 2001, {8}, {1}, 1}, {4, 2001, {8}, {2}, 1}}, {7, 8});
        auto c = author_counts(d, build_graph(d).graph);
        CHECK(c.n_pap.values[0] == 2);
        CHECK(c.n_ipap.values[0] == 2);
        CHECK(c.n_cit.values[0] == 2);
        CHECK(c.n_icit.values[0] == doctest::Approx(2.0));
    }
    SUBCASE("two authors share a citation from a four-reference paper") {
        auto d = make({{1, 2000, {7, 8}}, {2, 2001, {}, {1}, 4}}, {7, 8});
        auto c = author_counts(d, build_graph(d).graph);
        CHECK(c.n_icit.values[0] == doctest::Approx(0.125));
        CHECK(c.n_icit.values[1] == doctest::Approx(0.125));
        CHECK(c.n_ipap.values[1] == doctest::Approx(0.5));
        CHECK(c.papers_without_authors == 1);
    }
    SUBCASE("sum rules on fixtures") {
        auto d = fixture(2, 1500);
        auto g = build_graph(d).graph;
        auto c = author_counts(d, g);
        auto icit = n_icit_papers(g);
        double icit_with_authors = 0.0;
        std::size_t with_authors = 0;
        for (node p = 0; p < g.n_papers(); ++p)
            if (d.n_authors_of(g.dataset_index(p)) > 0) {
                ++with_authors;
                icit_with_authors += icit.values[p];
            }
        CHECK(c.n_ipap.sum() == doctest::Approx(static_cast<double>(with_authors)).epsilon(1e-12));
        CHECK(c.n_icit.sum() == doctest::Approx(icit_with_authors).epsilon(1e-12));
        CHECK(c.papers_without_authors == g.n_papers() - with_authors);
        CHECK(c.papers_without_authors > 0);
    }
    SUBCASE("graphs without a dataset are rejected") {
        std::vector<Date> dates(1, Date{2000, 0, 0});
        std::vector<std::uint32_t> declared(1, 0);
        auto g = CitationGraph::from_edges(dates, declared, {});
        CHECK_THROWS_AS(author_counts(Dataset{}, g), DataError);
    }
}

TEST_CASE("h-index") {
    CHECK(h_index_of({10, 5, 4, 2}) == 3);
    CHECK(h_index_of({}) == 0);
    CHECK(h_index_of({1, 1, 1, 1, 1}) == 1);
    CHECK(h_index_of({0, 0}) == 0);
    CHECK(h_index_of({100}) == 1);

    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::uint32_t> count(0, 30);
    for (int t = 0; t < 200; ++t) {
        std::vector<std::uint32_t> xs(rng() % 25);
        for (auto &x : xs)
            x = count(rng);
        std::uint32_t brute = 0;
        for (std::uint32_t h = 0; h <= xs.size(); ++h) {
            std::size_t at_least = 0;
            for (auto x : xs)
                at_least += x >= h ? 1 : 0;
            if (at_least >= h)
                brute = h;
        }
        CHECK(h_index_of(xs) == brute);
    }

    auto d = make({{1, 2000, {7}}, {2, 2000, {7}}, {3, 2001, {8}, {1, 2}}, {4, 2001, {8}, {1}}}, {7, 8, 9});
    auto h = h_index(d, build_graph(d).graph);
    CHECK(h.values == std::vector<double>{1, 0, 0});
}

TEST_CASE("paperrank of authors") {
    auto d = make({{1, 2000, {7}}, {2, 2000, {7, 8}}, {3, 2000, {}}}, {7, 8});
    MetricVector r;
    r.ids = {1, 2, 3};
    r.values = {7.0, 7.0, 5.0};
    auto v = paperrank_of_authors(r, d);
    CHECK(v.values[0] == doctest::Approx(10.5));
    CHECK(v.values[1] == doctest::Approx(3.5));
    CHECK(v.sum() == doctest::Approx(14.0));

    r.ids = {1, 99};
    r.values = {1.0, 1.0};
    CHECK_THROWS_AS(paperrank_of_authors(r, d), DataError);
}

TEST_CASE("flow matrix construction") {
    SUBCASE("solo paper with two declared references") {
        auto d = make({{1, 2000, {7}}, {2, 2001, {8}, {1}, 2}}, {7, 8});
        auto m = build_flow_matrix(d, build_graph(d).graph);
        CHECK(m.weight(1, 0) == doctest::Approx(0.5));
        CHECK(m.weight(0, 1) == 0.0);
        CHECK(m.nnz() == 1);
    }
    SUBCASE("self citation and remove_self") {
        auto d = make({{1, 2000, {7, 8}}, {2, 2001, {7}, {1}, 1}}, {7, 8});
        auto g = build_graph(d).graph;
        auto m = build_flow_matrix(d, g);
        CHECK(m.weight(0, 0) == doctest::Approx(0.5));
        CHECK(m.weight(0, 1) == doctest::Approx(0.5));
        FlowOptions opts;
        opts.remove_self = true;
        auto clean = build_flow_matrix(d, g, opts);
        CHECK(clean.weight(0, 0) == 0.0);
        CHECK(clean.self_citations_removed());
        CHECK(clean.weight(0, 1) == doctest::Approx(0.5));
    }
    SUBCASE("antisymmetrized pair") {
        std::vector<T> ts{{0, 1, 0.5}, {1, 0, 0.2}, {1, 1, 3.0}};
        auto m = AuthorFlowMatrix::from_triplets(2, ts).antisymmetrize();
        CHECK(m.weight(0, 1) == doctest::Approx(0.3));
        CHECK(m.weight(1, 0) == 0.0);
        CHECK(m.weight(1, 1) == 0.0);
        CHECK(m.antisymmetrized());
    }
    SUBCASE("from_triplets sums duplicates") {
        std::vector<T> ts{{0, 1, 0.25}, {0, 1, 0.25}, {2, 0, 1.0}};
        auto m = AuthorFlowMatrix::from_triplets(3, ts);
        CHECK(m.weight(0, 1) == 0.5);
        CHECK(m.nnz() == 2);
        CHECK(m.row_sum(2) == 1.0);
        CHECK(m.ids().size() == 3);
    }
    SUBCASE("weights on fixtures are nonnegative and thread-independent") {
        auto d = fixture(6, 1200);
        auto g = build_graph(d).graph;
        FlowOptions one, many;
        one.threads = 1;
        many.threads = 3;
        auto a = build_flow_matrix(d, g, one);
        auto b = build_flow_matrix(d, g, many);
        REQUIRE(a.nnz() == b.nnz());
        auto ta = a.triplets(), tb = b.triplets();
        for (std::size_t k = 0; k < ta.size(); ++k) {
            CHECK(ta[k].from == tb[k].from);
            CHECK(ta[k].to == tb[k].to);
            CHECK(ta[k].weight == doctest::Approx(tb[k].weight).epsilon(1e-13));
            CHECK(ta[k].weight >= 0.0);
        }
        // Row totals: what each author gives equals their share of in-dataset references.
        auto coin = citation_coin(d, g);
        auto flow = net_flow(a);
        for (std::size_t i = 0; i < coin.size(); ++i)
            CHECK(coin.values[i] == doctest::Approx(flow.values[i]).epsilon(1e-12));

        FlowOptions anti;
        anti.antisymmetrize = true;
        auto c = build_flow_matrix(d, g, anti);
        for (const auto &t : c.triplets()) {
            CHECK(t.from != t.to);
            CHECK(c.weight(t.to, t.from) == 0.0);
        }
    }
}

TEST_CASE("stochastic matrix") {
    std::vector<T> ts{{0, 1, 2.0}, {0, 2, 6.0}, {1, 0, 1.0}};
    auto s = make_stochastic(AuthorFlowMatrix::from_triplets(3, ts));
    CHECK(s.dangling == std::vector<std::uint32_t>{2});
    for (std::size_t a = 0; a < 2; ++a) {
        double sum = 0.0;
        for (auto k = s.row_offsets[a]; k < s.row_offsets[a + 1]; ++k)
            sum += s.probs[k];
        CHECK(std::abs(sum - 1.0) < 1e-12);
    }
}

TEST_CASE("authorrank") {
    SUBCASE("symmetric pair") {
        std::vector<T> ts{{0, 1, 1.0}, {1, 0, 1.0}};
        auto r = authorrank(AuthorFlowMatrix::from_triplets(2, ts));
        CHECK(r.values[0] == doctest::Approx(1.0));
        CHECK(r.values[1] == doctest::Approx(1.0));
    }
    SUBCASE("dangling author cited by the others") {
        std::vector<T> ts{{1, 0, 1.0}, {2, 0, 1.0}};
        auto m = AuthorFlowMatrix::from_triplets(3, ts);
        auto r = authorrank(m);
        auto dense = oracle::dense_authorrank(m, 0.9);
        CHECK(oracle::max_rel_err(r.values, dense) < 1e-9);
        CHECK(r.values[0] > r.values[1]);
        CHECK(r.sum() == doctest::Approx(3.0));
    }
    SUBCASE("single self-citing author") {
        std::vector<T> ts{{0, 0, 5.0}};
        auto r = authorrank(AuthorFlowMatrix::from_triplets(1, ts));
        CHECK(r.values[0] == doctest::Approx(1.0));
    }
    SUBCASE("random matrices against the dense solve") {
        std::mt19937_64 rng(19);
        std::uniform_real_distribution<double> w(0.01, 1.0);
        for (int t = 0; t < 10; ++t) {
            const std::size_t n = 20 + rng() % 60;
            std::vector<T> ts;
            for (std::uint32_t a = 0; a < n; ++a) {
                if (rng() % 5 == 0)
                    continue;   // dangling
                for (int k = 0; k < 4; ++k)
                    ts.push_back({a, static_cast<std::uint32_t>(rng() % n), w(rng)});
            }
            auto m = AuthorFlowMatrix::from_triplets(n, ts);
            AuthorRankOptions opts;
            opts.tolerance = 1e-13;
            opts.threads = 1 + t % 3;
            auto r = authorrank(m, opts);
            CHECK(oracle::max_rel_err(r.values, oracle::dense_authorrank(m, 0.9)) < 1e-9);
        }
    }
    SUBCASE("scaling the weights keeps the order") {
        std::vector<T> ts{{0, 1, 1.0}, {1, 2, 3.0}, {2, 0, 0.5}, {2, 1, 2.0}, {3, 1, 1.0}};
        auto a = authorrank(AuthorFlowMatrix::from_triplets(4, ts));
        for (auto &t : ts)
            t.weight *= 7.5;
        auto b = authorrank(AuthorFlowMatrix::from_triplets(4, ts));
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(a.values[i] == doctest::Approx(b.values[i]).epsilon(1e-12));
    }
    SUBCASE("parameter checks and non-convergence") {
        std::vector<T> ts{{0, 1, 1.0}, {1, 0, 1.0}, {1, 2, 1.0}};
        auto m = AuthorFlowMatrix::from_triplets(3, ts);
        AuthorRankOptions bad;
        bad.damping = 1.0;
        CHECK_THROWS_AS(authorrank(m, bad), ParameterError);
        AuthorRankOptions few;
        few.max_iters = 2;
        CHECK_THROWS_AS(authorrank(m, few), ConvergenceError);
    }
}

TEST_CASE("matrix-free authorrank matches the flow matrix route") {
    auto d = fixture(11, 1500);
    for (bool drop_self : {false, true}) {
        EdgeFilter f;
        f.drop_self_citations = drop_self;
        if (drop_self)
            f.window = YearRange::after(1995);
        auto g = build_graph(d, f).graph;
        AuthorRankOptions opts;
        opts.tolerance = 1e-13;
        auto via_matrix = authorrank(build_flow_matrix(d, g), opts);
        auto direct = authorrank(d, g, opts);
        CHECK(direct.ids == via_matrix.ids);
        CHECK(oracle::max_rel_err(direct.values, via_matrix.values) < 1e-10);
        opts.threads = 3;
        CHECK(authorrank(d, g, opts).values == direct.values);
    }
}

TEST_CASE("citation coin") {
    SUBCASE("received minus given") {
        // Author 7 writes paper 3 citing two papers of author 8 out of four declared references;
        // author 8's paper 2 cites author 7's paper 1 out of one.
        auto d = make({{1, 1990, {7}}, {2, 1995, {8}, {1}, 1}, {3, 2000, {7}, {2, 4}, 4}, {4, 1999, {8}}},
                      {7, 8});
        auto g = build_graph(d).graph;
        auto c = citation_coin(d, g);
        CHECK(c.values[0] == doctest::Approx(1.0 - 0.5));
        CHECK(c.values[1] == doctest::Approx(0.5 - 1.0));
        CHECK(std::abs(c.sum()) < 1e-12);
    }
    SUBCASE("zero sum and dual formula on fixtures") {
        for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
            auto d = fixture(seed, 50);
            auto g = build_graph(d).graph;
            auto c = citation_coin(d, g);
            auto m = net_flow(build_flow_matrix(d, g));
            CHECK(std::abs(c.sum()) < 1e-9);
            for (std::size_t i = 0; i < c.size(); ++i)
                CHECK(std::abs(c.values[i] - m.values[i]) < 1e-12);
        }
    }
    SUBCASE("immune to diagonal entries and cycles") {
        std::vector<T> ts{{0, 1, 0.5}, {1, 2, 0.2}, {2, 0, 0.1}, {3, 0, 1.0}};
        auto base = net_flow(AuthorFlowMatrix::from_triplets(4, ts));
        ts.push_back({2, 2, 9.0});
        ts.push_back({0, 1, 0.3});
        ts.push_back({1, 2, 0.3});
        ts.push_back({2, 0, 0.3});
        auto bumped = net_flow(AuthorFlowMatrix::from_triplets(4, ts));
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(std::abs(base.values[i] - bumped.values[i]) < 1e-12);
    }
}

TEST_CASE("citation coin plus") {
    SUBCASE("all papers below average") {
        auto d = make({{1, 2000, {7}}, {2, 2001, {8}, {1}, 3}}, {7, 8});
        CHECK(citation_coin_plus(d, build_graph(d).graph).sum() == 0.0);
    }
    SUBCASE("one positive and one negative solo paper") {
        std::vector<P> ps{{1, 2000, {7}}, {2, 2000, {7}}};
        for (PaperId q = 10; q < 15; ++q)
            ps.push_back({q, 2001, {8}, {1}, 1});
        auto d = make(ps, {7, 8});
        auto v = citation_coin_plus(d, build_graph(d).graph);
        CHECK(v.values[0] == doctest::Approx(4.0));
    }
    SUBCASE("never below the plain paper coin sum") {
        auto d = fixture(7, 800);
        auto g = build_graph(d).graph;
        auto plus = citation_coin_plus(d, g);
        auto cc = ccoin_papers(g);
        std::vector<double> plain(d.authors().size(), 0.0);
        for (node p = 0; p < g.n_papers(); ++p) {
            const auto authors = d.paper_authors(g.dataset_index(p));
            for (auto a : authors)
                plain[a] += cc.values[p] / static_cast<double>(authors.size());
        }
        for (std::size_t a = 0; a < plain.size(); ++a)
            CHECK(plus.values[a] >= plain[a] - 1e-12);
    }
}
