#include <citerank/author_metrics.hpp>
#include <citerank/cli.hpp>
#include <citerank/group_metrics.hpp>
#include <citerank/paper_metrics.hpp>
#include <citerank/parallel.hpp>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <numeric>
#include <variant>

namespace citerank::cli {

namespace {

using json = nlohmann::ordered_json;

const std::vector<std::string> kSubcommands{"ingest",       "rank-papers", "rank-authors",
                                            "author-report", "rank-groups", "timeseries",
                                            "trends",       "correlations", "gen-fixture"};
const std::vector<std::string> kPaperMetrics{"ncit", "nicit", "paperrank", "arp", "ccoin"};
const std::vector<std::string> kAuthorMetrics{"npap",  "ncit",  "h",     "nipap",     "nicit",
                                              "prank", "arank", "ccoin", "ccoin-plus"};
const std::vector<std::string> kGroupings{"institution", "town", "country", "continent", "journal", "gender"};

bool one_of(const std::string &s, const std::vector<std::string> &options) {
    return std::find(options.begin(), options.end(), s) != options.end();
}

std::string joined(const std::vector<std::string> &options) {
    std::string out;
    for (const auto &o : options)
        out += (out.empty() ? "" : "|") + o;
    return out;
}

class IoError : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Output tables

using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

std::string number(double x) {
    return std::isfinite(x) ? fmt::format("{}", x) : std::string{};
}

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + '"';
}

class TableWriter {
public:
    TableWriter(std::ostream &out, bool jsonl, std::vector<std::string> columns)
        : out_(out), jsonl_(jsonl), columns_(std::move(columns)) {
        if (!jsonl_) {
            for (std::size_t i = 0; i < columns_.size(); ++i)
                out_ << (i ? "," : "") << columns_[i];
            out_ << '\n';
        }
    }

    void row(const std::vector<Cell> &cells) {
        ++rows_;
        if (jsonl_) {
            json j = json::object();
            for (std::size_t i = 0; i < columns_.size(); ++i) {
                const auto &c = cells[i];
                if (auto v = std::get_if<std::int64_t>(&c))
                    j[columns_[i]] = *v;
                else if (auto x = std::get_if<double>(&c))
                    j[columns_[i]] = std::isfinite(*x) ? json(*x) : json(nullptr);
                else if (auto s = std::get_if<std::string>(&c))
                    j[columns_[i]] = *s;
                else
                    j[columns_[i]] = nullptr;
            }
            out_ << j.dump() << '\n';
            return;
        }
        for (std::size_t i = 0; i < columns_.size(); ++i) {
            if (i)
                out_ << ',';
            const auto &c = cells[i];
            if (auto v = std::get_if<std::int64_t>(&c))
                out_ << *v;
            else if (auto x = std::get_if<double>(&c))
                out_ << number(*x);
            else if (auto s = std::get_if<std::string>(&c))
                out_ << csv_field(*s);
        }
        out_ << '\n';
    }

    std::size_t rows() const noexcept { return rows_; }

private:
    std::ostream &out_;
    bool jsonl_;
    std::vector<std::string> columns_;
    std::size_t rows_ = 0;
};

// Indices sorted by score descending, ties and NaN broken by id ascending.
std::vector<std::size_t> ranking(const MetricVector &v, std::optional<std::size_t> top) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double x = v.values[a], y = v.values[b];
        if (std::isnan(x) || std::isnan(y))
            return !std::isnan(x) && std::isnan(y);
        return x > y;
    });
    if (top && *top < order.size())
        order.resize(*top);
    return order;
}

json report_json(const IngestReport &r) {
    return {{"records_read", r.records_read},
            {"records_kept", r.records_kept},
            {"dropped_malformed", r.dropped_malformed},
            {"dropped_bad_date", r.dropped_bad_date},
            {"dropped_duplicate_id", r.dropped_duplicate_id},
            {"external_refs", r.external_refs},
            {"duplicate_refs", r.duplicate_refs},
            {"self_refs", r.self_refs},
            {"declared_ref_fixups", r.declared_ref_fixups},
            {"dangling_author_ids", r.dangling_author_ids},
            {"dangling_affiliation_ids", r.dangling_affiliation_ids},
            {"dangling_journal_ids", r.dangling_journal_ids},
            {"invalid_coordinates", r.invalid_coordinates},
            {"papers_without_authors", r.papers_without_authors},
            {"messages", r.messages}};
}

json filter_json(const FilterReport &r) {
    return {{"raw_edges", r.raw_edges},
            {"kept", r.kept},
            {"acausal", r.acausal},
            {"self_citations", r.self_citations},
            {"window_excluded", r.window_excluded},
            {"unpublished_citer", r.unpublished_citer}};
}

// ---------------------------------------------------------------------------
// Run context

struct Context {
    const RunConfig &cfg;
    std::ostream &stdout_stream;
    std::shared_ptr<spdlog::logger> log;
    json summary = json::object();

    Dataset data;
    GraphBuildResult graph;
    std::unique_ptr<std::ofstream> file;

    Context(const RunConfig &c, std::ostream &out, std::shared_ptr<spdlog::logger> l)
        : cfg(c), stdout_stream(out), log(std::move(l)) {}

    std::ostream &output() {
        if (cfg.output == "-")
            return stdout_stream;
        if (!file) {
            file = std::make_unique<std::ofstream>(cfg.output, std::ios::binary | std::ios::trunc);
            if (!*file)
                throw IoError("cannot open output file " + cfg.output);
        }
        return *file;
    }

    void finish_output() {
        if (file) {
            file->flush();
            if (!*file)
                throw IoError("failed writing " + cfg.output);
            file->close();
        } else {
            stdout_stream.flush();
        }
        summary["output"] = cfg.output;
    }

    bool jsonl() const { return cfg.format == "jsonl"; }

    void load_dataset() {
        std::ifstream in(cfg.input, std::ios::binary);
        if (!in)
            throw IoError("cannot open input file " + cfg.input);
        IngestOptions opts;
        opts.lenient = !cfg.strict;
        auto r = ingest(in, opts);
        if (in.bad())
            throw IoError("failed reading " + cfg.input);
        log->info("ingested {} records, kept {}", r.report.records_read, r.report.records_kept);
        if (r.report.dropped() > 0)
            log->warn("dropped {} records; see the run summary", r.report.dropped());
        summary["ingest"] = report_json(r.report);
        summary["dataset"] = {{"papers", r.dataset.papers().size()},
                              {"authors", r.dataset.authors().size()},
                              {"institutions", r.dataset.institutions().size()},
                              {"journals", r.dataset.journals().size()}};
        data = std::move(r.dataset);
    }

    EdgeFilter filter() const {
        EdgeFilter f;
        f.drop_self_citations = cfg.no_self_citations;
        f.published_only = cfg.published_only;
        if (cfg.after)
            f.window = YearRange::after(*cfg.after);
        return f;
    }

    void load_graph() {
        const auto f = filter();
        std::string cache = "off";
        std::optional<GraphBuildResult> built;
        if (!cfg.graph_cache.empty()) {
            const auto fp = graph_fingerprint(data, f);
            if (std::ifstream in(cfg.graph_cache, std::ios::binary); in) {
                built = GraphCodec::load(in, fp);
                cache = built ? "hit" : "stale";
            } else {
                cache = "miss";
            }
            if (!built) {
                built = build_graph(data, f);
                std::ofstream out(cfg.graph_cache, std::ios::binary | std::ios::trunc);
                if (!out)
                    throw IoError("cannot write graph cache " + cfg.graph_cache);
                GraphCodec::save(*built, fp, out);
                if (!out)
                    throw IoError("failed writing graph cache " + cfg.graph_cache);
            }
        } else {
            built = build_graph(data, f);
        }
        graph = std::move(*built);
        log->info("graph: {} papers, {} edges (cache {})", graph.graph.n_papers(), graph.graph.n_edges(), cache);
        if (graph.report.acausal > 0)
            log->warn("removed {} acausal citations", graph.report.acausal);
        summary["graph"] = {{"papers", graph.graph.n_papers()}, {"edges", graph.graph.n_edges()}, {"cache", cache}};
        summary["filter"] = filter_json(graph.report);
    }

    RankOptions rank_options() const {
        RankOptions o;
        o.damping = cfg.damping.value_or(o.damping);
        o.tolerance = cfg.tolerance;
        o.max_iters = cfg.max_iters;
        o.threads = cfg.threads;
        return o;
    }

    AuthorRankOptions author_rank_options() const {
        AuthorRankOptions o;
        o.damping = cfg.damping.value_or(o.damping);
        o.tolerance = cfg.tolerance;
        o.max_iters = cfg.max_iters;
        o.threads = cfg.threads;
        return o;
    }

    void note_solver(const std::string &name, const MetricVector &v) {
        if (!summary.contains("solvers"))
            summary["solvers"] = json::array();
        summary["solvers"].push_back({{"metric", name},
                                      {"damping", v.params.damping},
                                      {"tolerance", v.params.tolerance},
                                      {"iterations", v.params.iterations},
                                      {"residual", std::isfinite(v.params.residual) ? json(v.params.residual)
                                                                                    : json(nullptr)}});
        log->info("{}: {} iterations, residual {}", name, v.params.iterations, v.params.residual);
    }

    MetricVector paper_metric(const std::string &name) {
        const auto &g = graph.graph;
        if (name == "ncit")
            return n_cit(g);
        if (name == "nicit")
            return n_icit_papers(g, RefCount::declared);
        if (name == "paperrank") {
            auto v = paperrank(g, rank_options());
            note_solver("paperrank", v);
            return v;
        }
        if (name == "arp") {
            auto ar = authorrank(data, g, author_rank_options());
            note_solver("authorrank", ar);
            return authorrank_of_papers(g, data, ar);
        }
        return ccoin_papers(g);
    }

    MetricVector author_metric(const std::string &name) {
        const auto &g = graph.graph;
        if (name == "npap" || name == "nipap" || name == "ncit" || name == "nicit") {
            auto c = author_counts(data, g);
            if (name == "npap")
                return std::move(c.n_pap);
            if (name == "nipap")
                return std::move(c.n_ipap);
            if (name == "ncit")
                return std::move(c.n_cit);
            return std::move(c.n_icit);
        }
        if (name == "h")
            return h_index(data, g);
        if (name == "prank") {
            auto pr = paperrank(g, rank_options());
            note_solver("paperrank", pr);
            return paperrank_of_authors(pr, data);
        }
        if (name == "arank") {
            auto v = authorrank(data, g, author_rank_options());
            note_solver("authorrank", v);
            return v;
        }
        if (name == "ccoin")
            return citation_coin(data, g);
        return citation_coin_plus(data, g);
    }

    std::vector<node> node_of_paper() const {
        std::vector<node> out(data.papers().size(), kNoNode);
        for (node p = 0; p < graph.graph.n_papers(); ++p)
            out[graph.graph.dataset_index(p)] = p;
        return out;
    }
};

// ---------------------------------------------------------------------------
// Subcommands

void cmd_ingest(Context &c) {
    c.load_dataset();
    export_canonical(c.data, c.output());
}

void cmd_gen_fixture(Context &c) {
    gen_fixture(c.cfg.fixture, c.output());
    c.summary["fixture"] = {{"seed", c.cfg.fixture.seed}, {"papers", c.cfg.fixture.n_papers}};
}

void cmd_rank_papers(Context &c) {
    c.load_dataset();
    c.load_graph();
    const auto v = c.paper_metric(c.cfg.metric);
    const auto &g = c.graph.graph;
    TableWriter t(c.output(), c.jsonl(), {"paper_id", "title", "date", "n_authors", "score"});
    for (auto i : ranking(v, c.cfg.top)) {
        const auto di = g.dataset_index(static_cast<node>(i));
        const auto &rec = c.data.papers()[di];
        t.row({rec.paper_id, rec.title, rec.date.to_string(), static_cast<std::int64_t>(c.data.n_authors_of(di)),
               v.values[i]});
    }
    c.summary["rows"] = t.rows();
}

void cmd_rank_authors(Context &c) {
    c.load_dataset();
    c.load_graph();
    const auto v = c.author_metric(c.cfg.metric);
    const auto node_of = c.node_of_paper();
    TableWriter t(c.output(), c.jsonl(), {"author_id", "name", "n_papers", "score"});
    for (auto i : ranking(v, c.cfg.top)) {
        const auto &a = c.data.authors()[i];
        std::int64_t papers = 0;
        for (auto p : c.data.author_papers(i))
            papers += node_of[p] != kNoNode;
        t.row({a.author_id, a.display_name, papers, v.values[i]});
    }
    c.summary["rows"] = t.rows();
}

GroupingScheme scheme_for(Context &c) {
    const auto &by = c.cfg.by;
    if (by == "institution")
        return institution_shares(c.data);
    if (by == "town") {
        const auto towns = cluster_towns(c.data.institutions(), c.cfg.radius_km);
        c.summary["towns"] = {{"radius_km", c.cfg.radius_km},
                              {"clusters", towns.n_clusters()},
                              {"without_coordinates", towns.without_coordinates.size()},
                              {"invalid_coordinates", towns.invalid_coordinates.size()}};
        return town_shares(c.data, towns);
    }
    if (by == "country")
        return country_shares(c.data);
    if (by == "continent")
        return continent_shares(c.data);
    if (by == "journal")
        return journal_shares(c.data);
    return gender_shares(c.data);
}

void cmd_rank_groups(Context &c) {
    c.load_dataset();
    c.load_graph();
    const auto pm = c.paper_metric(c.cfg.metric);
    const auto scheme = scheme_for(c);
    const auto gm = group_metric(scheme, pm);
    const double world = pm.sum();
    c.summary["uncovered_papers"] = scheme.uncovered_papers;
    c.summary["world_total"] = world;

    std::map<std::string, GeoDenominator> geo;
    if (!c.cfg.geo_denominators.empty()) {
        std::ifstream in(c.cfg.geo_denominators);
        if (!in)
            throw IoError("cannot open " + c.cfg.geo_denominators);
        geo = read_geo_denominators(in);
    }
    std::map<JournalId, JournalRow> journal_rows;
    std::optional<JournalRow> unpublished;
    if (c.cfg.by == "journal") {
        for (auto &row : journal_table(c.data, c.graph.graph)) {
            if (row.journal_id)
                journal_rows.emplace(*row.journal_id, row);
            else
                unpublished = row;
        }
    }

    std::vector<std::string> cols{"group_id", "name", "score", "percent"};
    if (!geo.empty())
        cols.insert(cols.end(), {"population", "gdp_usd", "score_per_million_people", "score_per_billion_usd"});
    if (c.cfg.by == "journal")
        cols.insert(cols.end(), {"n_pap", "nicit_per_paper", "ccoin"});
    TableWriter t(c.output(), c.jsonl(), cols);
    const auto pct = [&](double x) { return world != 0.0 ? 100.0 * x / world : std::nan(""); };
    for (auto i : ranking(gm, c.cfg.top)) {
        std::vector<Cell> row{gm.ids[i], scheme.group_names[i], gm.values[i], pct(gm.values[i])};
        if (!geo.empty()) {
            if (auto it = geo.find(scheme.group_names[i]); it != geo.end()) {
                const auto &g = it->second;
                row.insert(row.end(), {g.population, g.gdp_usd,
                                       g.population > 0 ? gm.values[i] / (g.population / 1e6) : std::nan(""),
                                       g.gdp_usd > 0 ? gm.values[i] / (g.gdp_usd / 1e9) : std::nan("")});
            } else {
                row.insert(row.end(), {Cell{}, Cell{}, Cell{}, Cell{}});
            }
        }
        if (c.cfg.by == "journal") {
            const auto &j = journal_rows.at(gm.ids[i]);
            row.insert(row.end(), {static_cast<std::int64_t>(j.n_pap), j.n_icit_per_paper, j.ccoin});
        }
        t.row(row);
    }
    if (unpublished) {
        // Papers without a journal, scored with the same metric.
        const auto &g = c.graph.graph;
        double score = 0.0;
        for (node p = 0; p < g.n_papers(); ++p)
            if (!c.data.papers()[g.dataset_index(p)].journal_id)
                score += pm.values[p];
        t.row({Cell{}, std::string("unpublished"), score, pct(score), static_cast<std::int64_t>(unpublished->n_pap),
               unpublished->n_icit_per_paper, unpublished->ccoin});
    }
    c.summary["rows"] = t.rows();
}

void cmd_timeseries(Context &c) {
    c.load_dataset();
    c.load_graph();
    const auto pm = c.paper_metric(c.cfg.metric);
    const auto scheme = scheme_for(c);
    const auto ts = time_series(c.data, scheme, pm, c.cfg.category);
    TableWriter t(c.output(), c.jsonl(), {"year", "group_id", "name", "percent"});
    for (std::size_t y = 0; y < ts.years.size(); ++y)
        for (std::size_t gi = 0; gi < ts.group_ids.size(); ++gi)
            if (ts.percent[y][gi] != 0.0)
                t.row({static_cast<std::int64_t>(ts.years[y]), ts.group_ids[gi], ts.group_names[gi],
                       ts.percent[y][gi]});
    c.summary["rows"] = t.rows();
}

void cmd_trends(Context &c) {
    c.load_dataset();
    c.load_graph();
    const auto tables = trend_series(c.data, c.graph.graph, c.cfg.category);
    std::map<int, std::pair<const TrendRow *, const TurnoverRow *>> by_year;
    for (const auto &r : tables.years)
        by_year[r.year].first = &r;
    for (const auto &r : tables.turnover)
        by_year[r.year].second = &r;

    TableWriter t(c.output(), c.jsonl(),
                  {"year", "n_papers", "mean_declared_refs", "mean_authors", "mean_citations",
                   "mean_citations_from_published", "active_authors", "born", "died", "born_pct", "died_pct"});
    for (const auto &[year, rows] : by_year) {
        std::vector<Cell> row{static_cast<std::int64_t>(year)};
        if (const auto *r = rows.first)
            row.insert(row.end(), {static_cast<std::int64_t>(r->n_papers), r->mean_declared_refs, r->mean_authors,
                                   r->mean_citations, r->mean_citations_from_published});
        else
            row.insert(row.end(), {Cell{}, Cell{}, Cell{}, Cell{}, Cell{}});
        if (const auto *r = rows.second)
            row.insert(row.end(), {static_cast<std::int64_t>(r->active), static_cast<std::int64_t>(r->born),
                                   static_cast<std::int64_t>(r->died), r->born_pct, r->died_pct});
        else
            row.insert(row.end(), {Cell{}, Cell{}, Cell{}, Cell{}, Cell{}});
        t.row(row);
    }
    c.summary["rows"] = t.rows();

    const auto cites = n_cit(c.graph.graph);
    try {
        c.summary["gini_citations"] = gini(cites.values);
    } catch (const DataError &) {
        c.summary["gini_citations"] = nullptr;
    }
}

void cmd_correlations(Context &c) {
    c.load_dataset();
    c.load_graph();
    const bool papers = c.cfg.entity == "paper";
    const auto &names = papers ? kPaperMetrics : kAuthorMetrics;
    std::vector<MetricVector> vs;
    for (const auto &n : names)
        vs.push_back(papers ? c.paper_metric(n) : c.author_metric(n));
    const auto m = metric_correlations(vs, names);
    TableWriter t(c.output(), c.jsonl(), {"metric_a", "metric_b", "pearson", "spearman"});
    for (std::size_t i = 0; i < m.k; ++i)
        for (std::size_t j = i + 1; j < m.k; ++j)
            t.row({m.names[i], m.names[j], m.pearson_at(i, j), m.spearman_at(i, j)});
    c.summary["rows"] = t.rows();
}

json top_flows(const Dataset &d, const std::map<std::uint32_t, double> &flows, std::uint32_t self) {
    std::vector<std::pair<std::uint32_t, double>> v;
    for (const auto &[a, w] : flows)
        if (a != self)
            v.emplace_back(a, w);
    std::stable_sort(v.begin(), v.end(), [](const auto &x, const auto &y) { return x.second > y.second; });
    if (v.size() > 10)
        v.resize(10);
    json out = json::array();
    for (const auto &[a, w] : v)
        out.push_back({{"author_id", d.authors()[a].author_id}, {"name", d.authors()[a].display_name},
                       {"individual_citations", w}});
    return out;
}

void cmd_author_report(Context &c) {
    c.load_dataset();
    c.load_graph();
    const auto &d = c.data;
    const auto &g = c.graph.graph;
    const auto found = d.author_index(*c.cfg.author);
    if (!found)
        throw DataError("author " + std::to_string(*c.cfg.author) + " is not in the dataset");
    const auto self = static_cast<std::uint32_t>(*found);
    const auto &rec = d.authors()[self];

    json metrics = json::object();
    for (const auto &name : kAuthorMetrics) {
        const auto v = c.author_metric(name);
        const double x = v.values[self];
        std::size_t above = 0;
        for (double y : v.values)
            above += y > x;
        metrics[name] = {{"value", x}, {"rank", above + 1}};
    }

    const auto node_of = c.node_of_paper();
    struct Year {
        std::size_t papers = 0;
        double individual_papers = 0.0;
        double icit_of_papers = 0.0;   // credit for papers written this year
        double icit_received = 0.0;    // credit from citations made this year
    };
    std::map<int, Year> years;
    std::map<std::uint32_t, double> given, received;
    std::optional<int> first, last;
    for (auto pi : d.author_papers(self)) {
        const node p = node_of[pi];
        if (p == kNoNode)
            continue;
        const double na = static_cast<double>(d.n_authors_of(pi));
        auto &y = years[g.year(p)];
        ++y.papers;
        y.individual_papers += 1.0 / na;
        first = std::min(first.value_or(g.year(p)), g.year(p));
        last = std::max(last.value_or(g.year(p)), g.year(p));
        for (auto q : g.citations(p)) {
            const double w = 1.0 / (static_cast<double>(g.declared_ref_count(q)) * na);
            y.icit_of_papers += w;
            years[g.year(q)].icit_received += w;
            const auto citers = d.paper_authors(g.dataset_index(q));
            for (auto a : citers)
                received[a] += w / static_cast<double>(citers.size());
        }
        for (auto r : g.references(p)) {
            const auto cited = d.paper_authors(g.dataset_index(r));
            const double w = 1.0 / (na * static_cast<double>(g.declared_ref_count(p)) * static_cast<double>(cited.size()));
            for (auto a : cited)
                given[a] += w;
        }
    }
    const auto total = [](const std::map<std::uint32_t, double> &m) {
        double s = 0.0;
        for (const auto &[a, w] : m)
            s += w;
        return s;
    };
    const auto self_pct = [&](const std::map<std::uint32_t, double> &m) -> json {
        const double t = total(m);
        if (t <= 0.0)
            return nullptr;
        auto it = m.find(self);
        return 100.0 * (it == m.end() ? 0.0 : it->second) / t;
    };

    json evolution = json::array();
    double cumulative = 0.0;
    for (const auto &[year, y] : years) {
        cumulative += y.icit_received;
        evolution.push_back({{"year", year},
                             {"papers", y.papers},
                             {"individual_papers", y.individual_papers},
                             {"icit_of_papers", y.icit_of_papers},
                             {"icit_received", y.icit_received},
                             {"icit_received_cumulative", cumulative}});
    }

    json report = {{"author_id", rec.author_id},
                   {"name", rec.display_name},
                   {"gender", rec.gender ? json(std::string(to_string(*rec.gender))) : json(nullptr)},
                   {"first_year", first ? json(*first) : json(nullptr)},
                   {"last_year", last ? json(*last) : json(nullptr)},
                   {"scientific_age", first ? json(*last - *first + 1) : json(nullptr)},
                   {"metrics", metrics},
                   {"self_citations", {{"given_pct", self_pct(given)}, {"received_pct", self_pct(received)}}},
                   {"top_citers", top_flows(d, received, self)},
                   {"top_cited", top_flows(d, given, self)},
                   {"time_evolution", evolution}};
    c.output() << report.dump(2) << '\n';
    c.summary["rows"] = 1;
}

spdlog::level::level_enum log_level() {
    const char *env = std::getenv("CITERANK_LOG");
    if (!env || !*env)
        return spdlog::level::warn;
    return spdlog::level::from_str(env);
}

} // namespace

std::vector<std::string> RunConfig::problems() const {
    std::vector<std::string> out;
    const auto &cmd = subcommand;
    if (!one_of(cmd, kSubcommands)) {
        out.push_back("unknown subcommand '" + cmd + "'; expected one of " + joined(kSubcommands));
        return out;
    }
    if (cmd != "gen-fixture") {
        if (input.empty())
            out.push_back("--input is required");
        else if (!std::filesystem::exists(input))
            out.push_back("--input: no such file: " + input);
    }
    if (damping && !(*damping > 0.0 && *damping < 1.0))
        out.push_back(fmt::format("--damping must lie in (0,1), got {}", *damping));
    if (!(tolerance > 0.0))
        out.push_back(fmt::format("--tolerance must be positive, got {}", tolerance));
    if (max_iters == 0)
        out.push_back("--max-iters must be at least 1");
    if (format != "csv" && format != "jsonl")
        out.push_back("--format must be csv or jsonl, got '" + format + "'");
    if (output.empty())
        out.push_back("--output must not be empty (use - for stdout)");
    if (top && *top == 0)
        out.push_back("--top must be at least 1");
    if (!(radius_km > 0.0))
        out.push_back(fmt::format("--radius must be positive, got {}", radius_km));

    if (cmd == "rank-papers" && !one_of(metric, kPaperMetrics))
        out.push_back("--metric must be one of " + joined(kPaperMetrics) + ", got '" + metric + "'");
    if (cmd == "rank-authors" && !one_of(metric, kAuthorMetrics))
        out.push_back("--metric must be one of " + joined(kAuthorMetrics) + ", got '" + metric + "'");
    if (cmd == "rank-groups" || cmd == "timeseries") {
        if (!one_of(by, kGroupings))
            out.push_back("--by must be one of " + joined(kGroupings) + ", got '" + by + "'");
        if (!one_of(metric, kPaperMetrics))
            out.push_back("--metric must be one of " + joined(kPaperMetrics) + ", got '" + metric + "'");
    }
    if (!geo_denominators.empty()) {
        if (cmd != "rank-groups" || by != "country")
            out.push_back("--geo-denominators only applies to rank-groups --by country");
        else if (!std::filesystem::exists(geo_denominators))
            out.push_back("--geo-denominators: no such file: " + geo_denominators);
    }
    if (cmd == "correlations" && entity != "paper" && entity != "author")
        out.push_back("--entity must be paper or author, got '" + entity + "'");
    if (cmd == "author-report" && !author)
        out.push_back("--author is required");
    if (cmd == "gen-fixture") {
        try {
            fixture.validate();
        } catch (const ParameterError &e) {
            out.push_back(e.what());
        }
    }
    return out;
}

ParseResult parse_args(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    RunConfig cfg;
    CLI::App app{"Citation-network metrics: ingest, rank papers, authors and groups.", "citerank"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();

    const auto global = [&](CLI::App *s) {
        s->add_option("--output,-o", cfg.output, "Output path, - for stdout");
        s->add_option("--format", cfg.format, "csv or jsonl");
        s->add_option("--threads", cfg.threads, "Worker threads, 0 = all cores");
        s->add_option("--summary", cfg.summary, "Write the JSON run summary here instead of stderr");
        s->add_option("--seed", cfg.fixture.seed, "Random seed (fixture generation only)");
    };
    const auto analysis = [&](CLI::App *s) {
        global(s);
        s->add_option("--input,-i", cfg.input, "Canonical JSONL dataset");
        s->add_option("--graph-cache", cfg.graph_cache, "Binary graph cache path, rebuilt when stale");
        s->add_flag("--strict", cfg.strict, "Fail on the first bad record");
        s->add_option("--after", cfg.after, "Keep papers from this year on (both citation ends)");
        s->add_flag("--no-self-citations", cfg.no_self_citations, "Drop citations between papers sharing an author");
        s->add_flag("--published-only", cfg.published_only, "Keep only citations made by published papers");
        s->add_option("--damping", cfg.damping, "Damping of the metric's rank solver");
        s->add_option("--tolerance", cfg.tolerance, "Solver tolerance");
        s->add_option("--max-iters", cfg.max_iters, "Solver iteration cap");
    };

    auto *ingest_cmd = app.add_subcommand("ingest", "Validate and canonicalize a JSONL dataset");
    global(ingest_cmd);
    ingest_cmd->add_option("--input,-i", cfg.input, "Source JSONL");
    ingest_cmd->add_flag("--strict", cfg.strict, "Fail on the first bad record");

    auto *papers = app.add_subcommand("rank-papers", "Rank papers by a metric");
    analysis(papers);
    papers->add_option("--metric", cfg.metric, joined(kPaperMetrics));
    papers->add_option("--top", cfg.top, "Keep the N best rows");

    auto *authors = app.add_subcommand("rank-authors", "Rank authors by a metric");
    analysis(authors);
    authors->add_option("--metric", cfg.metric, joined(kAuthorMetrics));
    authors->add_option("--top", cfg.top, "Keep the N best rows");

    auto *report = app.add_subcommand("author-report", "JSON profile of one author");
    analysis(report);
    report->add_option("--author", cfg.author, "Author id");

    auto *groups = app.add_subcommand("rank-groups", "Aggregate a paper metric over groups");
    analysis(groups);
    groups->add_option("--by", cfg.by, joined(kGroupings));
    groups->add_option("--metric", cfg.metric, joined(kPaperMetrics));
    groups->add_option("--top", cfg.top, "Keep the N best rows");
    groups->add_option("--radius", cfg.radius_km, "Town clustering radius in km");
    groups->add_option("--geo-denominators", cfg.geo_denominators, "CSV: country,population,gdp_usd");

    auto *series = app.add_subcommand("timeseries", "Per-year group percentages of a paper metric");
    analysis(series);
    series->add_option("--by", cfg.by, joined(kGroupings));
    series->add_option("--metric", cfg.metric, joined(kPaperMetrics));
    series->add_option("--category", cfg.category, "Restrict to papers in this category");
    series->add_option("--radius", cfg.radius_km, "Town clustering radius in km");

    auto *trends = app.add_subcommand("trends", "Per-year publication and author turnover statistics");
    analysis(trends);
    trends->add_option("--category", cfg.category, "Restrict to papers in this category");

    auto *corr = app.add_subcommand("correlations", "Pearson and Spearman correlations between metrics");
    analysis(corr);
    corr->add_option("--entity", cfg.entity, "paper or author");

    auto *fixture = app.add_subcommand("gen-fixture", "Write a synthetic canonical JSONL dataset");
    global(fixture);
    auto &fp = cfg.fixture;
    fixture->add_option("--papers", fp.n_papers, "Number of papers");
    fixture->add_option("--first-year", fp.first_year);
    fixture->add_option("--last-year", fp.last_year);
    fixture->add_option("--refs-mean", fp.refs_mean, "Mean declared references per paper");
    fixture->add_option("--internal-refs", fp.internal_ref_fraction, "Share of references inside the dataset");
    fixture->add_option("--authors-mean", fp.authors_mean, "Mean authors per paper");
    fixture->add_option("--acausal-prob", fp.acausal_prob, "Chance of a reference to a later paper");
    fixture->add_flag("--fully-internal", fp.fully_internal, "Every reference resolves inside the dataset");
    fixture->add_option("--institutions", fp.n_institutions);
    fixture->add_option("--journals", fp.n_journals);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return {std::nullopt, code == 0 ? kOk : kUsage};
    }
    cfg.subcommand = app.get_subcommands().front()->get_name();
    return {std::move(cfg), kOk};
}

int run(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_st>(err);
    sink->set_pattern("citerank: %l: %v");
    auto log = std::make_shared<spdlog::logger>("citerank", sink);
    log->set_level(log_level());
    log->flush_on(spdlog::level::trace);

    Context c(cfg, out, log);
    c.summary["command"] = cfg.subcommand;
    const auto start = std::chrono::steady_clock::now();
    int code = kOk;

    if (const auto problems = cfg.problems(); !problems.empty()) {
        err << "citerank: invalid configuration:\n";
        for (const auto &p : problems)
            err << "  " << p << '\n';
        c.summary["status"] = "invalid";
        c.summary["problems"] = problems;
        code = kUsage;
    } else {
        try {
            const auto &cmd = cfg.subcommand;
            if (cmd == "ingest")
                cmd_ingest(c);
            else if (cmd == "gen-fixture")
                cmd_gen_fixture(c);
            else if (cmd == "rank-papers")
                cmd_rank_papers(c);
            else if (cmd == "rank-authors")
                cmd_rank_authors(c);
            else if (cmd == "author-report")
                cmd_author_report(c);
            else if (cmd == "rank-groups")
                cmd_rank_groups(c);
            else if (cmd == "timeseries")
                cmd_timeseries(c);
            else if (cmd == "trends")
                cmd_trends(c);
            else
                cmd_correlations(c);
            c.finish_output();
        } catch (const ConvergenceError &e) {
            c.summary["iterations"] = e.iterations();
            c.summary["residual"] = e.residual();
            log->error("{}", e.what());
            c.summary["error"] = e.what();
            code = kConvergence;
        } catch (const ParameterError &e) {
            log->error("{}", e.what());
            c.summary["error"] = e.what();
            code = kUsage;
        } catch (const DataError &e) {
            log->error("{}", e.what());
            c.summary["error"] = e.what();
            code = kData;
        } catch (const IoError &e) {
            log->error("{}", e.what());
            c.summary["error"] = e.what();
            code = kIo;
        } catch (const std::exception &e) {
            log->error("{}", e.what());
            c.summary["error"] = e.what();
            code = kInternal;
        }
        c.summary["status"] = code == kOk ? "ok" : "error";
    }
    c.summary["exit_code"] = code;
    c.summary["threads"] = resolve_threads(cfg.threads);
    c.summary["elapsed_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const auto line = c.summary.dump(-1, ' ', false, json::error_handler_t::replace);
    if (cfg.summary.empty()) {
        err << line << '\n';
    } else {
        std::ofstream s(cfg.summary, std::ios::trunc);
        s << line << '\n';
        if (!s) {
            err << "citerank: cannot write run summary to " << cfg.summary << '\n';
            if (code == kOk)
                code = kIo;
        }
    }
    return code;
}

int main(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    auto parsed = parse_args(argc, argv, out, err);
    if (!parsed.config)
        return parsed.exit_code;
    return run(*parsed.config, out, err);
}

} // namespace citerank::cli
