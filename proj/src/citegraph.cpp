#include <citerank/citegraph.hpp>

#include <algorithm>
#include <bit>
#include <cstring>
#include <istream>
#include <numeric>
#include <ostream>

namespace citerank {

std::optional<node> CitationGraph::find(PaperId id) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id)
        return std::nullopt;
    return static_cast<node>(it - ids_.begin());
}

void CitationGraph::assemble(std::vector<Edge> edges) {
    const std::size_t n = ids_.size();
    auto build_csr = [n](const std::vector<Edge> &es, auto key, auto value, std::vector<std::uint64_t> &off,
                         std::vector<node> &tgt) {
        off.assign(n + 1, 0);
        for (const auto &e : es)
            ++off[key(e) + 1];
        std::partial_sum(off.begin(), off.end(), off.begin());
        tgt.assign(es.size(), 0);
        std::vector<std::uint64_t> cursor(off.begin(), off.end() - 1);
        for (const auto &e : es)
            tgt[cursor[key(e)]++] = value(e);
        for (std::size_t p = 0; p < n; ++p)
            std::sort(tgt.begin() + static_cast<std::ptrdiff_t>(off[p]),
                      tgt.begin() + static_cast<std::ptrdiff_t>(off[p + 1]));
    };
    build_csr(
        edges, [](const Edge &e) { return e.citing; }, [](const Edge &e) { return e.cited; }, fwd_offsets_,
        fwd_targets_);
    build_csr(
        edges, [](const Edge &e) { return e.cited; }, [](const Edge &e) { return e.citing; }, rev_offsets_,
        rev_targets_);
    topo_ = topological_order(*this);
}

CitationGraph CitationGraph::from_edges(std::span<const Date> dates, std::span<const std::uint32_t> declared,
                                        std::span<const Edge> edges, std::span<const PaperId> paper_ids) {
    const std::size_t n = dates.size();
    if (declared.size() != n)
        throw DataError("from_edges: declared_ref_count size does not match dates");
    if (!paper_ids.empty() && paper_ids.size() != n)
        throw DataError("from_edges: paper_ids size does not match dates");
    CitationGraph g;
    g.dates_.assign(dates.begin(), dates.end());
    g.declared_.assign(declared.begin(), declared.end());
    if (paper_ids.empty()) {
        g.ids_.resize(n);
        std::iota(g.ids_.begin(), g.ids_.end(), PaperId{0});
    } else {
        g.ids_.assign(paper_ids.begin(), paper_ids.end());
        if (std::adjacent_find(g.ids_.begin(), g.ids_.end(), std::greater_equal<>()) != g.ids_.end())
            throw DataError("from_edges: paper_ids must be strictly ascending");
    }
    g.dataset_index_.assign(n, kNoNode);
    std::vector<Edge> es(edges.begin(), edges.end());
    for (const auto &e : es) {
        if (e.citing >= n || e.cited >= n)
            throw DataError("from_edges: edge endpoint out of range");
        if (e.citing == e.cited)
            throw DataError("from_edges: self-loop on node " + std::to_string(e.citing));
    }
    std::sort(es.begin(), es.end(),
              [](const Edge &a, const Edge &b) { return std::tie(a.citing, a.cited) < std::tie(b.citing, b.cited); });
    if (std::adjacent_find(es.begin(), es.end(), [](const Edge &a, const Edge &b) {
            return a.citing == b.citing && a.cited == b.cited;
        }) != es.end())
        throw DataError("from_edges: duplicate edge");
    g.assemble(std::move(es));
    return g;
}

namespace {

bool share_author(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
    for (auto x : a)
        for (auto y : b)
            if (x == y)
                return true;
    return false;
}

} // namespace

GraphBuildResult build_graph(const Dataset &d, const EdgeFilter &f) {
    if (f.window && f.window->empty())
        throw ParameterError("edge filter window is empty");

    GraphBuildResult out;
    CitationGraph &g = out.graph;
    FilterReport &r = out.report;
    const auto papers = d.papers();

    // Node set: papers inside the window, in dataset (= paper id) order.
    std::vector<node> node_of(papers.size(), kNoNode);
    for (std::size_t i = 0; i < papers.size(); ++i) {
        if (f.window && !f.window->contains(papers[i].date.year))
            continue;
        node_of[i] = static_cast<node>(g.ids_.size());
        g.ids_.push_back(papers[i].paper_id);
        g.dataset_index_.push_back(static_cast<node>(i));
        g.dates_.push_back(papers[i].date);
        g.declared_.push_back(papers[i].declared_ref_count);
    }

    std::vector<Edge> edges;
    for (std::size_t i = 0; i < papers.size(); ++i) {
        const auto &citing = papers[i];
        for (auto ref : citing.references) {
            ++r.raw_edges;
            const auto j = *d.paper_index(ref);
            if (node_of[i] == kNoNode || node_of[j] == kNoNode) {
                ++r.window_excluded;
                continue;
            }
            if (citing.date.year < papers[j].date.year) {
                ++r.acausal;
                continue;
            }
            if (f.published_only && !citing.published) {
                ++r.unpublished_citer;
                continue;
            }
            if (f.drop_self_citations && share_author(d.paper_authors(i), d.paper_authors(j))) {
                ++r.self_citations;
                continue;
            }
            edges.push_back({node_of[i], node_of[j]});
        }
    }
    r.kept = edges.size();
    g.assemble(std::move(edges));
    return out;
}

std::vector<node> topological_order(const CitationGraph &g) {
    std::vector<node> order(g.n_papers());
    std::iota(order.begin(), order.end(), node{0});
    // Node index order is paper-id order, so a stable sort by year yields (year, id).
    std::stable_sort(order.begin(), order.end(), [&](node a, node b) { return g.year(a) < g.year(b); });
    return order;
}

PruneLayers prune_leaves(const CitationGraph &g) {
    const std::size_t n = g.n_papers();
    PruneLayers out;
    out.order.reserve(n);
    std::vector<std::uint32_t> remaining(n);
    for (node p = 0; p < n; ++p) {
        remaining[p] = g.citation_count(p);
        if (remaining[p] == 0)
            out.order.push_back(p);
    }
    std::size_t begin = 0;
    while (begin < out.order.size()) {
        const std::size_t end = out.order.size();
        out.offsets.push_back(end);
        for (std::size_t k = begin; k < end; ++k)
            for (auto cited : g.references(out.order[k]))
                if (--remaining[cited] == 0)
                    out.order.push_back(cited);
        // Keep each layer in ascending node order for deterministic sweeps.
        std::sort(out.order.begin() + static_cast<std::ptrdiff_t>(end), out.order.end());
        begin = end;
    }
    if (out.order.size() < n) {
        std::vector<char> peeled(n, 0);
        for (auto p : out.order)
            peeled[p] = 1;
        for (node p = 0; p < n; ++p)
            if (!peeled[p])
                out.residual.push_back(p);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Cache

namespace {

constexpr char kMagic[8] = {'C', 'R', 'G', 'R', 'A', 'P', 'H', '\0'};

template <class T>
T to_little(T v) {
    if constexpr (std::endian::native == std::endian::little || sizeof(T) == 1) {
        return v;
    } else {
        auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
        std::reverse(bytes.begin(), bytes.end());
        return std::bit_cast<T>(bytes);
    }
}

class Fnv1a {
public:
    template <class T>
    void add(T v) {
        v = to_little(v);
        unsigned char bytes[sizeof(T)];
        std::memcpy(bytes, &v, sizeof(T));
        for (auto b : bytes) {
            h_ ^= b;
            h_ *= 1099511628211ull;
        }
    }
    std::uint64_t value() const { return h_; }

private:
    std::uint64_t h_ = 14695981039346656037ull;
};

template <class T>
void write_pod(std::ostream &out, T v) {
    v = to_little(v);
    out.write(reinterpret_cast<const char *>(&v), sizeof(T));
}

template <class T>
void write_array(std::ostream &out, std::span<const T> xs) {
    if constexpr (std::endian::native == std::endian::little) {
        out.write(reinterpret_cast<const char *>(xs.data()), static_cast<std::streamsize>(xs.size_bytes()));
    } else {
        for (auto x : xs)
            write_pod(out, x);
    }
}

template <class T>
T read_pod(std::istream &in) {
    T v{};
    if (!in.read(reinterpret_cast<char *>(&v), sizeof(T)))
        throw DataError("graph cache is truncated");
    return to_little(v);
}

template <class T>
std::vector<T> read_array(std::istream &in, std::size_t n) {
    std::vector<T> xs(n);
    if (!in.read(reinterpret_cast<char *>(xs.data()), static_cast<std::streamsize>(n * sizeof(T))))
        throw DataError("graph cache is truncated");
    if constexpr (std::endian::native != std::endian::little)
        for (auto &x : xs)
            x = to_little(x);
    return xs;
}

} // namespace

std::uint64_t graph_fingerprint(const Dataset &d, const EdgeFilter &f) {
    Fnv1a h;
    h.add<std::uint32_t>(kGraphCacheVersion);
    h.add<std::uint8_t>(f.drop_self_citations);
    h.add<std::uint8_t>(f.published_only);
    h.add<std::uint8_t>(f.window.has_value());
    if (f.window) {
        h.add<std::int32_t>(f.window->first);
        h.add<std::int32_t>(f.window->last);
    }
    const auto papers = d.papers();
    h.add<std::uint64_t>(papers.size());
    for (std::size_t i = 0; i < papers.size(); ++i) {
        const auto &p = papers[i];
        h.add<std::int64_t>(p.paper_id);
        h.add<std::int32_t>(p.date.year);
        h.add<std::int32_t>(p.date.month);
        h.add<std::int32_t>(p.date.day);
        h.add<std::uint32_t>(p.declared_ref_count);
        h.add<std::uint8_t>(p.published);
        h.add<std::uint64_t>(p.references.size());
        for (auto ref : p.references)
            h.add<std::int64_t>(ref);
        if (f.drop_self_citations) {
            const auto authors = d.paper_authors(i);
            h.add<std::uint64_t>(authors.size());
            for (auto a : authors)
                h.add<std::uint32_t>(a);
        }
    }
    return h.value();
}

void GraphCodec::save(const GraphBuildResult &result, std::uint64_t fingerprint, std::ostream &out) {
    const auto &g = result.graph;
    const auto &r = result.report;
    out.write(kMagic, sizeof kMagic);
    write_pod<std::uint32_t>(out, kGraphCacheVersion);
    write_pod<std::uint32_t>(out, 0);
    write_pod<std::uint64_t>(out, fingerprint);
    write_pod<std::uint64_t>(out, g.n_papers());
    write_pod<std::uint64_t>(out, g.n_edges());
    for (auto v : {r.raw_edges, r.kept, r.acausal, r.self_citations, r.window_excluded, r.unpublished_citer})
        write_pod<std::uint64_t>(out, v);
    write_array<PaperId>(out, g.ids_);
    write_array<node>(out, g.dataset_index_);
    std::vector<std::int32_t> years;
    std::vector<std::uint8_t> months, days;
    for (const auto &dt : g.dates_) {
        years.push_back(dt.year);
        months.push_back(static_cast<std::uint8_t>(dt.month));
        days.push_back(static_cast<std::uint8_t>(dt.day));
    }
    write_array<std::int32_t>(out, years);
    write_array<std::uint8_t>(out, months);
    write_array<std::uint8_t>(out, days);
    write_array<std::uint32_t>(out, g.declared_);
    write_array<std::uint64_t>(out, g.fwd_offsets_);
    write_array<node>(out, g.fwd_targets_);
    if (!out)
        throw Error("I/O error while writing graph cache");
}

std::optional<GraphBuildResult> GraphCodec::load(std::istream &in, std::uint64_t expected_fingerprint) {
    char magic[8];
    if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0)
        return std::nullopt;
    if (read_pod<std::uint32_t>(in) != kGraphCacheVersion)
        return std::nullopt;
    read_pod<std::uint32_t>(in);
    if (read_pod<std::uint64_t>(in) != expected_fingerprint)
        return std::nullopt;

    GraphBuildResult out;
    auto &g = out.graph;
    auto &r = out.report;
    const auto n = read_pod<std::uint64_t>(in);
    const auto m = read_pod<std::uint64_t>(in);
    for (auto *v : {&r.raw_edges, &r.kept, &r.acausal, &r.self_citations, &r.window_excluded, &r.unpublished_citer})
        *v = read_pod<std::uint64_t>(in);
    g.ids_ = read_array<PaperId>(in, n);
    g.dataset_index_ = read_array<node>(in, n);
    const auto years = read_array<std::int32_t>(in, n);
    const auto months = read_array<std::uint8_t>(in, n);
    const auto days = read_array<std::uint8_t>(in, n);
    g.dates_.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        g.dates_[i] = {years[i], months[i], days[i]};
    g.declared_ = read_array<std::uint32_t>(in, n);
    const auto offsets = read_array<std::uint64_t>(in, n + 1);
    const auto targets = read_array<node>(in, m);
    if (offsets.front() != 0 || offsets.back() != m || !std::is_sorted(offsets.begin(), offsets.end()))
        throw DataError("graph cache has corrupt offsets");
    std::vector<Edge> edges;
    edges.reserve(m);
    for (node p = 0; p < n; ++p)
        for (auto k = offsets[p]; k < offsets[p + 1]; ++k) {
            if (targets[k] >= n)
                throw DataError("graph cache has an out-of-range target");
            edges.push_back({p, targets[k]});
        }
    g.assemble(std::move(edges));
    return out;
}

} // namespace citerank
