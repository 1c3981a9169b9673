#include <citerank/author_metrics.hpp>
#include <citerank/parallel.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace citerank {

namespace {

MetricVector author_vector(const Dataset &d, MetricKind kind) {
    MetricVector v;
    v.kind = kind;
    v.entity = EntityKind::author;
    v.ids.reserve(d.authors().size());
    for (const auto &a : d.authors())
        v.ids.push_back(a.author_id);
    v.values.assign(d.authors().size(), 0.0);
    return v;
}

void require_dataset_graph(const CitationGraph &g) {
    for (node p = 0; p < g.n_papers(); ++p)
        if (g.dataset_index(p) == kNoNode)
            throw DataError("author metrics need a graph built from a Dataset");
}

// dataset paper index -> graph node (kNoNode outside the graph).
std::vector<node> node_of_paper(const Dataset &d, const CitationGraph &g) {
    require_dataset_graph(g);
    std::vector<node> out(d.papers().size(), kNoNode);
    for (node p = 0; p < g.n_papers(); ++p)
        out[g.dataset_index(p)] = p;
    return out;
}

std::size_t n_aut(const Dataset &d, const CitationGraph &g, node p) {
    return d.n_authors_of(g.dataset_index(p));
}

} // namespace

AuthorCounts author_counts(const Dataset &d, const CitationGraph &g) {
    require_dataset_graph(g);
    AuthorCounts out{author_vector(d, MetricKind::npap), author_vector(d, MetricKind::nipap),
                     author_vector(d, MetricKind::ncit_author), author_vector(d, MetricKind::nicit_author), 0};
    const auto icit = n_icit_papers(g, RefCount::declared);
    for (node p = 0; p < g.n_papers(); ++p) {
        const auto authors = d.paper_authors(g.dataset_index(p));
        if (authors.empty()) {
            ++out.papers_without_authors;
            continue;
        }
        const double share = 1.0 / static_cast<double>(authors.size());
        for (auto a : authors) {
            out.n_pap.values[a] += 1.0;
            out.n_ipap.values[a] += share;
            out.n_cit.values[a] += g.citation_count(p);
            out.n_icit.values[a] += icit.values[p] * share;
        }
    }
    return out;
}

std::uint32_t h_index_of(std::vector<std::uint32_t> counts) {
    std::sort(counts.begin(), counts.end(), std::greater<>());
    std::uint32_t h = 0;
    while (h < counts.size() && counts[h] >= h + 1)
        ++h;
    return h;
}

MetricVector h_index(const Dataset &d, const CitationGraph &g) {
    const auto node_of = node_of_paper(d, g);
    auto v = author_vector(d, MetricKind::h_index);
    std::vector<std::uint32_t> counts;
    for (std::size_t a = 0; a < d.authors().size(); ++a) {
        counts.clear();
        for (auto p : d.author_papers(a))
            if (node_of[p] != kNoNode)
                counts.push_back(g.citation_count(node_of[p]));
        v.values[a] = h_index_of(counts);
    }
    return v;
}

MetricVector paperrank_of_authors(const MetricVector &paperrank, const Dataset &d) {
    auto v = author_vector(d, MetricKind::paperrank_author);
    v.window = paperrank.window;
    v.params = paperrank.params;
    for (std::size_t i = 0; i < paperrank.size(); ++i) {
        const auto p = d.paper_index(paperrank.ids[i]);
        if (!p)
            throw DataError("paperrank entry " + std::to_string(paperrank.ids[i]) + " is not in the dataset");
        const auto authors = d.paper_authors(*p);
        for (auto a : authors)
            v.values[a] += paperrank.values[i] / static_cast<double>(authors.size());
    }
    return v;
}

// ---------------------------------------------------------------------------
// Flow matrix

double AuthorFlowMatrix::weight(std::size_t from, std::size_t to) const {
    const auto cols = row_cols(from);
    auto it = std::lower_bound(cols.begin(), cols.end(), static_cast<std::uint32_t>(to));
    if (it == cols.end() || *it != to)
        return 0.0;
    return row_weights(from)[static_cast<std::size_t>(it - cols.begin())];
}

double AuthorFlowMatrix::row_sum(std::size_t a) const {
    double s = 0.0;
    for (double w : row_weights(a))
        s += w;
    return s;
}

AuthorFlowMatrix AuthorFlowMatrix::from_triplets(std::size_t n_authors, std::span<const Triplet> triplets,
                                                 std::vector<AuthorId> ids) {
    if (!ids.empty() && ids.size() != n_authors)
        throw DataError("from_triplets: ids size does not match n_authors");
    std::vector<Triplet> ts(triplets.begin(), triplets.end());
    for (const auto &t : ts) {
        if (t.from >= n_authors || t.to >= n_authors)
            throw DataError("from_triplets: author index out of range");
        if (!(t.weight >= 0.0))
            throw DataError("from_triplets: weights must be nonnegative");
    }
    std::stable_sort(ts.begin(), ts.end(),
                     [](const Triplet &a, const Triplet &b) { return std::tie(a.from, a.to) < std::tie(b.from, b.to); });
    AuthorFlowMatrix m;
    m.row_offsets_.assign(n_authors + 1, 0);
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (i > 0 && ts[i].from == ts[i - 1].from && ts[i].to == ts[i - 1].to) {
            m.weights_.back() += ts[i].weight;
            continue;
        }
        m.cols_.push_back(ts[i].to);
        m.weights_.push_back(ts[i].weight);
        ++m.row_offsets_[ts[i].from + 1];
    }
    std::partial_sum(m.row_offsets_.begin(), m.row_offsets_.end(), m.row_offsets_.begin());
    if (ids.empty()) {
        ids.resize(n_authors);
        std::iota(ids.begin(), ids.end(), AuthorId{0});
    }
    m.ids_ = std::move(ids);
    return m;
}

std::vector<AuthorFlowMatrix::Triplet> AuthorFlowMatrix::triplets() const {
    std::vector<Triplet> out;
    out.reserve(nnz());
    for (std::size_t a = 0; a < n_authors(); ++a) {
        const auto cols = row_cols(a);
        const auto ws = row_weights(a);
        for (std::size_t k = 0; k < cols.size(); ++k)
            out.push_back({static_cast<std::uint32_t>(a), cols[k], ws[k]});
    }
    return out;
}

AuthorFlowMatrix AuthorFlowMatrix::without_diagonal() const {
    AuthorFlowMatrix m;
    m.ids_ = ids_;
    m.antisymmetrized_ = antisymmetrized_;
    m.self_removed_ = true;
    m.row_offsets_.reserve(row_offsets_.size());
    for (std::size_t a = 0; a < n_authors(); ++a) {
        const auto cols = row_cols(a);
        const auto ws = row_weights(a);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            if (cols[k] == a)
                continue;
            m.cols_.push_back(cols[k]);
            m.weights_.push_back(ws[k]);
        }
        m.row_offsets_.push_back(m.cols_.size());
    }
    return m;
}

AuthorFlowMatrix AuthorFlowMatrix::antisymmetrize() const {
    const std::size_t n = n_authors();
    // Transpose (column-major view) with sorted rows.
    std::vector<std::size_t> t_off(n + 1, 0);
    for (auto c : cols_)
        ++t_off[c + 1];
    std::partial_sum(t_off.begin(), t_off.end(), t_off.begin());
    std::vector<std::uint32_t> t_cols(nnz());
    std::vector<double> t_w(nnz());
    std::vector<std::size_t> cursor(t_off.begin(), t_off.end() - 1);
    for (std::size_t a = 0; a < n; ++a) {
        const auto cols = row_cols(a);
        const auto ws = row_weights(a);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            const auto pos = cursor[cols[k]]++;
            t_cols[pos] = static_cast<std::uint32_t>(a);
            t_w[pos] = ws[k];
        }
    }

    AuthorFlowMatrix m;
    m.ids_ = ids_;
    m.self_removed_ = true;
    m.antisymmetrized_ = true;
    for (std::size_t a = 0; a < n; ++a) {
        const auto cols = row_cols(a);
        const auto ws = row_weights(a);
        std::size_t i = 0, j = t_off[a];
        while (i < cols.size() || j < t_off[a + 1]) {
            std::uint32_t col;
            double diff;
            if (j == t_off[a + 1] || (i < cols.size() && cols[i] < t_cols[j])) {
                col = cols[i];
                diff = ws[i++];
            } else if (i == cols.size() || t_cols[j] < cols[i]) {
                col = t_cols[j];
                diff = -t_w[j++];
            } else {
                col = cols[i];
                diff = ws[i++] - t_w[j++];
            }
            if (col != a && diff > 0.0) {
                m.cols_.push_back(col);
                m.weights_.push_back(diff);
            }
        }
        m.row_offsets_.push_back(m.cols_.size());
    }
    return m;
}

AuthorFlowMatrix build_flow_matrix(const Dataset &d, const CitationGraph &g, const FlowOptions &opts) {
    const auto node_of = node_of_paper(d, g);
    const std::size_t n = d.authors().size();
    const unsigned threads = resolve_threads(opts.threads);

    // Per-node inverse author count, zero for papers without authors.
    std::vector<double> inv_aut(g.n_papers(), 0.0);
    for (node p = 0; p < g.n_papers(); ++p)
        if (const auto k = n_aut(d, g, p); k > 0)
            inv_aut[p] = 1.0 / static_cast<double>(k);

    struct Chunk {
        std::vector<std::size_t> row_len;
        std::vector<std::uint32_t> cols;
        std::vector<double> weights;
    };
    const unsigned chunks = chunk_count(n, threads);
    std::vector<Chunk> parts(chunks);

    parallel_chunks(n, threads, [&](std::size_t begin, std::size_t end, unsigned c) {
        auto &part = parts[c];
        std::vector<double> acc(n, 0.0);
        std::vector<char> seen(n, 0);
        std::vector<std::uint32_t> touched;
        for (std::size_t from = begin; from < end; ++from) {
            for (auto pi : d.author_papers(from)) {
                const node citing = node_of[pi];
                if (citing == kNoNode || g.indexed_ref_count(citing) == 0)
                    continue;
                const double coef = inv_aut[citing] / static_cast<double>(g.declared_ref_count(citing));
                for (auto cited : g.references(citing)) {
                    if (inv_aut[cited] == 0.0)
                        continue;
                    const double w = coef * inv_aut[cited];
                    for (auto to : d.paper_authors(g.dataset_index(cited))) {
                        if (!seen[to]) {
                            seen[to] = 1;
                            touched.push_back(to);
                        }
                        acc[to] += w;
                    }
                }
            }
            std::sort(touched.begin(), touched.end());
            std::size_t len = 0;
            for (auto to : touched) {
                if (!(opts.remove_self && to == from)) {
                    part.cols.push_back(to);
                    part.weights.push_back(acc[to]);
                    ++len;
                }
                acc[to] = 0.0;
                seen[to] = 0;
            }
            touched.clear();
            part.row_len.push_back(len);
        }
    });

    AuthorFlowMatrix m;
    std::size_t total = 0;
    for (const auto &part : parts)
        total += part.cols.size();
    m.cols_.reserve(total);
    m.weights_.reserve(total);
    m.row_offsets_.reserve(n + 1);
    for (auto &part : parts) {
        for (auto len : part.row_len)
            m.row_offsets_.push_back(m.row_offsets_.back() + len);
        m.cols_.insert(m.cols_.end(), part.cols.begin(), part.cols.end());
        m.weights_.insert(m.weights_.end(), part.weights.begin(), part.weights.end());
        part = Chunk{};
    }
    m.ids_.reserve(n);
    for (const auto &a : d.authors())
        m.ids_.push_back(a.author_id);
    m.self_removed_ = opts.remove_self;
    if (opts.antisymmetrize)
        return m.antisymmetrize();
    return m;
}

StochasticAuthorMatrix make_stochastic(const AuthorFlowMatrix &m) {
    StochasticAuthorMatrix s;
    s.row_offsets.reserve(m.n_authors() + 1);
    s.cols.reserve(m.nnz());
    s.probs.reserve(m.nnz());
    for (std::size_t a = 0; a < m.n_authors(); ++a) {
        const double total = m.row_sum(a);
        if (total > 0.0) {
            const auto cols = m.row_cols(a);
            const auto ws = m.row_weights(a);
            for (std::size_t k = 0; k < cols.size(); ++k) {
                if (ws[k] == 0.0)
                    continue;
                s.cols.push_back(cols[k]);
                s.probs.push_back(ws[k] / total);
            }
        } else {
            s.dangling.push_back(static_cast<std::uint32_t>(a));
        }
        s.row_offsets.push_back(s.cols.size());
    }
    return s;
}

namespace {

void check_rank_options(const AuthorRankOptions &opts) {
    std::ostringstream problems;
    if (!(opts.damping > 0.0 && opts.damping < 1.0))
        problems << "damping must lie in (0,1), got " << opts.damping << "; ";
    if (!(opts.tolerance > 0.0))
        problems << "tolerance must be positive, got " << opts.tolerance << "; ";
    if (opts.max_iters == 0)
        problems << "max_iters must be at least 1; ";
    if (auto s = problems.str(); !s.empty())
        throw ParameterError(s.substr(0, s.size() - 2));
}

// step(x, flow) stores the undamped flow x C into `flow` (dangling rows
// excluded) and returns the rank mass sitting on dangling authors.
template <class Step>
void iterate_authorrank(MetricVector &v, const AuthorRankOptions &opts, Step &&step) {
    const std::size_t n = v.values.size();
    v.params.damping = opts.damping;
    v.params.tolerance = opts.tolerance;
    if (n == 0)
        return;
    auto &x = v.values;
    std::vector<double> flow(n), y(n);
    const double dn = static_cast<double>(n);

    double residual = 0.0;
    std::size_t it = 0;
    bool converged = false;
    while (it < opts.max_iters) {
        ++it;
        const double dangling = step(x, flow);
        const double constant = (1.0 - opts.damping) + opts.damping * dangling / dn;
        double change = 0.0, mx = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
            y[a] = constant + opts.damping * flow[a];
            change = std::max(change, std::abs(y[a] - x[a]));
            mx = std::max(mx, std::abs(y[a]));
        }
        x.swap(y);
        residual = change / mx;
        if (residual < opts.tolerance) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw ConvergenceError("authorrank did not converge within " + std::to_string(opts.max_iters) +
                                   " iterations",
                               residual, it);

    double sum = 0.0;
    for (double r : x)
        sum += r;
    for (double &r : x)
        r *= dn / sum;
    v.params.iterations = it;
    v.params.residual = residual;
    v.params.r_total = dn;
}

} // namespace

MetricVector authorrank(const AuthorFlowMatrix &m, const AuthorRankOptions &opts) {
    check_rank_options(opts);
    MetricVector v;
    v.kind = MetricKind::authorrank;
    v.entity = EntityKind::author;
    v.ids.assign(m.ids().begin(), m.ids().end());
    const std::size_t n = m.n_authors();
    v.values.assign(n, 1.0);

    const auto s = make_stochastic(m);
    const unsigned threads = resolve_threads(opts.threads);
    const unsigned chunks = chunk_count(n, threads);
    std::vector<std::vector<double>> partial(chunks, std::vector<double>(n, 0.0));
    std::vector<double> dangling_mass(chunks, 0.0);

    iterate_authorrank(v, opts, [&](const std::vector<double> &x, std::vector<double> &flow) {
        parallel_chunks(n, threads, [&](std::size_t begin, std::size_t end, unsigned c) {
            auto &out = partial[c];
            std::fill(out.begin(), out.end(), 0.0);
            double dangling = 0.0;
            for (std::size_t a = begin; a < end; ++a) {
                const auto lo = s.row_offsets[a], hi = s.row_offsets[a + 1];
                if (lo == hi) {
                    dangling += x[a];
                    continue;
                }
                const double xa = x[a];
                for (auto k = lo; k < hi; ++k)
                    out[s.cols[k]] += xa * s.probs[k];
            }
            dangling_mass[c] = dangling;
        });
        // Fixed merge order keeps runs at equal thread counts bit-identical.
        double dangling = 0.0;
        for (unsigned c = 0; c < chunks; ++c)
            dangling += dangling_mass[c];
        for (std::size_t a = 0; a < n; ++a) {
            double f = 0.0;
            for (unsigned c = 0; c < chunks; ++c)
                f += partial[c][a];
            flow[a] = f;
        }
        return dangling;
    });
    return v;
}

MetricVector authorrank(const Dataset &d, const CitationGraph &g, const AuthorRankOptions &opts) {
    check_rank_options(opts);
    const auto node_of = node_of_paper(d, g);
    auto v = author_vector(d, MetricKind::authorrank);
    const std::size_t n = d.authors().size();
    const std::size_t np = g.n_papers();
    v.values.assign(n, 1.0);
    const unsigned threads = resolve_threads(opts.threads);

    // coef[p] = 1 / (N_aut(p) N_ref(p)) for papers that pass flow on, inv_aut[p]
    // = 1 / N_aut(p) for papers that can receive it.
    std::vector<double> inv_aut(np, 0.0), coef(np, 0.0);
    for (node p = 0; p < np; ++p)
        if (const auto k = n_aut(d, g, p); k > 0)
            inv_aut[p] = 1.0 / static_cast<double>(k);
    for (node p = 0; p < np; ++p) {
        if (inv_aut[p] == 0.0)
            continue;
        std::size_t live = 0;
        for (auto q : g.references(p))
            live += inv_aut[q] > 0.0;
        if (live > 0)
            coef[p] = inv_aut[p] / static_cast<double>(g.declared_ref_count(p));
    }
    // Out-weight of each author; zero marks a dangling row.
    std::vector<double> inv_out(n, 0.0);
    parallel_chunks(n, threads, [&](std::size_t begin, std::size_t end, unsigned) {
        for (std::size_t a = begin; a < end; ++a) {
            double out = 0.0;
            for (auto pi : d.author_papers(a)) {
                const node p = node_of[pi];
                if (p == kNoNode || coef[p] == 0.0)
                    continue;
                std::size_t live = 0;
                for (auto q : g.references(p))
                    live += inv_aut[q] > 0.0;
                out += coef[p] * static_cast<double>(live);
            }
            if (out > 0.0)
                inv_out[a] = 1.0 / out;
        }
    });

    std::vector<double> u(np), w(np);
    iterate_authorrank(v, opts, [&](const std::vector<double> &x, std::vector<double> &flow) {
        parallel_chunks(np, threads, [&](std::size_t begin, std::size_t end, unsigned) {
            for (std::size_t p = begin; p < end; ++p) {
                double s = 0.0;
                if (coef[p] != 0.0)
                    for (auto a : d.paper_authors(g.dataset_index(static_cast<node>(p))))
                        s += x[a] * inv_out[a];
                u[p] = s * coef[p];
            }
        });
        parallel_chunks(np, threads, [&](std::size_t begin, std::size_t end, unsigned) {
            for (std::size_t p = begin; p < end; ++p) {
                double s = 0.0;
                if (inv_aut[p] != 0.0)
                    for (auto q : g.citations(static_cast<node>(p)))
                        s += u[q];
                w[p] = s * inv_aut[p];
            }
        });
        parallel_chunks(n, threads, [&](std::size_t begin, std::size_t end, unsigned) {
            for (std::size_t a = begin; a < end; ++a) {
                double s = 0.0;
                for (auto pi : d.author_papers(a))
                    if (node_of[pi] != kNoNode)
                        s += w[node_of[pi]];
                flow[a] = s;
            }
        });
        double dangling = 0.0;
        for (std::size_t a = 0; a < n; ++a)
            if (inv_out[a] == 0.0)
                dangling += x[a];
        return dangling;
    });
    return v;
}

MetricVector net_flow(const AuthorFlowMatrix &m) {
    MetricVector v;
    v.kind = MetricKind::ccoin_author;
    v.entity = EntityKind::author;
    v.ids.assign(m.ids().begin(), m.ids().end());
    v.values.assign(m.n_authors(), 0.0);
    std::vector<double> received(m.n_authors(), 0.0), given(m.n_authors(), 0.0);
    for (std::size_t a = 0; a < m.n_authors(); ++a) {
        const auto cols = m.row_cols(a);
        const auto ws = m.row_weights(a);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            given[a] += ws[k];
            received[cols[k]] += ws[k];
        }
    }
    for (std::size_t a = 0; a < m.n_authors(); ++a)
        v.values[a] = received[a] - given[a];
    return v;
}

MetricVector citation_coin(const Dataset &d, const CitationGraph &g) {
    require_dataset_graph(g);
    auto v = author_vector(d, MetricKind::ccoin_author);
    std::vector<double> inv_aut(g.n_papers(), 0.0);
    for (node p = 0; p < g.n_papers(); ++p)
        if (const auto k = n_aut(d, g, p); k > 0)
            inv_aut[p] = 1.0 / static_cast<double>(k);

    std::vector<double> received(v.size(), 0.0), given(v.size(), 0.0);
    for (node p = 0; p < g.n_papers(); ++p) {
        if (inv_aut[p] == 0.0)
            continue;
        double in = 0.0;
        for (auto q : g.citations(p))
            if (inv_aut[q] != 0.0)
                in += 1.0 / static_cast<double>(g.declared_ref_count(q));
        std::size_t out_refs = 0;
        for (auto r : g.references(p))
            if (inv_aut[r] != 0.0)
                ++out_refs;
        const double out =
            out_refs == 0 ? 0.0 : static_cast<double>(out_refs) / static_cast<double>(g.declared_ref_count(p));
        for (auto a : d.paper_authors(g.dataset_index(p))) {
            received[a] += in * inv_aut[p];
            given[a] += out * inv_aut[p];
        }
    }
    for (std::size_t a = 0; a < v.size(); ++a)
        v.values[a] = received[a] - given[a];
    return v;
}

MetricVector citation_coin_plus(const Dataset &d, const CitationGraph &g) {
    require_dataset_graph(g);
    auto v = author_vector(d, MetricKind::ccoin_plus);
    const auto cc = ccoin_papers(g);
    for (node p = 0; p < g.n_papers(); ++p) {
        if (cc.values[p] <= 0.0)
            continue;
        const auto authors = d.paper_authors(g.dataset_index(p));
        for (auto a : authors)
            v.values[a] += cc.values[p] / static_cast<double>(authors.size());
    }
    return v;
}

} // namespace citerank
