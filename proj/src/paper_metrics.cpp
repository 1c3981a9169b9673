#include <citerank/paper_metrics.hpp>
#include <citerank/parallel.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace citerank {

void RankOptions::validate() const {
    std::ostringstream problems;
    if (!(damping > 0.0 && damping < 1.0))
        problems << "damping must lie in (0,1), got " << damping << "; ";
    if (!(tolerance > 0.0))
        problems << "tolerance must be positive, got " << tolerance << "; ";
    if (max_iters == 0)
        problems << "max_iters must be at least 1; ";
    if (auto s = problems.str(); !s.empty())
        throw ParameterError(s.substr(0, s.size() - 2));
}

namespace {

MetricVector paper_vector(const CitationGraph &g, MetricKind kind) {
    MetricVector v;
    v.kind = kind;
    v.entity = EntityKind::paper;
    v.ids.assign(g.paper_ids().begin(), g.paper_ids().end());
    v.values.assign(g.n_papers(), 0.0);
    return v;
}

// 1/N_ref per citing paper, zero for papers without edges.
std::vector<double> inverse_ref_counts(const CitationGraph &g, RefCount refs) {
    std::vector<double> inv(g.n_papers(), 0.0);
    for (node q = 0; q < g.n_papers(); ++q) {
        if (g.indexed_ref_count(q) == 0)
            continue;
        const auto count = refs == RefCount::declared ? g.declared_ref_count(q) : g.indexed_ref_count(q);
        if (count == 0)
            throw DataError("paper " + std::to_string(g.paper_id(q)) +
                            " has citations but a declared reference count of zero");
        inv[q] = 1.0 / static_cast<double>(count);
    }
    return inv;
}

double rescale_to_citations(const CitationGraph &g, std::vector<double> &x) {
    const double r_tot = static_cast<double>(g.n_edges());
    double sum = 0.0;
    for (double v : x)
        sum += v;
    if (r_tot == 0.0 || sum == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        return r_tot;
    }
    const double scale = r_tot / sum;
    for (double &v : x)
        v *= scale;
    return r_tot;
}

} // namespace

namespace detail {

void pull_step(const CitationGraph &g, std::span<const double> x, std::span<double> out, double damping,
               double base, unsigned threads) {
    const auto off = g.reverse_offsets();
    const auto src = g.reverse_targets();
    const auto fwd = g.forward_offsets();
    parallel_chunks(g.n_papers(), threads, [&](std::size_t begin, std::size_t end, unsigned) {
        for (std::size_t p = begin; p < end; ++p) {
            double acc = 0.0;
            for (auto k = off[p]; k < off[p + 1]; ++k) {
                const auto q = src[k];
                acc += x[q] / static_cast<double>(fwd[q + 1] - fwd[q]);
            }
            out[p] = base + damping * acc;
        }
    });
}

} // namespace detail

MetricVector n_cit(const CitationGraph &g) {
    auto v = paper_vector(g, MetricKind::ncit);
    for (node p = 0; p < g.n_papers(); ++p)
        v.values[p] = g.citation_count(p);
    return v;
}

MetricVector n_icit_papers(const CitationGraph &g, RefCount refs) {
    auto v = paper_vector(g, MetricKind::nicit);
    const auto inv = inverse_ref_counts(g, refs);
    for (node p = 0; p < g.n_papers(); ++p) {
        double acc = 0.0;
        for (auto q : g.citations(p))
            acc += inv[q];
        v.values[p] = acc;
    }
    return v;
}

MetricVector paperrank(const CitationGraph &g, const RankOptions &opts) {
    opts.validate();
    const unsigned threads = resolve_threads(opts.threads);
    auto v = paper_vector(g, MetricKind::paperrank);
    v.params.damping = opts.damping;
    v.params.tolerance = opts.tolerance;
    auto &x = v.values;
    const std::size_t n = g.n_papers();
    if (n == 0) {
        v.params.r_total = 0.0;
        v.params.residual = 0.0;
        return v;
    }

    auto evaluate = [&](node p, std::span<const double> from) {
        double acc = 0.0;
        for (auto q : g.citations(p))
            acc += from[q] / static_cast<double>(g.indexed_ref_count(q));
        return 1.0 + opts.damping * acc;
    };

    // Exact pass over the peelable part: citers always sit in earlier layers.
    const auto layers = prune_leaves(g);
    for (std::size_t k = 0; k < layers.n_layers(); ++k) {
        const auto layer = layers.layer(k);
        parallel_chunks(layer.size(), threads, [&](std::size_t begin, std::size_t end, unsigned) {
            for (std::size_t i = begin; i < end; ++i)
                x[layer[i]] = evaluate(layer[i], x);
        });
    }
    std::size_t iterations = 1;
    double residual = 0.0;

    // Residual core: residual papers only cite residual papers, so the
    // peeled values above are final and the core is iterated on its own.
    const auto &core = layers.residual;
    if (!core.empty()) {
        for (auto p : core)
            x[p] = 1.0;
        std::vector<double> next(core.size());
        const unsigned chunks = chunk_count(core.size(), threads);
        std::vector<double> chunk_change(chunks), chunk_max(chunks);
        bool converged = false;
        for (std::size_t it = 0; it < opts.max_iters; ++it) {
            parallel_chunks(core.size(), threads, [&](std::size_t begin, std::size_t end, unsigned c) {
                double change = 0.0, mx = 0.0;
                for (std::size_t i = begin; i < end; ++i) {
                    next[i] = evaluate(core[i], x);
                    change = std::max(change, std::abs(next[i] - x[core[i]]));
                    mx = std::max(mx, std::abs(next[i]));
                }
                chunk_change[c] = change;
                chunk_max[c] = mx;
            });
            for (std::size_t i = 0; i < core.size(); ++i)
                x[core[i]] = next[i];
            ++iterations;
            const double change = *std::max_element(chunk_change.begin(), chunk_change.begin() + chunks);
            const double mx = *std::max_element(chunk_max.begin(), chunk_max.begin() + chunks);
            residual = change / mx;
            if (residual < opts.tolerance) {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw ConvergenceError("paperrank did not converge within " + std::to_string(opts.max_iters) +
                                       " iterations",
                                   residual, iterations);
    }

    v.params.iterations = iterations;
    v.params.residual = residual;
    v.params.r_total = rescale_to_citations(g, x);
    return v;
}

GenerationProfiles generation_expansion(const CitationGraph &g, double damping, std::size_t g_max,
                                        unsigned threads) {
    if (g_max < 1)
        throw ParameterError("generation_expansion: G_max must be at least 1");
    if (!(damping > 0.0 && damping < 1.0))
        throw ParameterError("generation_expansion: damping must lie in (0,1)");
    threads = resolve_threads(threads);
    GenerationProfiles out;
    out.damping = damping;
    out.g_max = g_max;
    out.n = g.n_papers();
    out.contributions.assign((g_max + 1) * out.n, 0.0);
    std::fill_n(out.contributions.begin(), out.n, 1.0);
    for (std::size_t gen = 1; gen <= g_max; ++gen) {
        std::span<const double> prev(out.contributions.data() + (gen - 1) * out.n, out.n);
        std::span<double> cur(out.contributions.data() + gen * out.n, out.n);
        detail::pull_step(g, prev, cur, 1.0, 0.0, threads);
        if (std::all_of(cur.begin(), cur.end(), [](double c) { return c == 0.0; }))
            break;
    }
    out.residual_size = prune_leaves(g).residual.size();
    out.truncated = out.residual_size > 0;
    return out;
}

MetricVector GenerationProfiles::resummed(const CitationGraph &g) const {
    MetricVector v;
    v.kind = MetricKind::paperrank;
    v.entity = EntityKind::paper;
    v.ids.assign(g.paper_ids().begin(), g.paper_ids().end());
    v.values.assign(n, 0.0);
    v.params.damping = damping;
    // Horner's scheme from the deepest generation down.
    for (std::size_t gen = g_max + 1; gen-- > 0;) {
        const auto c = generation(gen);
        for (std::size_t p = 0; p < n; ++p)
            v.values[p] = c[p] + damping * v.values[p];
    }
    v.params.r_total = rescale_to_citations(g, v.values);
    return v;
}

MetricVector authorrank_of_papers(const CitationGraph &g, const Dataset &d, const MetricVector &author_rank) {
    auto v = paper_vector(g, MetricKind::authorrank_of_papers);
    std::vector<double> rank_by_index(d.authors().size(), 0.0);
    for (std::size_t a = 0; a < rank_by_index.size(); ++a)
        rank_by_index[a] = author_rank.value_of(d.authors()[a].author_id).value_or(0.0);

    const auto inv = inverse_ref_counts(g, RefCount::declared);
    std::vector<double> weight(g.n_papers(), 0.0);
    for (node q = 0; q < g.n_papers(); ++q) {
        if (inv[q] == 0.0 || g.dataset_index(q) == kNoNode)
            continue;
        const auto authors = d.paper_authors(g.dataset_index(q));
        if (authors.empty())
            continue;
        double acc = 0.0;
        for (auto a : authors)
            acc += rank_by_index[a];
        weight[q] = acc * inv[q] / static_cast<double>(authors.size());
    }
    for (node p = 0; p < g.n_papers(); ++p) {
        double acc = 0.0;
        for (auto q : g.citations(p))
            acc += weight[q];
        v.values[p] = acc;
    }
    return v;
}

MetricVector ccoin_papers(const CitationGraph &g) {
    auto v = n_icit_papers(g, RefCount::declared);
    v.kind = MetricKind::ccoin_paper;
    for (double &x : v.values)
        x -= 1.0;
    return v;
}

} // namespace citerank
