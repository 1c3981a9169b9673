#pragma once

#include <citerank/citegraph.hpp>
#include <citerank/dataset.hpp>
#include <citerank/metric_vector.hpp>

#include <span>
#include <vector>

namespace citerank {

/// Which bibliography length divides a citation.
/// Individual citations use the declared count; rank transitions use the
/// indexed count (the out-degree inside the graph).
enum class RefCount { declared, indexed };

struct RankOptions {
    double damping = 0.99;
    double tolerance = 1e-10;
    std::size_t max_iters = 10'000;
    unsigned threads = 0;

    void validate() const;
};

/// N_cit: in-degree.
MetricVector n_cit(const CitationGraph &g);

/// N_icit: sum over citing papers of 1/N_ref(citer). Throws DataError naming
/// the citer when a paper with outgoing edges has a zero reference count.
MetricVector n_icit_papers(const CitationGraph &g, RefCount refs = RefCount::declared);

/// PaperRank. Solves R = 1 + damping * sum_{citers} R(citer)/indexed_refs(citer)
/// and rescales so that the total equals the total number of citations.
///
/// Papers that can be peeled (see prune_leaves) are evaluated exactly, layer
/// by layer, newest first. The residual same-year cyclic core is iterated
/// Jacobi-style until the max-norm relative change drops below the tolerance.
/// Papers without references leak their mass; the final rescale absorbs it.
MetricVector paperrank(const CitationGraph &g, const RankOptions &opts = {});

/// Per-generation path sums c_g(p) = sum over citation paths q -> ... -> p of
/// length g of prod 1/indexed_refs, for g = 0..g_max.
struct GenerationProfiles {
    double damping = 0.0;
    std::size_t g_max = 0;
    std::size_t n = 0;
    // Generation-major: contributions[g * n + p].
    std::vector<double> contributions;
    // Set when cycles (residual set) mean the series was cut at g_max.
    bool truncated = false;
    std::size_t residual_size = 0;

    std::span<const double> generation(std::size_t g) const {
        return {contributions.data() + g * n, n};
    }
    double contribution(node p, std::size_t g) const { return contributions[g * n + p]; }

    /// sum_g damping^g c_g(p) for every paper, rescaled to total R_tot like paperrank.
    MetricVector resummed(const CitationGraph &g) const;
};

GenerationProfiles generation_expansion(const CitationGraph &g, double damping, std::size_t g_max = 50,
                                        unsigned threads = 0);

/// AuthorRank of papers: sum over citers p' of sum_{A in p'} rank(A) / (N_aut(p') N_ref(p')).
/// `author_rank` is keyed by author id; citers without resolvable authors contribute zero.
MetricVector authorrank_of_papers(const CitationGraph &g, const Dataset &d, const MetricVector &author_rank);

/// CitationCoin of papers: N_icit - 1.
MetricVector ccoin_papers(const CitationGraph &g);

namespace detail {
/// One damped pull sweep: out[p] = base + damping * sum_{q cites p} x[q] / indexed_refs(q).
void pull_step(const CitationGraph &g, std::span<const double> x, std::span<double> out, double damping,
               double base, unsigned threads);
} // namespace detail

} // namespace citerank
