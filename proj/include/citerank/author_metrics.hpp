#pragma once

#include <citerank/citegraph.hpp>
#include <citerank/dataset.hpp>
#include <citerank/metric_vector.hpp>
#include <citerank/paper_metrics.hpp>

#include <cstdint>
#include <span>
#include <vector>

namespace citerank {

// Author vectors are indexed like Dataset::authors(): ids ascending, one
// entry per author record. Only papers present in the graph count, so a
// windowed graph yields windowed author metrics. A paper's author count
// N_aut is its number of distinct resolved authors; papers without any
// resolved author feed paper metrics only.

struct AuthorCounts {
    MetricVector n_pap;
    MetricVector n_ipap;
    MetricVector n_cit;
    MetricVector n_icit;
    std::size_t papers_without_authors = 0;
};

AuthorCounts author_counts(const Dataset &d, const CitationGraph &g);

MetricVector h_index(const Dataset &d, const CitationGraph &g);

/// Largest h such that at least h of the counts are >= h.
std::uint32_t h_index_of(std::vector<std::uint32_t> citation_counts);

/// R_A = sum over the author's papers of R_p / N_aut(p).
MetricVector paperrank_of_authors(const MetricVector &paperrank, const Dataset &d);

struct FlowOptions {
    bool remove_self = false;
    bool antisymmetrize = false;
    unsigned threads = 0;
};

/// Sparse author -> author individual-citation matrix in CSR form.
/// weight(a', a) sums 1/(N_aut(p_a) N_aut(p_a') N_ref(p_a')) over citations p_a' -> p_a,
/// with N_ref the declared reference count.
class AuthorFlowMatrix {
public:
    struct Triplet {
        std::uint32_t from;
        std::uint32_t to;
        double weight;
    };

    AuthorFlowMatrix() = default;

    /// Sums duplicate (from, to) pairs. Used for synthetic matrices in tests.
    static AuthorFlowMatrix from_triplets(std::size_t n_authors, std::span<const Triplet> triplets,
                                          std::vector<AuthorId> ids = {});

    std::size_t n_authors() const noexcept { return row_offsets_.size() - 1; }
    std::size_t nnz() const noexcept { return cols_.size(); }

    std::span<const std::uint32_t> row_cols(std::size_t a) const {
        return {cols_.data() + row_offsets_[a], row_offsets_[a + 1] - row_offsets_[a]};
    }
    std::span<const double> row_weights(std::size_t a) const {
        return {weights_.data() + row_offsets_[a], row_offsets_[a + 1] - row_offsets_[a]};
    }
    double weight(std::size_t from, std::size_t to) const;
    double row_sum(std::size_t a) const;

    std::span<const AuthorId> ids() const noexcept { return ids_; }

    bool self_citations_removed() const noexcept { return self_removed_; }
    bool antisymmetrized() const noexcept { return antisymmetrized_; }

    /// Copy with the diagonal removed.
    AuthorFlowMatrix without_diagonal() const;
    /// Copy with each pair replaced by max(w[a'->a] - w[a->a'], 0); the diagonal vanishes.
    AuthorFlowMatrix antisymmetrize() const;

    std::vector<Triplet> triplets() const;

private:
    friend AuthorFlowMatrix build_flow_matrix(const Dataset &, const CitationGraph &, const FlowOptions &);

    std::vector<std::size_t> row_offsets_{0};
    std::vector<std::uint32_t> cols_;
    std::vector<double> weights_;
    std::vector<AuthorId> ids_;
    bool self_removed_ = false;
    bool antisymmetrized_ = false;
};

AuthorFlowMatrix build_flow_matrix(const Dataset &d, const CitationGraph &g, const FlowOptions &opts = {});

/// Row-normalized flow matrix. Rows with zero out-weight are listed in
/// `dangling` and treated as uniform rows by authorrank().
struct StochasticAuthorMatrix {
    std::vector<std::size_t> row_offsets{0};
    std::vector<std::uint32_t> cols;
    std::vector<double> probs;
    std::vector<std::uint32_t> dangling;

    std::size_t n_authors() const noexcept { return row_offsets.size() - 1; }
};

StochasticAuthorMatrix make_stochastic(const AuthorFlowMatrix &m);

struct AuthorRankOptions {
    double damping = 0.9;
    double tolerance = 1e-10;
    std::size_t max_iters = 10'000;
    unsigned threads = 0;
};

/// AuthorRank: rank = damping * rank C + (1 - damping), with dangling rows of
/// C uniform, power-iterated to a max-norm relative change below the tolerance
/// and normalized so the ranks sum to the number of authors.
MetricVector authorrank(const AuthorFlowMatrix &m, const AuthorRankOptions &opts = {});

/// Same ranks as authorrank(build_flow_matrix(d, g)) without materializing the
/// matrix: each step runs papers -> citations -> authors, O(edges + links)
/// time and O(papers + authors) memory. Self-citation flow stays in.
MetricVector authorrank(const Dataset &d, const CitationGraph &g, const AuthorRankOptions &opts = {});

/// Net flow per author: sum of column minus sum of row. Zero-sum, and
/// unchanged by diagonal entries or by equal weight added around any cycle.
MetricVector net_flow(const AuthorFlowMatrix &m);

/// CitationCoin from per-author counts: individual citations received from
/// papers with resolved authors, minus individual citations given to such
/// papers (each in-dataset reference of p costs 1/(N_aut(p) N_ref(p))).
/// Equals net_flow(build_flow_matrix(d, g)).
MetricVector citation_coin(const Dataset &d, const CitationGraph &g);

/// CC+: sum over the author's papers with CC_p > 0 of CC_p / N_aut(p).
MetricVector citation_coin_plus(const Dataset &d, const CitationGraph &g);

} // namespace citerank
