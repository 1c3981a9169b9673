#pragma once

#include <citerank/common.hpp>
#include <citerank/dataset.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace citerank {

struct EdgeFilter {
    // A citation is a self-citation when citing and cited papers share an author id.
    bool drop_self_citations = false;
    // Applied to both endpoints: papers outside the window are not graph nodes.
    std::optional<YearRange> window;
    // Keep only citations made by published papers.
    bool published_only = false;

    bool operator==(const EdgeFilter &) const = default;
};

/// Edge accounting: kept + deletions() == raw_edges.
struct FilterReport {
    std::size_t raw_edges = 0;          // resolvable references in the dataset
    std::size_t kept = 0;
    std::size_t acausal = 0;            // citing paper strictly older (by year) than cited
    std::size_t self_citations = 0;
    std::size_t window_excluded = 0;    // at least one endpoint outside the window
    std::size_t unpublished_citer = 0;

    std::size_t deletions() const noexcept {
        return acausal + self_citations + window_excluded + unpublished_citer;
    }
};

/// Directed citation edge, citing -> cited.
struct Edge {
    node citing;
    node cited;
};

/// Immutable compressed sparse citation graph. Nodes are numbered in
/// ascending paper-id order. forward = references (out-edges), reverse =
/// citations (in-edges); both adjacency lists are sorted by node index.
class CitationGraph {
public:
    CitationGraph() = default;

    /// Builds a graph from explicit edges without any causality filtering.
    /// Duplicate edges and self-loops are rejected with DataError.
    /// `paper_ids` defaults to 0..n-1 and must be strictly ascending.
    static CitationGraph from_edges(std::span<const Date> dates,
                                    std::span<const std::uint32_t> declared_ref_count,
                                    std::span<const Edge> edges,
                                    std::span<const PaperId> paper_ids = {});

    std::size_t n_papers() const noexcept { return ids_.size(); }
    std::size_t n_edges() const noexcept { return fwd_targets_.size(); }

    std::span<const node> references(node p) const {
        return {fwd_targets_.data() + fwd_offsets_[p], fwd_offsets_[p + 1] - fwd_offsets_[p]};
    }
    std::span<const node> citations(node p) const {
        return {rev_targets_.data() + rev_offsets_[p], rev_offsets_[p + 1] - rev_offsets_[p]};
    }

    std::uint32_t indexed_ref_count(node p) const {
        return static_cast<std::uint32_t>(fwd_offsets_[p + 1] - fwd_offsets_[p]);
    }
    std::uint32_t citation_count(node p) const {
        return static_cast<std::uint32_t>(rev_offsets_[p + 1] - rev_offsets_[p]);
    }
    std::uint32_t declared_ref_count(node p) const { return declared_[p]; }
    const Date &date(node p) const { return dates_[p]; }
    int year(node p) const { return dates_[p].year; }
    PaperId paper_id(node p) const { return ids_[p]; }
    /// Position of the node's record in the source Dataset, or kNoNode for
    /// graphs built with from_edges.
    node dataset_index(node p) const { return dataset_index_[p]; }

    std::optional<node> find(PaperId id) const;

    std::span<const PaperId> paper_ids() const noexcept { return ids_; }
    /// Oldest to newest: (year, paper id) ascending.
    std::span<const node> topo_order() const noexcept { return topo_; }

    std::span<const std::uint64_t> forward_offsets() const noexcept { return fwd_offsets_; }
    std::span<const node> forward_targets() const noexcept { return fwd_targets_; }
    std::span<const std::uint64_t> reverse_offsets() const noexcept { return rev_offsets_; }
    std::span<const node> reverse_targets() const noexcept { return rev_targets_; }

    friend struct GraphBuildResult build_graph(const Dataset &, const EdgeFilter &);
    friend class GraphCodec;

private:
    void assemble(std::vector<Edge> edges);

    std::vector<PaperId> ids_;
    std::vector<node> dataset_index_;
    std::vector<Date> dates_;
    std::vector<std::uint32_t> declared_;
    std::vector<std::uint64_t> fwd_offsets_{0};
    std::vector<node> fwd_targets_;
    std::vector<std::uint64_t> rev_offsets_{0};
    std::vector<node> rev_targets_;
    std::vector<node> topo_;
};

struct GraphBuildResult {
    CitationGraph graph;
    FilterReport report;
};

/// Builds the filtered citation graph. An edge is kept iff
/// year(citing) >= year(cited) and it survives the EdgeFilter.
GraphBuildResult build_graph(const Dataset &d, const EdgeFilter &f = {});

/// Papers sorted by (year, paper id). Every causal edge points from a later
/// position to an earlier or same-year position.
std::vector<node> topological_order(const CitationGraph &g);

/// Iterative peeling of uncited papers. Layer 0 holds papers nobody cites;
/// layer k holds papers whose citers all lie in layers < k. Papers that
/// cannot be peeled (same-year cycles and everything they cite) form the
/// residual set.
struct PruneLayers {
    std::vector<node> order;               // concatenated layers
    std::vector<std::size_t> offsets{0};   // layer k = order[offsets[k], offsets[k+1])
    std::vector<node> residual;            // ascending node index

    std::size_t n_layers() const noexcept { return offsets.size() - 1; }
    std::span<const node> layer(std::size_t k) const {
        return {order.data() + offsets[k], offsets[k + 1] - offsets[k]};
    }
};

PruneLayers prune_leaves(const CitationGraph &g);

// ---------------------------------------------------------------------------
// Binary cache of the CSR arrays.
//
// Layout (all integers little-endian):
//   char[8]  magic "CRGRAPH\0"
//   u32      format version (1)
//   u32      reserved (0)
//   u64      fingerprint of (dataset, filter)
//   u64      n_papers, u64 n_edges
//   u64 x 6  FilterReport: raw_edges kept acausal self_citations window_excluded unpublished_citer
//   i64[n]   paper ids
//   u32[n]   dataset index
//   i32[n]   year, u8[n] month, u8[n] day
//   u32[n]   declared reference count
//   u64[n+1] forward offsets
//   u32[m]   forward targets
// The reverse adjacency and topological order are rebuilt on load.

constexpr std::uint32_t kGraphCacheVersion = 1;

/// FNV-1a over everything that influences build_graph's output.
std::uint64_t graph_fingerprint(const Dataset &d, const EdgeFilter &f);

class GraphCodec {
public:
    static void save(const GraphBuildResult &g, std::uint64_t fingerprint, std::ostream &out);
    /// Returns nullopt when the header does not match (wrong magic, version or
    /// fingerprint); throws DataError on a truncated or corrupt body.
    static std::optional<GraphBuildResult> load(std::istream &in, std::uint64_t expected_fingerprint);
};

} // namespace citerank
