#include <citerank/metric_vector.hpp>

namespace citerank {

std::string_view to_string(MetricKind k) {
    switch (k) {
    case MetricKind::ncit: return "ncit";
    case MetricKind::nicit: return "nicit";
    case MetricKind::paperrank: return "paperrank";
    case MetricKind::authorrank_of_papers: return "arp";
    case MetricKind::ccoin_paper: return "ccoin";
    case MetricKind::npap: return "npap";
    case MetricKind::nipap: return "nipap";
    case MetricKind::ncit_author: return "ncit";
    case MetricKind::nicit_author: return "nicit";
    case MetricKind::h_index: return "h";
    case MetricKind::paperrank_author: return "prank";
    case MetricKind::authorrank: return "arank";
    case MetricKind::ccoin_author: return "ccoin";
    case MetricKind::ccoin_plus: return "ccoin-plus";
    }
    return "unknown";
}

std::string_view to_string(EntityKind k) {
    switch (k) {
    case EntityKind::paper: return "paper";
    case EntityKind::author: return "author";
    case EntityKind::institution: return "institution";
    case EntityKind::town: return "town";
    case EntityKind::country: return "country";
    case EntityKind::continent: return "continent";
    case EntityKind::journal: return "journal";
    case EntityKind::gender: return "gender";
    }
    return "unknown";
}

} // namespace citerank
