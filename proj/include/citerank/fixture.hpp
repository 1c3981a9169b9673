#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace citerank {

/// Knobs of the synthetic bibliographic database generator. Citations use
/// preferential attachment (probability ~ citations + attachment_offset) mixed
/// with uniform picks, which reproduces the heavy-tailed citation counts of
/// real literature.
struct FixtureParams {
    std::uint64_t seed = 1;
    std::size_t n_papers = 1000;
    int first_year = 1970;
    int last_year = 2017;
    double yearly_growth = 0.05;        // papers per year grow by this factor
    double refs_mean = 20.0;            // declared references per paper (Poisson)
    double internal_ref_fraction = 0.8; // share of declared references that resolve in the dataset
    bool fully_internal = false;        // every paper has >= 1 reference and all resolve
    double attachment_offset = 1.0;
    double uniform_ref_prob = 0.1;
    double acausal_prob = 0.0;          // chance that a paper also cites a later-year paper
    double authors_mean = 3.0;          // 1 + Poisson(authors_mean - 1)
    double new_author_prob = 0.1;
    std::size_t active_author_pool = 2000;
    double unresolved_author_prob = 0.01;
    std::size_t n_institutions = 200;
    std::size_t n_towns = 60;
    std::size_t n_countries = 25;
    double second_affiliation_prob = 0.2;
    std::size_t n_journals = 20;
    double published_prob = 0.7;
    double gender_tag_prob = 0.5;
    double female_prob = 0.15;

    /// Throws ParameterError listing every invalid field.
    void validate() const;
};

/// Writes a canonical JSONL dataset. Output depends only on the parameters.
void gen_fixture(const FixtureParams &params, std::ostream &out);

} // namespace citerank
