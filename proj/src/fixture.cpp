#include <citerank/common.hpp>
#include <citerank/dataset.hpp>
#include <citerank/fixture.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <sstream>

namespace citerank {

using ordered_json = nlohmann::ordered_json;

void FixtureParams::validate() const {
    std::ostringstream problems;
    auto prob = [&](double p, const char *name) {
        if (!(p >= 0.0 && p <= 1.0))
            problems << name << " must lie in [0,1]; ";
    };
    if (n_papers < 1)
        problems << "n_papers must be at least 1; ";
    if (first_year > last_year)
        problems << "first_year must not exceed last_year; ";
    if (first_year < 1200)
        problems << "first_year must be >= 1200; ";
    if (!(refs_mean >= 0.0))
        problems << "refs_mean must be nonnegative; ";
    if (!(authors_mean >= 1.0))
        problems << "authors_mean must be at least 1; ";
    if (!(attachment_offset > 0.0))
        problems << "attachment_offset must be positive; ";
    if (!(yearly_growth > -1.0))
        problems << "yearly_growth must exceed -1; ";
    if (n_institutions == 0 || n_towns == 0 || n_countries == 0)
        problems << "n_institutions, n_towns and n_countries must be positive; ";
    if (active_author_pool == 0)
        problems << "active_author_pool must be positive; ";
    prob(internal_ref_fraction, "internal_ref_fraction");
    prob(uniform_ref_prob, "uniform_ref_prob");
    prob(acausal_prob, "acausal_prob");
    prob(new_author_prob, "new_author_prob");
    prob(unresolved_author_prob, "unresolved_author_prob");
    prob(second_affiliation_prob, "second_affiliation_prob");
    prob(published_prob, "published_prob");
    prob(gender_tag_prob, "gender_tag_prob");
    prob(female_prob, "female_prob");
    if (auto s = problems.str(); !s.empty())
        throw ParameterError(s.substr(0, s.size() - 2));
}

namespace {

constexpr const char *kCategories[] = {"hep-ph", "hep-th", "hep-ex", "hep-lat",
                                       "astro-ph", "gr-qc", "nucl-th", "nucl-ex"};
constexpr Continent kContinents[] = {Continent::europe, Continent::north_america, Continent::asia,
                                     Continent::south_america, Continent::oceania, Continent::africa};

struct Generator {
    const FixtureParams &p;
    std::mt19937_64 rng;

    explicit Generator(const FixtureParams &params) : p(params), rng(params.seed) {}

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }
    bool chance(double prob) { return prob > 0.0 && uniform() < prob; }
    std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
    std::size_t poisson(double mean) {
        if (mean <= 0.0)
            return 0;
        return static_cast<std::size_t>(std::poisson_distribution<long>(mean)(rng));
    }
    // Zipf-like pick favoring small indices.
    std::size_t skewed(std::size_t n) {
        const double u = uniform();
        return std::min(n - 1, static_cast<std::size_t>(std::floor(static_cast<double>(n) * u * u)));
    }
};

} // namespace

void gen_fixture(const FixtureParams &params, std::ostream &out) {
    params.validate();
    Generator gen(params);
    const std::size_t n = params.n_papers;

    // Papers per year with geometric growth; papers are numbered in time order.
    const auto n_years = static_cast<std::size_t>(params.last_year - params.first_year + 1);
    std::vector<double> weight(n_years);
    double total_weight = 0.0;
    for (std::size_t y = 0; y < n_years; ++y)
        total_weight += weight[y] = std::pow(1.0 + params.yearly_growth, static_cast<double>(y));
    std::vector<std::size_t> year_end(n_years);
    double cumulative = 0.0;
    for (std::size_t y = 0; y < n_years; ++y) {
        cumulative += weight[y];
        year_end[y] = static_cast<std::size_t>(std::llround(static_cast<double>(n) * cumulative / total_weight));
    }
    year_end.back() = n;
    std::vector<std::uint16_t> year_of(n);
    for (std::size_t y = 0, i = 0; y < n_years; ++y)
        for (; i < year_end[y]; ++i)
            year_of[i] = static_cast<std::uint16_t>(y);

    // Journals.
    for (std::size_t j = 0; j < params.n_journals; ++j) {
        ordered_json o;
        o["kind"] = "journal";
        o["id"] = j + 1;
        o["name"] = "Journal " + std::to_string(j + 1);
        out << o.dump() << '\n';
    }

    // Institutions scattered within ~10 km of town centres.
    struct Town {
        double lat, lon;
        std::size_t country;
    };
    std::vector<Town> towns(params.n_towns);
    for (auto &t : towns) {
        t.lat = -60.0 + 130.0 * gen.uniform();
        t.lon = -180.0 + 360.0 * gen.uniform();
        t.country = gen.below(params.n_countries);
    }
    for (std::size_t i = 0; i < params.n_institutions; ++i) {
        const auto &t = towns[gen.skewed(towns.size())];
        const double dlat = (gen.uniform() - 0.5) * 0.15;
        const double dlon = (gen.uniform() - 0.5) * 0.15;
        ordered_json o;
        o["kind"] = "institution";
        o["id"] = i + 1;
        o["name"] = "Institute " + std::to_string(i + 1);
        o["lat"] = std::clamp(t.lat + dlat, -90.0, 90.0);
        o["lon"] = std::clamp(t.lon + dlon, -180.0, 180.0);
        std::string code;
        code += static_cast<char>('A' + t.country / 26 % 26);
        code += static_cast<char>('A' + t.country % 26);
        o["country"] = code;
        o["continent"] = to_string(kContinents[t.country % std::size(kContinents)]);
        out << o.dump() << '\n';
    }

    // Papers.
    struct Author {
        std::vector<std::size_t> affiliations;
    };
    std::vector<Author> authors;
    std::vector<std::uint32_t> attachment;   // each paper once, plus once per citation received
    attachment.reserve(n * 4);
    std::vector<std::size_t> refs, team;
    const double offset_weight = params.attachment_offset;

    for (std::size_t i = 0; i < n; ++i) {
        const int year = params.first_year + year_of[i];
        std::size_t declared = params.fully_internal ? std::max<std::size_t>(1, gen.poisson(params.refs_mean))
                                                     : gen.poisson(params.refs_mean);
        std::size_t internal = 0;
        if (params.fully_internal) {
            internal = std::min(declared, i);
        } else {
            for (std::size_t k = 0; k < declared; ++k)
                internal += gen.chance(params.internal_ref_fraction) ? 1 : 0;
            internal = std::min(internal, i);
        }

        refs.clear();
        for (std::size_t k = 0, attempts = 0; k < internal && attempts < 20 * internal + 20; ++attempts) {
            std::size_t target;
            // Attachment list mixes "offset" entries and citation entries; the
            // ratio below keeps the probability ~ (citations + offset).
            const double cites_total = static_cast<double>(attachment.size() - i);
            const double offset_total = offset_weight * static_cast<double>(i);
            if (gen.chance(params.uniform_ref_prob) || gen.uniform() * (cites_total + offset_total) < offset_total)
                target = gen.below(i);
            else
                target = attachment[gen.below(attachment.size())];
            if (std::find(refs.begin(), refs.end(), target) != refs.end())
                continue;
            refs.push_back(target);
            ++k;
        }
        if (params.fully_internal) {
            if (refs.empty() && i + 1 < n && year_of[i + 1] == year_of[i])
                refs.push_back(i + 1);   // same-year reference keeps the first papers internal
            declared = refs.size();
        }
        if (gen.chance(params.acausal_prob) && year_end[year_of[i]] < n) {
            const std::size_t first_later = year_end[year_of[i]];
            refs.push_back(first_later + gen.below(n - first_later));
            if (!params.fully_internal)
                ++declared;
            else
                declared = refs.size();
        }
        for (auto r : refs)
            if (r < i)
                attachment.push_back(static_cast<std::uint32_t>(r));
        attachment.push_back(static_cast<std::uint32_t>(i));
        // Internal references never exceed the declared count.
        declared = std::max(declared, refs.size());

        const std::size_t n_aut = 1 + gen.poisson(params.authors_mean - 1.0);
        team.clear();
        for (std::size_t k = 0; k < n_aut; ++k) {
            std::size_t a;
            if (authors.empty() || gen.chance(params.new_author_prob)) {
                Author fresh;
                fresh.affiliations.push_back(gen.skewed(params.n_institutions));
                if (gen.chance(params.second_affiliation_prob))
                    fresh.affiliations.push_back(gen.below(params.n_institutions));
                authors.push_back(std::move(fresh));
                a = authors.size() - 1;
            } else {
                const std::size_t pool = std::min(params.active_author_pool, authors.size());
                a = authors.size() - 1 - gen.below(pool);
            }
            if (std::find(team.begin(), team.end(), a) == team.end())
                team.push_back(a);
        }

        ordered_json o;
        o["kind"] = "paper";
        o["id"] = i + 1;
        const int month = static_cast<int>(gen.below(13));
        o["date"] = Date{year, month, 0}.to_string();
        o["title"] = "Synthetic paper " + std::to_string(i + 1);
        auto links = ordered_json::array();
        for (auto a : team) {
            ordered_json link;
            link["id"] = gen.chance(params.unresolved_author_prob) ? ordered_json(nullptr) : ordered_json(a + 1);
            auto affs = ordered_json::array();
            for (auto inst : authors[a].affiliations)
                affs.push_back(inst + 1);
            link["affiliations"] = std::move(affs);
            links.push_back(std::move(link));
        }
        o["authors"] = std::move(links);
        const bool published = params.n_journals > 0 && gen.chance(params.published_prob);
        o["journal"] = published ? ordered_json(gen.skewed(params.n_journals) + 1) : ordered_json(nullptr);
        o["categories"] = {kCategories[gen.skewed(std::size(kCategories))]};
        o["declared_refs"] = declared;
        auto ref_ids = ordered_json::array();
        for (auto r : refs)
            ref_ids.push_back(r + 1);
        o["references"] = std::move(ref_ids);
        o["published"] = published;
        out << o.dump() << '\n';
    }

    for (std::size_t a = 0; a < authors.size(); ++a) {
        ordered_json o;
        o["kind"] = "author";
        o["id"] = a + 1;
        o["name"] = "Author " + std::to_string(a + 1);
        if (gen.chance(params.gender_tag_prob)) {
            const double u = gen.uniform();
            o["gender"] = u < params.female_prob ? "female" : (u < 0.95 ? "male" : "indeterminate");
        }
        out << o.dump() << '\n';
    }
    if (!out)
        throw Error("I/O error while writing fixture");
}

} // namespace citerank
