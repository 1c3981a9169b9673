#include <citerank/dataset.hpp>

#include <json.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <istream>
#include <ostream>
#include <unordered_set>

namespace citerank {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr std::size_t kMaxMessages = 20;

int current_year() {
    const auto now = std::chrono::system_clock::now();
    const std::chrono::year_month_day ymd{std::chrono::floor<std::chrono::days>(now)};
    return static_cast<int>(ymd.year());
}

bool parse_int(std::string_view s, int &out) {
    if (s.empty())
        return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

int days_in_month(int year, int month) {
    static constexpr std::array<int, 12> days{31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2 && ((year % 4 == 0 && year % 100 != 0) || year % 400 == 0))
        return 29;
    return days[static_cast<std::size_t>(month - 1)];
}

// Compare two dates at the coarser of their granularities.
int compare_coarse(const Date &a, const Date &b) {
    if (a.year != b.year)
        return a.year < b.year ? -1 : 1;
    if (!a.has_month() || !b.has_month())
        return 0;
    if (a.month != b.month)
        return a.month < b.month ? -1 : 1;
    if (a.day == 0 || b.day == 0)
        return 0;
    if (a.day != b.day)
        return a.day < b.day ? -1 : 1;
    return 0;
}

} // namespace

std::optional<Date> Date::parse(std::string_view text) {
    Date d;
    const auto first = text.find('-');
    if (!parse_int(text.substr(0, first), d.year) || text.substr(0, first).size() != 4)
        return std::nullopt;
    if (first == std::string_view::npos)
        return d;
    auto rest = text.substr(first + 1);
    const auto second = rest.find('-');
    if (!parse_int(rest.substr(0, second), d.month) || d.month < 1 || d.month > 12)
        return std::nullopt;
    if (second == std::string_view::npos)
        return d;
    if (!parse_int(rest.substr(second + 1), d.day) || d.day < 1 ||
        d.day > days_in_month(d.year, d.month))
        return std::nullopt;
    return d;
}

std::string Date::to_string() const {
    char buf[16];
    if (month == 0)
        std::snprintf(buf, sizeof buf, "%04d", year);
    else if (day == 0)
        std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
    else
        std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    return buf;
}

Date resolve_date(const RawDates &raw) {
    // Candidates in priority order; a later candidate only wins when strictly earlier.
    const std::array<const std::optional<Date> *, 4> candidates{&raw.earliest, &raw.preprint,
                                                                &raw.publication, &raw.added};
    std::optional<Date> best;
    for (const auto *c : candidates) {
        if (!c->has_value())
            continue;
        if (!best || compare_coarse(**c, *best) < 0)
            best = **c;
    }
    if (!best)
        throw DataError("record has no date");
    return *best;
}

std::string_view to_string(Gender g) {
    switch (g) {
    case Gender::female:
        return "female";
    case Gender::male:
        return "male";
    case Gender::indeterminate:
        return "indeterminate";
    }
    return "indeterminate";
}

std::optional<Gender> parse_gender(std::string_view text) {
    if (text == "female" || text == "F")
        return Gender::female;
    if (text == "male" || text == "M")
        return Gender::male;
    if (text == "indeterminate" || text == "U")
        return Gender::indeterminate;
    return std::nullopt;
}

namespace {
constexpr std::array<std::pair<Continent, std::string_view>, 7> kContinentNames{{
    {Continent::africa, "africa"},
    {Continent::antarctica, "antarctica"},
    {Continent::asia, "asia"},
    {Continent::europe, "europe"},
    {Continent::north_america, "north_america"},
    {Continent::oceania, "oceania"},
    {Continent::south_america, "south_america"},
}};
} // namespace

std::string_view to_string(Continent c) {
    for (const auto &[value, name] : kContinentNames)
        if (value == c)
            return name;
    return "";
}

std::optional<Continent> parse_continent(std::string_view text) {
    for (const auto &[value, name] : kContinentNames)
        if (name == text)
            return value;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Dataset

namespace {
template <class Map, class Key>
std::optional<std::size_t> lookup(const Map &m, Key k) {
    auto it = m.find(k);
    if (it == m.end())
        return std::nullopt;
    return it->second;
}
} // namespace

std::optional<std::size_t> Dataset::paper_index(PaperId id) const { return lookup(paper_pos_, id); }
std::optional<std::size_t> Dataset::author_index(AuthorId id) const { return lookup(author_pos_, id); }
std::optional<std::size_t> Dataset::institution_index(InstitutionId id) const {
    return lookup(institution_pos_, id);
}
std::optional<std::size_t> Dataset::journal_index(JournalId id) const { return lookup(journal_pos_, id); }

void Dataset::finalize() {
    paper_author_off_.assign(1, 0);
    paper_author_idx_.clear();
    std::vector<std::size_t> author_count(authors_.size(), 0);
    for (const auto &p : papers_) {
        const auto begin = paper_author_idx_.size();
        for (const auto &link : p.authors) {
            if (!link.author_id)
                continue;
            const auto a = author_pos_.at(*link.author_id);
            if (std::find(paper_author_idx_.begin() + static_cast<std::ptrdiff_t>(begin),
                          paper_author_idx_.end(), a) != paper_author_idx_.end())
                continue;
            paper_author_idx_.push_back(a);
            ++author_count[a];
        }
        paper_author_off_.push_back(paper_author_idx_.size());
    }

    author_paper_off_.assign(authors_.size() + 1, 0);
    for (std::size_t a = 0; a < authors_.size(); ++a)
        author_paper_off_[a + 1] = author_paper_off_[a] + author_count[a];
    author_paper_idx_.assign(paper_author_idx_.size(), 0);
    std::vector<std::size_t> cursor(author_paper_off_.begin(), author_paper_off_.end() - 1);
    for (std::size_t p = 0; p < papers_.size(); ++p)
        for (auto a : paper_authors(p))
            author_paper_idx_[cursor[a]++] = static_cast<std::uint32_t>(p);
}

// ---------------------------------------------------------------------------
// Builder

Dataset::Builder::Builder(IngestOptions options) : options_(options) {
    if (options_.max_year == 0)
        options_.max_year = current_year();
}

void Dataset::Builder::note(std::size_t line, std::string message) {
    if (report_.messages.size() < kMaxMessages)
        report_.messages.push_back("line " + std::to_string(line) + ": " + std::move(message));
}

void Dataset::Builder::drop_duplicate(std::size_t line, const std::string &kind, std::int64_t id) {
    const auto msg = "duplicate " + kind + " id " + std::to_string(id);
    if (!options_.lenient)
        throw IngestError(line, msg);
    ++report_.dropped_duplicate_id;
    note(line, msg);
}

Dataset::Builder &Dataset::Builder::add(PaperRecord p) {
    ++line_;
    ++report_.records_read;
    if (p.date.year < options_.min_year || p.date.year > options_.max_year) {
        const auto msg = "paper " + std::to_string(p.paper_id) + " has out-of-range year " +
                         std::to_string(p.date.year);
        if (!options_.lenient)
            throw IngestError(line_, msg);
        ++report_.dropped_bad_date;
        note(line_, msg);
        return *this;
    }
    if (!seen_papers_.emplace(p.paper_id, line_).second) {
        drop_duplicate(line_, "paper", p.paper_id);
        return *this;
    }
    papers_.push_back(std::move(p));
    return *this;
}

Dataset::Builder &Dataset::Builder::add(AuthorRecord a) {
    ++line_;
    ++report_.records_read;
    if (!seen_authors_.emplace(a.author_id, line_).second) {
        drop_duplicate(line_, "author", a.author_id);
        return *this;
    }
    authors_.push_back(std::move(a));
    return *this;
}

Dataset::Builder &Dataset::Builder::add(InstitutionRecord i) {
    ++line_;
    ++report_.records_read;
    if (!seen_institutions_.emplace(i.institution_id, line_).second) {
        drop_duplicate(line_, "institution", i.institution_id);
        return *this;
    }
    const bool has_lat = i.latitude.has_value(), has_lon = i.longitude.has_value();
    if (has_lat || has_lon) {
        const bool ok = has_lat && has_lon && *i.latitude >= -90.0 && *i.latitude <= 90.0 &&
                        *i.longitude >= -180.0 && *i.longitude <= 180.0;
        if (!ok) {
            ++report_.invalid_coordinates;
            note(line_, "institution " + std::to_string(i.institution_id) + " has invalid coordinates");
            i.latitude.reset();
            i.longitude.reset();
        }
    }
    institutions_.push_back(std::move(i));
    return *this;
}

Dataset::Builder &Dataset::Builder::add(JournalRecord j) {
    ++line_;
    ++report_.records_read;
    if (!seen_journals_.emplace(j.journal_id, line_).second) {
        drop_duplicate(line_, "journal", j.journal_id);
        return *this;
    }
    journals_.push_back(std::move(j));
    return *this;
}

IngestResult Dataset::Builder::build() && {
    IngestResult out;
    Dataset &d = out.dataset;
    auto by_id = [](auto member) { return [member](const auto &a, const auto &b) { return a.*member < b.*member; }; };
    std::sort(papers_.begin(), papers_.end(), by_id(&PaperRecord::paper_id));
    std::sort(authors_.begin(), authors_.end(), by_id(&AuthorRecord::author_id));
    std::sort(institutions_.begin(), institutions_.end(), by_id(&InstitutionRecord::institution_id));
    std::sort(journals_.begin(), journals_.end(), by_id(&JournalRecord::journal_id));
    seen_papers_ = {};
    seen_authors_ = {};
    seen_institutions_ = {};
    seen_journals_ = {};

    d.papers_ = std::move(papers_);
    d.authors_ = std::move(authors_);
    d.institutions_ = std::move(institutions_);
    d.journals_ = std::move(journals_);

    std::unordered_set<PaperId> local;
    for (std::size_t i = 0; i < d.papers_.size(); ++i)
        d.paper_pos_.emplace(d.papers_[i].paper_id, static_cast<std::uint32_t>(i));
    for (std::size_t i = 0; i < d.authors_.size(); ++i)
        d.author_pos_.emplace(d.authors_[i].author_id, static_cast<std::uint32_t>(i));
    for (std::size_t i = 0; i < d.institutions_.size(); ++i)
        d.institution_pos_.emplace(d.institutions_[i].institution_id, static_cast<std::uint32_t>(i));
    for (std::size_t i = 0; i < d.journals_.size(); ++i)
        d.journal_pos_.emplace(d.journals_[i].journal_id, static_cast<std::uint32_t>(i));

    for (auto &p : d.papers_) {
        local.clear();
        std::size_t listed = 0;
        std::vector<PaperId> kept;
        kept.reserve(p.references.size());
        for (auto ref : p.references) {
            if (ref == p.paper_id) {
                ++report_.self_refs;
                continue;
            }
            if (!local.insert(ref).second) {
                ++report_.duplicate_refs;
                continue;
            }
            ++listed;
            if (!d.paper_pos_.contains(ref)) {
                ++report_.external_refs;
                continue;
            }
            kept.push_back(ref);
        }
        p.references = std::move(kept);
        if (p.declared_ref_count < listed) {
            ++report_.declared_ref_fixups;
            p.declared_ref_count = static_cast<std::uint32_t>(listed);
        }

        bool any_author = false;
        for (auto &link : p.authors) {
            if (link.author_id && !d.author_pos_.contains(*link.author_id)) {
                ++report_.dangling_author_ids;
                link.author_id.reset();
            }
            any_author = any_author || link.author_id.has_value();
            auto &aff = link.affiliation_ids;
            const auto before = aff.size();
            std::erase_if(aff, [&](InstitutionId id) { return !d.institution_pos_.contains(id); });
            report_.dangling_affiliation_ids += before - aff.size();
        }
        if (!any_author)
            ++report_.papers_without_authors;
        if (p.journal_id && !d.journal_pos_.contains(*p.journal_id)) {
            ++report_.dangling_journal_ids;
            p.journal_id.reset();
        }
    }

    d.finalize();
    report_.records_kept =
        d.papers_.size() + d.authors_.size() + d.institutions_.size() + d.journals_.size();
    out.report = std::move(report_);
    return out;
}

// ---------------------------------------------------------------------------
// JSONL

namespace {

struct Malformed {
    std::string what;
};
struct BadDate {
    std::string what;
};

template <class T>
T get_required(const json &j, const char *key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null())
        throw Malformed{std::string("missing field '") + key + "'"};
    try {
        return it->get<T>();
    } catch (const json::exception &) {
        throw Malformed{std::string("field '") + key + "' has the wrong type"};
    }
}

template <class T>
std::optional<T> get_optional(const json &j, const char *key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null())
        return std::nullopt;
    try {
        return it->get<T>();
    } catch (const json::exception &) {
        throw Malformed{std::string("field '") + key + "' has the wrong type"};
    }
}

std::optional<Date> get_date(const json &j, const char *key) {
    auto text = get_optional<std::string>(j, key);
    if (!text)
        return std::nullopt;
    auto d = Date::parse(*text);
    if (!d)
        throw BadDate{std::string("unparseable ") + key + " '" + *text + "'"};
    return d;
}

PaperRecord parse_paper(const json &j) {
    PaperRecord p;
    p.paper_id = get_required<PaperId>(j, "id");
    if (auto resolved = get_date(j, "date")) {
        p.date = *resolved;
    } else {
        RawDates raw{get_date(j, "earliest_date"), get_date(j, "preprint_date"),
                     get_date(j, "publication_date"), get_date(j, "added_date")};
        try {
            p.date = resolve_date(raw);
        } catch (const DataError &) {
            throw BadDate{"paper " + std::to_string(p.paper_id) + " has no date"};
        }
    }
    p.title = get_optional<std::string>(j, "title").value_or("");
    if (auto it = j.find("authors"); it != j.end() && !it->is_null()) {
        if (!it->is_array())
            throw Malformed{"field 'authors' must be an array"};
        for (const auto &a : *it) {
            if (!a.is_object())
                throw Malformed{"author entries must be objects"};
            AuthorLink link;
            link.author_id = get_optional<AuthorId>(a, "id");
            link.affiliation_ids =
                get_optional<std::vector<InstitutionId>>(a, "affiliations").value_or(std::vector<InstitutionId>{});
            p.authors.push_back(std::move(link));
        }
    }
    p.journal_id = get_optional<JournalId>(j, "journal");
    p.collaboration = get_optional<std::string>(j, "collaboration");
    p.categories = get_optional<std::vector<std::string>>(j, "categories").value_or(std::vector<std::string>{});
    p.references = get_optional<std::vector<PaperId>>(j, "references").value_or(std::vector<PaperId>{});
    const auto declared = get_optional<std::int64_t>(j, "declared_refs");
    if (declared && (*declared < 0 || *declared > std::numeric_limits<std::uint32_t>::max()))
        throw Malformed{"field 'declared_refs' out of range"};
    p.declared_ref_count = static_cast<std::uint32_t>(declared.value_or(0));
    p.published = get_optional<bool>(j, "published").value_or(p.journal_id.has_value());
    return p;
}

AuthorRecord parse_author(const json &j) {
    AuthorRecord a;
    a.author_id = get_required<AuthorId>(j, "id");
    a.display_name = get_optional<std::string>(j, "name").value_or("");
    if (auto g = get_optional<std::string>(j, "gender")) {
        a.gender = parse_gender(*g);
        if (!a.gender)
            throw Malformed{"unknown gender tag '" + *g + "'"};
    }
    return a;
}

InstitutionRecord parse_institution(const json &j) {
    InstitutionRecord i;
    i.institution_id = get_required<InstitutionId>(j, "id");
    i.name = get_optional<std::string>(j, "name").value_or("");
    i.latitude = get_optional<double>(j, "lat");
    i.longitude = get_optional<double>(j, "lon");
    i.country_code = get_optional<std::string>(j, "country");
    if (auto c = get_optional<std::string>(j, "continent")) {
        i.continent = parse_continent(*c);
        if (!i.continent)
            throw Malformed{"unknown continent '" + *c + "'"};
    }
    return i;
}

JournalRecord parse_journal(const json &j) {
    return {get_required<JournalId>(j, "id"), get_optional<std::string>(j, "name").value_or("")};
}

} // namespace

IngestResult ingest(std::istream &source, const IngestOptions &options) {
    Dataset::Builder builder(options);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(source, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        builder.line_ = lineno - 1;
        try {
            json j;
            try {
                j = json::parse(line);
            } catch (const json::parse_error &e) {
                throw Malformed{"invalid JSON"};
            }
            if (!j.is_object())
                throw Malformed{"record is not an object"};
            const auto kind = get_required<std::string>(j, "kind");
            if (kind == "paper")
                builder.add(parse_paper(j));
            else if (kind == "author")
                builder.add(parse_author(j));
            else if (kind == "institution")
                builder.add(parse_institution(j));
            else if (kind == "journal")
                builder.add(parse_journal(j));
            else
                throw Malformed{"unknown kind '" + kind + "'"};
        } catch (const Malformed &m) {
            if (!builder.options_.lenient)
                throw IngestError(lineno, m.what);
            ++builder.report_.records_read;
            ++builder.report_.dropped_malformed;
            builder.note(lineno, m.what);
        } catch (const BadDate &b) {
            if (!builder.options_.lenient)
                throw IngestError(lineno, b.what);
            ++builder.report_.records_read;
            ++builder.report_.dropped_bad_date;
            builder.note(lineno, b.what);
        }
    }
    if (source.bad())
        throw Error("I/O error while reading input");
    return std::move(builder).build();
}

void export_canonical(const Dataset &d, std::ostream &sink) {
    for (const auto &j : d.journals()) {
        ordered_json o;
        o["kind"] = "journal";
        o["id"] = j.journal_id;
        o["name"] = j.name;
        sink << o.dump() << '\n';
    }
    for (const auto &i : d.institutions()) {
        ordered_json o;
        o["kind"] = "institution";
        o["id"] = i.institution_id;
        o["name"] = i.name;
        if (i.latitude) {
            o["lat"] = *i.latitude;
            o["lon"] = *i.longitude;
        }
        if (i.country_code)
            o["country"] = *i.country_code;
        if (i.continent)
            o["continent"] = to_string(*i.continent);
        sink << o.dump() << '\n';
    }
    for (const auto &a : d.authors()) {
        ordered_json o;
        o["kind"] = "author";
        o["id"] = a.author_id;
        o["name"] = a.display_name;
        if (a.gender)
            o["gender"] = to_string(*a.gender);
        sink << o.dump() << '\n';
    }
    for (const auto &p : d.papers()) {
        ordered_json o;
        o["kind"] = "paper";
        o["id"] = p.paper_id;
        o["date"] = p.date.to_string();
        o["title"] = p.title;
        auto authors = ordered_json::array();
        for (const auto &link : p.authors) {
            ordered_json a;
            a["id"] = link.author_id ? ordered_json(*link.author_id) : ordered_json(nullptr);
            a["affiliations"] = link.affiliation_ids;
            authors.push_back(std::move(a));
        }
        o["authors"] = std::move(authors);
        o["journal"] = p.journal_id ? ordered_json(*p.journal_id) : ordered_json(nullptr);
        if (p.collaboration)
            o["collaboration"] = *p.collaboration;
        o["categories"] = p.categories;
        o["declared_refs"] = p.declared_ref_count;
        o["references"] = p.references;
        o["published"] = p.published;
        sink << o.dump() << '\n';
    }
    if (!sink)
        throw Error("I/O error while writing canonical output");
}

} // namespace citerank
