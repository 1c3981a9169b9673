#pragma once

#include <citerank/common.hpp>

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace citerank {

/// Calendar date with mandatory year. A zero month or day means "unknown";
/// a date with month 0 has year granularity.
struct Date {
    int year = 0;
    int month = 0;
    int day = 0;

    auto operator<=>(const Date &) const = default;

    bool has_month() const noexcept { return month != 0; }

    /// Parses "YYYY", "YYYY-MM" or "YYYY-MM-DD". Returns nullopt on malformed text.
    static std::optional<Date> parse(std::string_view text);
    std::string to_string() const;
};

/// The raw date candidates a bibliographic record may carry.
struct RawDates {
    std::optional<Date> earliest;
    std::optional<Date> preprint;
    std::optional<Date> publication;
    std::optional<Date> added;
};

/// Picks the chronologically earliest candidate. Candidates are compared at the
/// coarser of their two granularities; ties go to the higher-priority source
/// (earliest > preprint > publication > added). Throws DataError when no
/// candidate is present.
Date resolve_date(const RawDates &raw);

struct AuthorLink {
    std::optional<AuthorId> author_id;
    std::vector<InstitutionId> affiliation_ids;

    bool operator==(const AuthorLink &) const = default;
};

struct PaperRecord {
    PaperId paper_id = 0;
    Date date;
    std::string title;
    std::vector<AuthorLink> authors;
    std::optional<JournalId> journal_id;
    std::optional<std::string> collaboration;
    std::vector<std::string> categories;
    // Bibliography length as printed; always >= references.size().
    std::uint32_t declared_ref_count = 0;
    // References resolvable inside the dataset.
    std::vector<PaperId> references;
    bool published = false;

    bool operator==(const PaperRecord &) const = default;
};

enum class Gender { female, male, indeterminate };

std::string_view to_string(Gender g);
std::optional<Gender> parse_gender(std::string_view text);

struct AuthorRecord {
    AuthorId author_id = 0;
    std::string display_name;
    std::optional<Gender> gender;

    bool operator==(const AuthorRecord &) const = default;
};

enum class Continent { africa, antarctica, asia, europe, north_america, oceania, south_america };

std::string_view to_string(Continent c);
std::optional<Continent> parse_continent(std::string_view text);

struct InstitutionRecord {
    InstitutionId institution_id = 0;
    std::string name;
    std::optional<double> latitude;
    std::optional<double> longitude;
    std::optional<std::string> country_code;
    std::optional<Continent> continent;

    bool operator==(const InstitutionRecord &) const = default;
};

struct JournalRecord {
    JournalId journal_id = 0;
    std::string name;

    bool operator==(const JournalRecord &) const = default;
};

/// Immutable bibliographic database. Records are stored sorted by id and
/// every cross-reference resolves. Use Dataset::Builder or ingest() to create one.
class Dataset {
public:
    class Builder;

    Dataset() = default;

    std::span<const PaperRecord> papers() const noexcept { return papers_; }
    std::span<const AuthorRecord> authors() const noexcept { return authors_; }
    std::span<const InstitutionRecord> institutions() const noexcept { return institutions_; }
    std::span<const JournalRecord> journals() const noexcept { return journals_; }

    std::optional<std::size_t> paper_index(PaperId id) const;
    std::optional<std::size_t> author_index(AuthorId id) const;
    std::optional<std::size_t> institution_index(InstitutionId id) const;
    std::optional<std::size_t> journal_index(JournalId id) const;

    /// Distinct resolved author indices of paper `p` in author-list order.
    std::span<const std::uint32_t> paper_authors(std::size_t p) const {
        return {paper_author_idx_.data() + paper_author_off_[p],
                paper_author_off_[p + 1] - paper_author_off_[p]};
    }
    /// N_p^aut: number of distinct resolved authors.
    std::size_t n_authors_of(std::size_t p) const { return paper_authors(p).size(); }

    /// Paper indices of author `a`, ascending.
    std::span<const std::uint32_t> author_papers(std::size_t a) const {
        return {author_paper_idx_.data() + author_paper_off_[a],
                author_paper_off_[a + 1] - author_paper_off_[a]};
    }

    /// Equality up to record order; records are kept sorted so this is plain comparison.
    bool operator==(const Dataset &other) const {
        return papers_ == other.papers_ && authors_ == other.authors_ &&
               institutions_ == other.institutions_ && journals_ == other.journals_;
    }

private:
    void finalize();

    std::vector<PaperRecord> papers_;
    std::vector<AuthorRecord> authors_;
    std::vector<InstitutionRecord> institutions_;
    std::vector<JournalRecord> journals_;

    std::unordered_map<PaperId, std::uint32_t> paper_pos_;
    std::unordered_map<AuthorId, std::uint32_t> author_pos_;
    std::unordered_map<InstitutionId, std::uint32_t> institution_pos_;
    std::unordered_map<JournalId, std::uint32_t> journal_pos_;

    std::vector<std::size_t> paper_author_off_{0};
    std::vector<std::uint32_t> paper_author_idx_;
    std::vector<std::size_t> author_paper_off_{0};
    std::vector<std::uint32_t> author_paper_idx_;
};

struct IngestOptions {
    bool lenient = true;
    int min_year = 1200;
    // Defaults to the current calendar year.
    int max_year = 0;
};

/// Data-quality counters. Every non-blank input line is either kept or
/// dropped for exactly one reason.
struct IngestReport {
    std::size_t records_read = 0;
    std::size_t records_kept = 0;
    std::size_t dropped_malformed = 0;
    std::size_t dropped_bad_date = 0;
    std::size_t dropped_duplicate_id = 0;

    // Repairs applied to kept records.
    std::size_t external_refs = 0;         // references to ids outside the dataset
    std::size_t duplicate_refs = 0;        // repeated reference ids within one paper
    std::size_t self_refs = 0;             // a paper listing itself
    std::size_t declared_ref_fixups = 0;   // declared count raised to the indexed count
    std::size_t dangling_author_ids = 0;
    std::size_t dangling_affiliation_ids = 0;
    std::size_t dangling_journal_ids = 0;
    std::size_t invalid_coordinates = 0;
    std::size_t papers_without_authors = 0;

    // First few diagnostics, "line N: message".
    std::vector<std::string> messages;

    std::size_t dropped() const noexcept {
        return dropped_malformed + dropped_bad_date + dropped_duplicate_id;
    }
};

/// Error raised by strict-mode ingestion, carrying the 1-based line number.
class IngestError : public DataError {
public:
    IngestError(std::size_t line, const std::string &what)
        : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

struct IngestResult {
    Dataset dataset;
    IngestReport report;
};

/// Reads canonical JSONL (one {"kind": ...} record per line).
IngestResult ingest(std::istream &source, const IngestOptions &options = {});

/// Writes canonical JSONL: journals, institutions, authors, then papers, each sorted by id.
void export_canonical(const Dataset &d, std::ostream &sink);

/// Programmatic construction with the same cleaning rules as ingest().
class Dataset::Builder {
public:
    explicit Builder(IngestOptions options = {});

    Builder &add(PaperRecord p);
    Builder &add(AuthorRecord a);
    Builder &add(InstitutionRecord i);
    Builder &add(JournalRecord j);

    IngestResult build() &&;

private:
    friend IngestResult ingest(std::istream &, const IngestOptions &);

    void note(std::size_t line, std::string message);
    void drop_duplicate(std::size_t line, const std::string &kind, std::int64_t id);

    IngestOptions options_;
    IngestReport report_;
    std::size_t line_ = 0;
    std::vector<PaperRecord> papers_;
    std::vector<AuthorRecord> authors_;
    std::vector<InstitutionRecord> institutions_;
    std::vector<JournalRecord> journals_;
    std::unordered_map<PaperId, std::size_t> seen_papers_;
    std::unordered_map<AuthorId, std::size_t> seen_authors_;
    std::unordered_map<InstitutionId, std::size_t> seen_institutions_;
    std::unordered_map<JournalId, std::size_t> seen_journals_;
};

} // namespace citerank
