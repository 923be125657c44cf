#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace venuescore {

enum class VenueKind { Conference, Journal };

struct Paper {
    static constexpr int kUnknownPages = -1;

    int paper_id = 0;
    int venue_id = 0;
    int year = 0;
    std::vector<int> author_ids; // in byline order
    int page_count = kUnknownPages;

    bool pages_known() const { return page_count != kUnknownPages; }
};

struct Author {
    int author_id = 0;
    std::string canonical_name;
    std::set<std::string> alias_names;
};

struct Venue {
    int venue_id = 0;
    std::string canonical_name;
    std::set<std::string> merged_names; // always contains canonical_name
    VenueKind kind = VenueKind::Conference;
};

struct FilterConfig {
    int min_year = 1970;
    int max_year = 2019;
    int min_pages = 6;
    int max_pages = 100;
};

struct IngestStats {
    long long kept = 0;
    long long dropped_kind = 0;     // books, theses, proceedings shells, ...
    long long dropped_preprint = 0; // informal publications
    long long dropped_pages = 0;
    long long dropped_year = 0;
    long long dropped_no_authors = 0;
    long long dropped_missing_field = 0; // venue or year absent
    long long unknown_pages_kept = 0;
    std::map<std::string, long long> skipped_kinds;

    std::string to_json() const;
};

// Immutable after construction; safe to share read-only across threads.
class Corpus {
public:
    std::vector<Paper> papers;
    std::vector<Author> authors;
    std::vector<Venue> venues;
    std::pair<int, int> year_range{1970, 2019};

    int author_id(const std::string &name) const;           // -1 if absent
    int venue_id_by_name(const std::string &name) const;    // searches merged names too
    const std::vector<int> &papers_of_author(int author_id) const;
    int venue_year_size(int venue_id, int year) const;

    void rebuild_indexes();

private:
    std::unordered_map<std::string, int> author_by_name_;
    std::unordered_map<std::string, int> venue_by_name_;
    std::vector<std::vector<int>> papers_by_author_;
    std::map<std::pair<int, int>, int> venue_year_counts_;
};

// Incrementally assigns dense ids in first-appearance order.
class CorpusBuilder {
public:
    explicit CorpusBuilder(const FilterConfig &cfg) : cfg_(cfg) {}

    // Pre-filtered record; page_count -1 means unknown.
    void add_paper(const std::string &venue_name, VenueKind kind, int year, int page_count,
                   const std::vector<std::string> &author_names);

    Corpus build();

private:
    FilterConfig cfg_;
    Corpus corpus_;
    std::unordered_map<std::string, int> venue_ids_;
    std::unordered_map<std::string, int> author_ids_;
};

// Streaming DBLP-vocabulary XML. Throws ParseError with a byte offset on
// malformed input. `stats`, when given, receives kept/dropped counters.
Corpus ingest_dblp(std::istream &xml, const FilterConfig &cfg, IngestStats *stats = nullptr);
// Reads gzip or plain files transparently.
Corpus ingest_dblp_file(const std::filesystem::path &path, const FilterConfig &cfg,
                        IngestStats *stats = nullptr);

// Tab-separated: venue, year, page-count-or-"?", authors joined by '|'.
Corpus ingest_normalized(std::istream &in, const FilterConfig &cfg = {},
                         IngestStats *stats = nullptr);
Corpus ingest_normalized_file(const std::filesystem::path &path, const FilterConfig &cfg = {},
                              IngestStats *stats = nullptr);
void export_normalized(const Corpus &corpus, std::ostream &out);

// alias<TAB>canonical lines; duplicate alias with a different canonical is an error.
std::map<std::string, std::string> load_merge_map(std::istream &in);
Corpus merge_venues(const Corpus &corpus, const std::map<std::string, std::string> &merge_map);

// pages field -> page count, or nullopt when it cannot be interpreted.
std::optional<int> parse_page_count(std::string_view pages);

// Case-folded, punctuation-stripped; trailing 4-digit disambiguation tokens dropped.
std::string normalize_name(std::string_view name);
// Normalized edit-distance ratio in [0,1] over already-normalized strings.
double name_similarity(std::string_view normalized_a, std::string_view normalized_b);

struct NameMatch {
    int author_id = -1;
    double similarity = 0.0;
    bool matched() const { return author_id >= 0; }
};

// Exact (normalized) matches win; otherwise the best fuzzy candidate at or
// above `threshold`. Unmatched is a value, not an error.
std::map<std::string, NameMatch> match_names(const std::vector<std::string> &external_names,
                                             const Corpus &corpus, double threshold);

} // namespace venuescore
