#include "venuescore/corpus.hpp"

#include "venuescore/errors.hpp"
#include "venuescore/io_util.hpp"

#include <nlohmann/json.hpp>
#include <zlib.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace venuescore {

// ---------------------------------------------------------------------------
// stats
// ---------------------------------------------------------------------------

std::string IngestStats::to_json() const {
    nlohmann::json j;
    j["kept"] = kept;
    j["dropped"] = {{"kind", dropped_kind},
                    {"preprint", dropped_preprint},
                    {"pages", dropped_pages},
                    {"year", dropped_year},
                    {"no_authors", dropped_no_authors},
                    {"missing_field", dropped_missing_field}};
    j["unknown_pages_kept"] = unknown_pages_kept;
    nlohmann::json kinds = nlohmann::json::object();
    for (const auto &[k, v] : skipped_kinds)
        kinds[k] = v;
    j["skipped_kinds"] = kinds;
    return j.dump(2);
}

// ---------------------------------------------------------------------------
// Corpus
// ---------------------------------------------------------------------------

void Corpus::rebuild_indexes() {
    author_by_name_.clear();
    venue_by_name_.clear();
    papers_by_author_.assign(authors.size(), {});
    venue_year_counts_.clear();

    for (const auto &a : authors) {
        author_by_name_.emplace(a.canonical_name, a.author_id);
        for (const auto &alias : a.alias_names)
            author_by_name_.emplace(alias, a.author_id);
    }
    for (const auto &v : venues) {
        for (const auto &name : v.merged_names)
            venue_by_name_.emplace(name, v.venue_id);
    }
    for (const auto &p : papers) {
        for (int a : p.author_ids)
            papers_by_author_[static_cast<std::size_t>(a)].push_back(p.paper_id);
        ++venue_year_counts_[{p.venue_id, p.year}];
    }
    for (auto &list : papers_by_author_)
        std::sort(list.begin(), list.end());
}

int Corpus::author_id(const std::string &name) const {
    auto it = author_by_name_.find(name);
    return it == author_by_name_.end() ? -1 : it->second;
}

int Corpus::venue_id_by_name(const std::string &name) const {
    auto it = venue_by_name_.find(name);
    return it == venue_by_name_.end() ? -1 : it->second;
}

const std::vector<int> &Corpus::papers_of_author(int author_id) const {
    static const std::vector<int> empty;
    if (author_id < 0 || author_id >= static_cast<int>(papers_by_author_.size()))
        return empty;
    return papers_by_author_[static_cast<std::size_t>(author_id)];
}

int Corpus::venue_year_size(int venue_id, int year) const {
    auto it = venue_year_counts_.find({venue_id, year});
    return it == venue_year_counts_.end() ? 0 : it->second;
}

// ---------------------------------------------------------------------------
// CorpusBuilder
// ---------------------------------------------------------------------------

void CorpusBuilder::add_paper(const std::string &venue_name, VenueKind kind, int year,
                              int page_count, const std::vector<std::string> &author_names) {
    auto [vit, vnew] = venue_ids_.try_emplace(venue_name, static_cast<int>(corpus_.venues.size()));
    if (vnew) {
        Venue v;
        v.venue_id = vit->second;
        v.canonical_name = venue_name;
        v.merged_names.insert(venue_name);
        v.kind = kind;
        corpus_.venues.push_back(std::move(v));
    }

    Paper p;
    p.paper_id = static_cast<int>(corpus_.papers.size());
    p.venue_id = vit->second;
    p.year = year;
    p.page_count = page_count;
    p.author_ids.reserve(author_names.size());
    for (const auto &name : author_names) {
        auto [ait, anew] =
            author_ids_.try_emplace(name, static_cast<int>(corpus_.authors.size()));
        if (anew) {
            Author a;
            a.author_id = ait->second;
            a.canonical_name = name;
            corpus_.authors.push_back(std::move(a));
        }
        p.author_ids.push_back(ait->second);
    }
    corpus_.papers.push_back(std::move(p));
}

Corpus CorpusBuilder::build() {
    corpus_.year_range = {cfg_.min_year, cfg_.max_year};
    corpus_.rebuild_indexes();
    return std::move(corpus_);
}

// ---------------------------------------------------------------------------
// page field parsing
// ---------------------------------------------------------------------------

namespace {

// Trailing integer of a page bound; handles electronic ids like "39:12".
std::optional<long> trailing_number(std::string_view s) {
    auto colon = s.rfind(':');
    if (colon != std::string_view::npos)
        s = s.substr(colon + 1);
    s = trim(s);
    if (s.empty())
        return std::nullopt;
    long value = 0;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c)))
            return std::nullopt;
        value = value * 10 + (c - '0');
        if (value > 1000000)
            return std::nullopt;
    }
    return value;
}

} // namespace

std::optional<int> parse_page_count(std::string_view pages) {
    std::string s = trim(pages);
    if (s.empty())
        return std::nullopt;
    auto dash = s.find('-');
    if (dash == std::string::npos) {
        auto n = trailing_number(s);
        if (!n)
            return std::nullopt;
        return 1; // a single page
    }
    auto first = trailing_number(std::string_view(s).substr(0, dash));
    auto last = trailing_number(std::string_view(s).substr(dash + 1));
    if (!first || !last || *last < *first)
        return std::nullopt;
    long count = *last - *first + 1;
    if (count > 1000000)
        return std::nullopt;
    return static_cast<int>(count);
}

// ---------------------------------------------------------------------------
// normalized corpus format
// ---------------------------------------------------------------------------

namespace {

struct RecordFilter {
    const FilterConfig &cfg;
    IngestStats &stats;
    CorpusBuilder &builder;

    void offer(const std::string &venue, VenueKind kind, int year, int page_count,
               const std::vector<std::string> &author_names) {
        if (venue.empty() || year == 0) {
            ++stats.dropped_missing_field;
            return;
        }
        if (author_names.empty()) {
            ++stats.dropped_no_authors;
            return;
        }
        if (year < cfg.min_year || year > cfg.max_year) {
            ++stats.dropped_year;
            return;
        }
        if (page_count != Paper::kUnknownPages &&
            (page_count < cfg.min_pages || page_count > cfg.max_pages)) {
            ++stats.dropped_pages;
            return;
        }
        if (page_count == Paper::kUnknownPages)
            ++stats.unknown_pages_kept;
        ++stats.kept;
        builder.add_paper(venue, kind, year, page_count, author_names);
    }
};

} // namespace

Corpus ingest_normalized(std::istream &in, const FilterConfig &cfg, IngestStats *stats) {
    IngestStats local;
    IngestStats &st = stats ? *stats : local;
    CorpusBuilder builder(cfg);
    RecordFilter filter{cfg, st, builder};

    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        auto fields = split(line, '\t');
        if (fields.size() != 4)
            throw DataError("line " + std::to_string(lineno) + ": expected 4 tab-separated fields, got " +
                            std::to_string(fields.size()));
        const std::string &venue = fields[0];
        int year = 0;
        try {
            year = std::stoi(fields[1]);
        } catch (const std::exception &) {
            throw DataError("line " + std::to_string(lineno) + ": bad year '" + fields[1] + "'");
        }
        int pages = Paper::kUnknownPages;
        if (fields[2] != "?") {
            try {
                pages = std::stoi(fields[2]);
            } catch (const std::exception &) {
                throw DataError("line " + std::to_string(lineno) + ": bad page count '" + fields[2] + "'");
            }
        }
        std::vector<std::string> names;
        for (auto &n : split(fields[3], '|')) {
            std::string t = trim(n);
            if (!t.empty())
                names.push_back(std::move(t));
        }
        filter.offer(venue, VenueKind::Conference, year, pages, names);
    }
    return builder.build();
}

Corpus ingest_normalized_file(const std::filesystem::path &path, const FilterConfig &cfg,
                              IngestStats *stats) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open corpus file: " + path.string());
    return ingest_normalized(in, cfg, stats);
}

void export_normalized(const Corpus &corpus, std::ostream &out) {
    for (const auto &p : corpus.papers) {
        out << corpus.venues[static_cast<std::size_t>(p.venue_id)].canonical_name << '\t'
            << p.year << '\t';
        if (p.pages_known())
            out << p.page_count;
        else
            out << '?';
        out << '\t';
        for (std::size_t i = 0; i < p.author_ids.size(); ++i) {
            if (i)
                out << '|';
            out << corpus.authors[static_cast<std::size_t>(p.author_ids[i])].canonical_name;
        }
        out << '\n';
    }
}

// ---------------------------------------------------------------------------
// DBLP XML parsing
// ---------------------------------------------------------------------------

namespace {

class ByteSource {
public:
    virtual ~ByteSource() = default;
    virtual std::size_t read(char *buf, std::size_t n) = 0;
};

class IstreamSource final : public ByteSource {
public:
    explicit IstreamSource(std::istream &in) : in_(in) {}
    std::size_t read(char *buf, std::size_t n) override {
        in_.read(buf, static_cast<std::streamsize>(n));
        return static_cast<std::size_t>(in_.gcount());
    }

private:
    std::istream &in_;
};

// gzopen reads plain files too, so one source covers both.
class GzFileSource final : public ByteSource {
public:
    explicit GzFileSource(const std::filesystem::path &path) {
        file_ = gzopen(path.string().c_str(), "rb");
        if (!file_)
            throw DataError("cannot open XML file: " + path.string());
    }
    ~GzFileSource() override {
        if (file_)
            gzclose(file_);
    }
    std::size_t read(char *buf, std::size_t n) override {
        int got = gzread(file_, buf, static_cast<unsigned>(n));
        if (got < 0) {
            int errnum = 0;
            const char *msg = gzerror(file_, &errnum);
            throw DataError(std::string("gzip read error: ") + (msg ? msg : "unknown"));
        }
        return static_cast<std::size_t>(got);
    }

private:
    gzFile file_ = nullptr;
};

const std::map<std::string, const char *> &entity_table() {
    static const std::map<std::string, const char *> table = {
        {"amp", "&"},       {"lt", "<"},        {"gt", ">"},        {"quot", "\""},
        {"apos", "'"},      {"nbsp", " "},
        {"agrave", "à"}, {"aacute", "á"}, {"acirc", "â"}, {"atilde", "ã"},
        {"auml", "ä"},   {"aring", "å"},  {"aelig", "æ"}, {"ccedil", "ç"},
        {"egrave", "è"}, {"eacute", "é"}, {"ecirc", "ê"}, {"euml", "ë"},
        {"igrave", "ì"}, {"iacute", "í"}, {"icirc", "î"}, {"iuml", "ï"},
        {"eth", "ð"},    {"ntilde", "ñ"}, {"ograve", "ò"}, {"oacute", "ó"},
        {"ocirc", "ô"},  {"otilde", "õ"}, {"ouml", "ö"},  {"oslash", "ø"},
        {"ugrave", "ù"}, {"uacute", "ú"}, {"ucirc", "û"}, {"uuml", "ü"},
        {"yacute", "ý"}, {"thorn", "þ"},  {"yuml", "ÿ"},  {"szlig", "ß"},
        {"Agrave", "À"}, {"Aacute", "Á"}, {"Acirc", "Â"}, {"Atilde", "Ã"},
        {"Auml", "Ä"},   {"Aring", "Å"},  {"AElig", "Æ"}, {"Ccedil", "Ç"},
        {"Egrave", "È"}, {"Eacute", "É"}, {"Ecirc", "Ê"}, {"Euml", "Ë"},
        {"Igrave", "Ì"}, {"Iacute", "Í"}, {"Icirc", "Î"}, {"Iuml", "Ï"},
        {"ETH", "Ð"},    {"Ntilde", "Ñ"}, {"Ograve", "Ò"}, {"Oacute", "Ó"},
        {"Ocirc", "Ô"},  {"Otilde", "Õ"}, {"Ouml", "Ö"},  {"Oslash", "Ø"},
        {"Ugrave", "Ù"}, {"Uacute", "Ú"}, {"Ucirc", "Û"}, {"Uuml", "Ü"},
        {"Yacute", "Ý"}, {"THORN", "Þ"},  {"times", "×"}, {"micro", "µ"},
        {"reg", "®"},    {"copy", "©"}};
    return table;
}

void append_codepoint(std::string &out, unsigned long cp) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

class XmlScanner {
public:
    explicit XmlScanner(ByteSource &src) : src_(src) {}

    std::size_t offset() const { return offset_; }

    int peek() {
        if (pos_ >= len_ && !refill())
            return -1;
        return static_cast<unsigned char>(buf_[pos_]);
    }

    int get() {
        int c = peek();
        if (c >= 0) {
            ++pos_;
            ++offset_;
        }
        return c;
    }

    void expect(char c, const char *what) {
        int got = get();
        if (got != c)
            throw ParseError(std::string("expected '") + c + "' " + what, offset_);
    }

    void skip_whitespace() {
        int c;
        while ((c = peek()) >= 0 && std::isspace(c))
            get();
    }

    bool eof() { return peek() < 0; }

private:
    bool refill() {
        len_ = src_.read(buf_.data(), buf_.size());
        pos_ = 0;
        return len_ > 0;
    }

    ByteSource &src_;
    std::array<char, 1 << 16> buf_{};
    std::size_t pos_ = 0, len_ = 0;
    std::size_t offset_ = 0;
};

class DblpParser {
public:
    DblpParser(ByteSource &src, const FilterConfig &cfg, IngestStats &stats)
        : scan_(src), cfg_(cfg), stats_(stats), builder_(cfg) {}

    Corpus run() {
        skip_prolog();
        // Root element; historically <dblp>, but any record container works.
        std::string root = read_open_tag();
        if (root.empty())
            throw ParseError("missing root element", scan_.offset());
        parse_records(root);
        return builder_.build();
    }

private:
    XmlScanner scan_;
    const FilterConfig &cfg_;
    IngestStats &stats_;
    CorpusBuilder builder_;
    std::string pending_attrs_;
    bool self_closed_ = false;

    [[noreturn]] void fail(const std::string &what) { throw ParseError(what, scan_.offset()); }

    void skip_prolog() {
        for (;;) {
            scan_.skip_whitespace();
            if (scan_.peek() != '<')
                return;
            scan_.get();
            int c = scan_.peek();
            if (c == '?') {
                skip_until("?>");
            } else if (c == '!') {
                scan_.get();
                if (scan_.peek() == '-') {
                    skip_until("-->");
                } else {
                    skip_doctype();
                }
            } else {
                pushback_lt_ = true;
                return;
            }
        }
    }

    void skip_doctype() {
        int depth = 0;
        int c;
        while ((c = scan_.get()) >= 0) {
            if (c == '[')
                ++depth;
            else if (c == ']')
                --depth;
            else if (c == '>' && depth <= 0)
                return;
        }
        fail("unterminated DOCTYPE");
    }

    void skip_until(const char *terminator) {
        std::size_t n = std::strlen(terminator), matched = 0;
        int c;
        while ((c = scan_.get()) >= 0) {
            if (c == terminator[matched]) {
                if (++matched == n)
                    return;
            } else {
                matched = (c == terminator[0]) ? 1 : 0;
            }
        }
        fail(std::string("unterminated construct, wanted '") + terminator + "'");
    }

    bool pushback_lt_ = false;

    // Consumes "<name attrs>"; returns the element name. Records attributes
    // in pending_attrs_ and whether the tag self-closed.
    std::string read_open_tag() {
        if (!pushback_lt_) {
            scan_.skip_whitespace();
            if (scan_.peek() != '<')
                fail("expected '<'");
            scan_.get();
        }
        pushback_lt_ = false;
        std::string name;
        int c;
        while ((c = scan_.peek()) >= 0 && !std::isspace(c) && c != '>' && c != '/') {
            name += static_cast<char>(scan_.get());
        }
        if (name.empty())
            fail("empty element name");
        pending_attrs_.clear();
        self_closed_ = false;
        for (;;) {
            c = scan_.get();
            if (c < 0)
                fail("unexpected end of input inside tag <" + name + ">");
            if (c == '>')
                break;
            if (c == '/') {
                if (scan_.peek() == '>') {
                    scan_.get();
                    self_closed_ = true;
                    break;
                }
            }
            pending_attrs_ += static_cast<char>(c);
        }
        return name;
    }

    std::string attr_value(const std::string &key) const {
        auto pos = pending_attrs_.find(key + "=");
        if (pos == std::string::npos)
            return {};
        pos += key.size() + 1;
        if (pos >= pending_attrs_.size())
            return {};
        char quote = pending_attrs_[pos];
        if (quote != '"' && quote != '\'')
            return {};
        auto end = pending_attrs_.find(quote, pos + 1);
        if (end == std::string::npos)
            return {};
        return pending_attrs_.substr(pos + 1, end - pos - 1);
    }

    void decode_entity(std::string &out) {
        // '&' already consumed.
        std::string ref;
        for (int i = 0; i < 12; ++i) {
            int c = scan_.peek();
            if (c < 0 || c == '<')
                break;
            scan_.get();
            if (c == ';') {
                if (!ref.empty() && ref[0] == '#') {
                    unsigned long cp = 0;
                    try {
                        cp = (ref.size() > 1 && (ref[1] == 'x' || ref[1] == 'X'))
                                 ? std::stoul(ref.substr(2), nullptr, 16)
                                 : std::stoul(ref.substr(1), nullptr, 10);
                    } catch (const std::exception &) {
                        out += '&';
                        out += ref;
                        out += ';';
                        return;
                    }
                    append_codepoint(out, cp);
                    return;
                }
                auto it = entity_table().find(ref);
                if (it != entity_table().end()) {
                    out += it->second;
                } else {
                    out += '&';
                    out += ref;
                    out += ';';
                }
                return;
            }
            ref += static_cast<char>(c);
        }
        out += '&';
        out += ref;
    }

    // Text content of an element, ignoring nested inline markup.
    std::string read_text_until_close(const std::string &element) {
        std::string text;
        int depth = 0;
        for (;;) {
            int c = scan_.get();
            if (c < 0)
                fail("unexpected end of input inside <" + element + ">");
            if (c == '&') {
                decode_entity(text);
            } else if (c == '<') {
                if (scan_.peek() == '/') {
                    scan_.get();
                    std::string close;
                    while ((c = scan_.get()) >= 0 && c != '>')
                        if (!std::isspace(c))
                            close += static_cast<char>(c);
                    if (c < 0)
                        fail("unterminated closing tag in <" + element + ">");
                    if (depth == 0) {
                        if (close != element)
                            fail("mismatched closing tag </" + close + ">, expected </" +
                                 element + ">");
                        return text;
                    }
                    --depth;
                } else if (scan_.peek() == '!') {
                    skip_until(">");
                } else {
                    // Inline markup (<i>, <sub>, ...); strip tags, keep text.
                    bool closed = false;
                    while ((c = scan_.get()) >= 0 && c != '>') {
                        if (c == '/' && scan_.peek() == '>')
                            closed = true;
                    }
                    if (c < 0)
                        fail("unterminated inline tag in <" + element + ">");
                    if (!closed)
                        ++depth;
                }
            } else {
                text += static_cast<char>(c);
            }
        }
    }

    void parse_records(const std::string &root) {
        for (;;) {
            scan_.skip_whitespace();
            if (scan_.eof())
                fail("unexpected end of input, unclosed <" + root + ">");
            scan_.expect('<', "at record boundary");
            int c = scan_.peek();
            if (c == '/') {
                scan_.get();
                std::string close;
                while ((c = scan_.get()) >= 0 && c != '>')
                    close += static_cast<char>(c);
                if (close != root)
                    fail("mismatched closing tag </" + close + ">");
                return;
            }
            if (c == '!') {
                scan_.get();
                if (scan_.peek() == '-')
                    skip_until("-->");
                else
                    skip_doctype();
                continue;
            }
            if (c == '?') {
                skip_until("?>");
                continue;
            }
            pushback_lt_ = true;
            std::string kind = read_open_tag();
            std::string publtype = attr_value("publtype");
            if (self_closed_) {
                classify_and_count(kind, publtype, {}, {}, 0, std::string());
                continue;
            }
            parse_one_record(kind, publtype);
        }
    }

    void parse_one_record(const std::string &kind, const std::string &publtype) {
        std::vector<std::string> authors;
        std::string venue;
        int year = 0;
        std::string pages;
        const bool is_article = (kind == "article");
        const bool is_inproc = (kind == "inproceedings");

        for (;;) {
            scan_.skip_whitespace();
            scan_.expect('<', "inside record");
            int c = scan_.peek();
            if (c == '/') {
                scan_.get();
                std::string close;
                while ((c = scan_.get()) >= 0 && c != '>')
                    close += static_cast<char>(c);
                if (c < 0)
                    fail("unterminated closing tag");
                if (close != kind)
                    fail("mismatched closing tag </" + close + ">, expected </" + kind + ">");
                break;
            }
            pushback_lt_ = true;
            std::string field = read_open_tag();
            if (self_closed_)
                continue;
            std::string text = read_text_until_close(field);
            if (field == "author") {
                std::string name = trim(text);
                if (!name.empty())
                    authors.push_back(std::move(name));
            } else if (field == "year") {
                try {
                    year = std::stoi(trim(text));
                } catch (const std::exception &) {
                    year = 0;
                }
            } else if (field == "pages") {
                pages = trim(text);
            } else if ((is_inproc && field == "booktitle") || (is_article && field == "journal")) {
                venue = trim(text);
            }
        }
        classify_and_count(kind, publtype, authors, venue, year, pages);
    }

    void classify_and_count(const std::string &kind, const std::string &publtype,
                            const std::vector<std::string> &authors, const std::string &venue,
                            int year, const std::string &pages) {
        VenueKind vkind;
        if (kind == "inproceedings") {
            vkind = VenueKind::Conference;
        } else if (kind == "article") {
            if (publtype.find("informal") != std::string::npos) {
                ++stats_.dropped_preprint;
                return;
            }
            vkind = VenueKind::Journal;
        } else {
            ++stats_.dropped_kind;
            ++stats_.skipped_kinds[kind];
            return;
        }

        int page_count = Paper::kUnknownPages;
        if (!pages.empty()) {
            auto parsed = parse_page_count(pages);
            if (parsed)
                page_count = *parsed;
        }
        RecordFilter filter{cfg_, stats_, builder_};
        filter.offer(venue, vkind, year, page_count, authors);
    }
};

} // namespace

Corpus ingest_dblp(std::istream &xml, const FilterConfig &cfg, IngestStats *stats) {
    IngestStats local;
    IstreamSource src(xml);
    DblpParser parser(src, cfg, stats ? *stats : local);
    return parser.run();
}

Corpus ingest_dblp_file(const std::filesystem::path &path, const FilterConfig &cfg,
                        IngestStats *stats) {
    IngestStats local;
    GzFileSource src(path);
    DblpParser parser(src, cfg, stats ? *stats : local);
    return parser.run();
}

// ---------------------------------------------------------------------------
// venue merging
// ---------------------------------------------------------------------------

std::map<std::string, std::string> load_merge_map(std::istream &in) {
    std::map<std::string, std::string> map;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        std::string s = trim(line);
        if (s.empty() || s[0] == '#')
            continue;
        auto tab = s.find('\t');
        if (tab == std::string::npos)
            throw ConfigError("merge map line " + std::to_string(lineno) +
                              ": expected alias<TAB>canonical");
        std::string alias = trim(s.substr(0, tab));
        std::string canonical = trim(s.substr(tab + 1));
        if (alias.empty() || canonical.empty())
            throw ConfigError("merge map line " + std::to_string(lineno) + ": empty name");
        auto it = map.find(alias);
        if (it != map.end() && it->second != canonical)
            throw ConfigError("merge map line " + std::to_string(lineno) + ": alias '" + alias +
                              "' mapped to both '" + it->second + "' and '" + canonical + "'");
        map.emplace(std::move(alias), std::move(canonical));
    }
    return map;
}

Corpus merge_venues(const Corpus &corpus, const std::map<std::string, std::string> &merge_map) {
    Corpus out;
    out.authors = corpus.authors;
    out.year_range = corpus.year_range;

    auto target_name = [&](const std::string &name) -> const std::string & {
        auto it = merge_map.find(name);
        return it == merge_map.end() ? name : it->second;
    };

    // New venue ids in first-appearance order over old ids.
    std::unordered_map<std::string, int> new_ids;
    std::vector<int> old_to_new(corpus.venues.size(), -1);
    for (const auto &v : corpus.venues) {
        const std::string &name = target_name(v.canonical_name);
        auto [it, fresh] = new_ids.try_emplace(name, static_cast<int>(out.venues.size()));
        if (fresh) {
            Venue nv;
            nv.venue_id = it->second;
            nv.canonical_name = name;
            nv.merged_names.insert(name);
            nv.kind = v.kind;
            out.venues.push_back(std::move(nv));
        }
        old_to_new[static_cast<std::size_t>(v.venue_id)] = it->second;
        Venue &nv = out.venues[static_cast<std::size_t>(it->second)];
        nv.merged_names.insert(v.merged_names.begin(), v.merged_names.end());
    }

    // No two venues may share a merged name after the merge.
    std::unordered_map<std::string, int> seen;
    for (const auto &v : out.venues) {
        for (const auto &name : v.merged_names) {
            auto [it, fresh] = seen.try_emplace(name, v.venue_id);
            if (!fresh)
                throw ConfigError("merge map makes venue name '" + name +
                                  "' ambiguous between '" +
                                  out.venues[static_cast<std::size_t>(it->second)].canonical_name +
                                  "' and '" + v.canonical_name + "'");
        }
    }

    out.papers = corpus.papers;
    for (auto &p : out.papers)
        p.venue_id = old_to_new[static_cast<std::size_t>(p.venue_id)];

    out.rebuild_indexes();
    return out;
}

// ---------------------------------------------------------------------------
// name matching
// ---------------------------------------------------------------------------

std::string normalize_name(std::string_view name) {
    std::string spaced;
    spaced.reserve(name.size());
    for (unsigned char c : name) {
        if (std::isalnum(c) || c >= 0x80)
            spaced += static_cast<char>(std::tolower(c));
        else
            spaced += ' ';
    }
    auto tokens = split(spaced, ' ');
    std::vector<std::string> kept;
    for (auto &t : tokens)
        if (!t.empty())
            kept.push_back(std::move(t));
    auto is_disambiguation = [](const std::string &t) {
        return t.size() == 4 && std::all_of(t.begin(), t.end(), [](unsigned char c) {
                   return std::isdigit(c);
               });
    };
    while (!kept.empty() && is_disambiguation(kept.back()))
        kept.pop_back();
    std::string out;
    for (std::size_t i = 0; i < kept.size(); ++i) {
        if (i)
            out += ' ';
        out += kept[i];
    }
    return out;
}

namespace {

int levenshtein(std::string_view a, std::string_view b) {
    const std::size_t n = a.size(), m = b.size();
    if (n == 0)
        return static_cast<int>(m);
    if (m == 0)
        return static_cast<int>(n);
    std::vector<int> prev(m + 1), cur(m + 1);
    for (std::size_t j = 0; j <= m; ++j)
        prev[j] = static_cast<int>(j);
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = static_cast<int>(i);
        for (std::size_t j = 1; j <= m; ++j) {
            int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

} // namespace

double name_similarity(std::string_view a, std::string_view b) {
    if (a.empty() && b.empty())
        return 1.0;
    std::size_t longest = std::max(a.size(), b.size());
    if (longest == 0)
        return 1.0;
    int dist = levenshtein(a, b);
    return 1.0 - static_cast<double>(dist) / static_cast<double>(longest);
}

std::map<std::string, NameMatch> match_names(const std::vector<std::string> &external_names,
                                             const Corpus &corpus, double threshold) {
    if (threshold < 0.0 || threshold > 1.0)
        throw ConfigError("match threshold must be in [0,1]");

    // Normalized corpus names; the smallest author id wins duplicates.
    std::unordered_map<std::string, int> exact;
    std::vector<std::pair<std::string, int>> normalized; // (normalized name, author_id)
    normalized.reserve(corpus.authors.size());
    for (const auto &a : corpus.authors) {
        std::string n = normalize_name(a.canonical_name);
        auto [it, fresh] = exact.try_emplace(n, a.author_id);
        if (!fresh)
            it->second = std::min(it->second, a.author_id);
        normalized.emplace_back(std::move(n), a.author_id);
        for (const auto &alias : a.alias_names) {
            std::string an = normalize_name(alias);
            auto [ait, afresh] = exact.try_emplace(an, a.author_id);
            if (!afresh)
                ait->second = std::min(ait->second, a.author_id);
        }
    }

    std::map<std::string, NameMatch> result;
    for (const auto &name : external_names) {
        std::string n = normalize_name(name);
        NameMatch match;
        auto it = exact.find(n);
        if (it != exact.end()) {
            match.author_id = it->second;
            match.similarity = 1.0;
        } else if (threshold < 1.0) {
            double best = -1.0;
            int best_id = -1;
            for (const auto &[cand, id] : normalized) {
                if (std::max(n.size(), cand.size()) == 0)
                    continue;
                double sim = name_similarity(n, cand);
                if (sim > best) {
                    best = sim;
                    best_id = id;
                }
            }
            if (best >= threshold) {
                match.author_id = best_id;
                match.similarity = best;
            } else {
                match.similarity = std::max(best, 0.0);
            }
        }
        result[name] = match;
    }
    return result;
}

} // namespace venuescore
