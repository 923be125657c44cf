#include <doctest.h>

#include "venuescore/corpus.hpp"
#include "venuescore/errors.hpp"

#include <nlohmann/json.hpp>
#include <zlib.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <unistd.h>

using namespace venuescore;

namespace {

const char *kDblpFixture = R"(<?xml version="1.0" encoding="ISO-8859-1"?>
<!DOCTYPE dblp SYSTEM "dblp.dtd">
<dblp>
<inproceedings key="conf/x/1" mdate="2019-01-01">
<author>Alice Smith</author>
<author>Bob Jones</author>
<title>Short Paper.</title>
<pages>1-4</pages>
<year>2005</year>
<booktitle>NIPS</booktitle>
</inproceedings>
<inproceedings key="conf/x/2">
<author>Alice Smith</author>
<title>A Longer <i>Paper</i>.</title>
<pages>10-25</pages>
<year>2006</year>
<booktitle>NIPS</booktitle>
</inproceedings>
<article key="journals/y/3">
<author>Carol White</author>
<title>Journal Piece.</title>
<pages>100-120</pages>
<year>2007</year>
<journal>J. Things</journal>
</article>
<article key="journals/corr/4" publtype="informal">
<author>Dan Black</author>
<title>Preprint.</title>
<year>2008</year>
<journal>CoRR</journal>
</article>
<book key="books/z/5">
<author>Eve Gray</author>
<title>A Book</title>
<year>2009</year>
</book>
<inproceedings key="conf/x/6">
<author>Fr&eacute;d&eacute;ric H&ouml;he</author>
<title>Entities &amp; Stuff</title>
<pages>39:1-39:24</pages>
<year>2010</year>
<booktitle>ICML</booktitle>
</inproceedings>
<inproceedings key="conf/x/7">
<author>Grace Lee</author>
<title>No pages field</title>
<year>2011</year>
<booktitle>ICML</booktitle>
</inproceedings>
</dblp>
)";

std::filesystem::path make_temp_dir(const std::string &tag) {
    auto dir = std::filesystem::temp_directory_path() /
               ("venuescore_test_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    return dir;
}

// Independent reference edit distance for the similarity oracle.
int reference_levenshtein(const std::string &a, const std::string &b) {
    std::vector<std::vector<int>> d(a.size() + 1, std::vector<int>(b.size() + 1, 0));
    for (std::size_t i = 0; i <= a.size(); ++i)
        d[i][0] = static_cast<int>(i);
    for (std::size_t j = 0; j <= b.size(); ++j)
        d[0][j] = static_cast<int>(j);
    for (std::size_t i = 1; i <= a.size(); ++i)
        for (std::size_t j = 1; j <= b.size(); ++j)
            d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                                d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    return d[a.size()][b.size()];
}

} // namespace

TEST_SUITE("corpus") {

TEST_CASE("normalized ingest basics") {
    SUBCASE("single record") {
        std::istringstream in("NIPS\t2005\t8\tA. One|B. Two\n");
        Corpus c = ingest_normalized(in);
        CHECK(c.papers.size() == 1);
        CHECK(c.authors.size() == 2);
        CHECK(c.venues.size() == 1);
        CHECK(c.papers[0].page_count == 8);
        CHECK(c.papers[0].author_ids.size() == 2);
    }
    SUBCASE("empty stream") {
        std::istringstream in("");
        Corpus c = ingest_normalized(in);
        CHECK(c.papers.empty());
        CHECK(c.authors.empty());
        CHECK(c.venues.empty());
    }
    SUBCASE("below-6-pages filter") {
        std::istringstream in("NIPS\t2005\t3\tA. One\n");
        IngestStats stats;
        Corpus c = ingest_normalized(in, {}, &stats);
        CHECK(c.papers.empty());
        CHECK(stats.dropped_pages == 1);
    }
    SUBCASE("unknown pages kept") {
        std::istringstream in("NIPS\t2005\t?\tA. One\n");
        IngestStats stats;
        Corpus c = ingest_normalized(in, {}, &stats);
        CHECK(c.papers.size() == 1);
        CHECK_FALSE(c.papers[0].pages_known());
        CHECK(stats.unknown_pages_kept == 1);
    }
    SUBCASE("wrong field count reports line number") {
        std::istringstream in("NIPS\t2005\t8\tA. One\n"
                              "BAD LINE WITHOUT TABS\n");
        CHECK_THROWS_WITH_AS(ingest_normalized(in), doctest::Contains("line 2"), DataError);
    }
    SUBCASE("year filter") {
        std::istringstream in("NIPS\t1960\t8\tA. One\n");
        IngestStats stats;
        Corpus c = ingest_normalized(in, {}, &stats);
        CHECK(c.papers.empty());
        CHECK(stats.dropped_year == 1);
    }
}

TEST_CASE("ingestion is deterministic") {
    const std::string text = "NIPS\t2005\t8\tA. One|B. Two\n"
                             "ICML\t2006\t12\tB. Two\n"
                             "NIPS\t2007\t?\tC. Three|A. One\n";
    std::istringstream in1(text), in2(text);
    Corpus a = ingest_normalized(in1);
    Corpus b = ingest_normalized(in2);
    REQUIRE(a.papers.size() == b.papers.size());
    REQUIRE(a.authors.size() == b.authors.size());
    for (std::size_t i = 0; i < a.papers.size(); ++i) {
        CHECK(a.papers[i].venue_id == b.papers[i].venue_id);
        CHECK(a.papers[i].author_ids == b.papers[i].author_ids);
    }
    for (std::size_t i = 0; i < a.authors.size(); ++i)
        CHECK(a.authors[i].canonical_name == b.authors[i].canonical_name);
}

TEST_CASE("export/ingest round trip is the identity") {
    std::mt19937 rng(7);
    std::ostringstream gen;
    const char *venues[] = {"NIPS", "ICML", "SODA", "CHI"};
    const char *people[] = {"A One", "B Two", "C Three", "D Four", "E Five"};
    for (int i = 0; i < 60; ++i) {
        gen << venues[rng() % 4] << '\t' << (2000 + static_cast<int>(rng() % 15)) << '\t';
        if (rng() % 5 == 0)
            gen << '?';
        else
            gen << (6 + static_cast<int>(rng() % 20));
        gen << '\t' << people[rng() % 5];
        if (rng() % 2)
            gen << '|' << people[rng() % 5];
        gen << '\n';
    }
    std::istringstream in(gen.str());
    Corpus a = ingest_normalized(in);

    std::ostringstream exported;
    export_normalized(a, exported);
    std::istringstream in2(exported.str());
    Corpus b = ingest_normalized(in2);

    REQUIRE(a.papers.size() == b.papers.size());
    CHECK(a.authors.size() == b.authors.size());
    CHECK(a.venues.size() == b.venues.size());
    for (std::size_t i = 0; i < a.papers.size(); ++i) {
        const Paper &pa = a.papers[i], &pb = b.papers[i];
        CHECK(pa.year == pb.year);
        CHECK(pa.page_count == pb.page_count);
        CHECK(a.venues[pa.venue_id].canonical_name == b.venues[pb.venue_id].canonical_name);
        REQUIRE(pa.author_ids.size() == pb.author_ids.size());
        for (std::size_t k = 0; k < pa.author_ids.size(); ++k)
            CHECK(a.authors[pa.author_ids[k]].canonical_name ==
                  b.authors[pb.author_ids[k]].canonical_name);
    }
}

TEST_CASE("filter soundness after ingest") {
    std::mt19937 rng(11);
    std::ostringstream gen;
    for (int i = 0; i < 200; ++i) {
        gen << "V" << (rng() % 6) << '\t' << (1950 + static_cast<int>(rng() % 90)) << '\t';
        int p = static_cast<int>(rng() % 140); // some below 6, some above 100
        if (p == 0)
            gen << '?';
        else
            gen << p;
        gen << "\tA" << (rng() % 9) << '\n';
    }
    std::istringstream in(gen.str());
    FilterConfig cfg;
    Corpus c = ingest_normalized(in, cfg);
    for (const auto &p : c.papers) {
        CHECK(p.year >= cfg.min_year);
        CHECK(p.year <= cfg.max_year);
        if (p.pages_known()) {
            CHECK(p.page_count >= cfg.min_pages);
            CHECK(p.page_count <= cfg.max_pages);
        }
    }
}

TEST_CASE("dblp xml ingest") {
    std::istringstream in(kDblpFixture);
    IngestStats stats;
    Corpus c = ingest_dblp(in, {}, &stats);

    CHECK(c.papers.size() == 4); // 16pp, 21pp, 24pp, unknown
    CHECK(stats.kept == 4);
    CHECK(stats.dropped_pages == 1);    // pages 1-4
    CHECK(stats.dropped_preprint == 1); // informal article
    CHECK(stats.dropped_kind == 1);     // book
    CHECK(stats.unknown_pages_kept == 1);
    CHECK(c.venues.size() == 3); // NIPS, J. Things, ICML
    CHECK(c.authors.size() == 4);

    // electronic page ranges like 39:1-39:24
    bool found24 = false;
    for (const auto &p : c.papers)
        found24 = found24 || p.page_count == 24;
    CHECK(found24);

    // entity decoding
    CHECK(c.author_id("Frédéric Höhe") >= 0);

    // venue kinds survive classification
    CHECK(c.venues[c.venue_id_by_name("J. Things")].kind == VenueKind::Journal);
    CHECK(c.venues[c.venue_id_by_name("NIPS")].kind == VenueKind::Conference);

    auto json = nlohmann::json::parse(stats.to_json());
    CHECK(json["kept"] == 4);
    CHECK(json["dropped"]["pages"] == 1);
    CHECK(json["skipped_kinds"]["book"] == 1);
}

TEST_CASE("dblp parse errors carry byte offsets") {
    SUBCASE("truncated input") {
        std::istringstream in("<dblp><inproceedings key=\"x\"><author>Someone");
        try {
            ingest_dblp(in, {});
            FAIL("expected ParseError");
        } catch (const ParseError &e) {
            CHECK(e.byte_offset() > 0);
        }
    }
    SUBCASE("mismatched closing tag") {
        std::istringstream in("<dblp><inproceedings key=\"x\">"
                              "<author>Someone</booktitle></inproceedings></dblp>");
        CHECK_THROWS_AS(ingest_dblp(in, {}), ParseError);
    }
}

TEST_CASE("dblp gzip and plain files are equivalent") {
    auto dir = make_temp_dir("gzip");
    auto plain = dir / "snippet.xml";
    auto gz = dir / "snippet.xml.gz";
    {
        std::ofstream out(plain, std::ios::binary);
        out << kDblpFixture;
    }
    {
        gzFile f = gzopen(gz.string().c_str(), "wb");
        REQUIRE(f != nullptr);
        gzwrite(f, kDblpFixture, static_cast<unsigned>(std::strlen(kDblpFixture)));
        gzclose(f);
    }
    Corpus a = ingest_dblp_file(plain, {});
    Corpus b = ingest_dblp_file(gz, {});
    CHECK(a.papers.size() == b.papers.size());
    CHECK(a.authors.size() == b.authors.size());
    CHECK(a.venues.size() == b.venues.size());
    std::filesystem::remove_all(dir);
}

TEST_CASE("page field parsing") {
    CHECK(parse_page_count("1-4") == 4);
    CHECK(parse_page_count("10-25") == 16);
    CHECK(parse_page_count("39:1-39:24") == 24);
    CHECK(parse_page_count("7") == 1);
    CHECK_FALSE(parse_page_count("i-xv").has_value());
    CHECK_FALSE(parse_page_count("").has_value());
    CHECK_FALSE(parse_page_count("25-10").has_value()); // reversed range
}

TEST_CASE("merge_venues") {
    auto corpus_from = [](const std::string &text) {
        std::istringstream in(text);
        return ingest_normalized(in);
    };

    SUBCASE("NIPS into NeurIPS") {
        Corpus c = corpus_from("NIPS\t2005\t8\tA One\n"
                               "NeurIPS\t2018\t9\tB Two\n");
        Corpus merged = merge_venues(c, {{"NIPS", "NeurIPS"}});
        CHECK(merged.venues.size() == 1);
        CHECK(merged.papers.size() == 2);
        CHECK(merged.venues[0].canonical_name == "NeurIPS");
        CHECK(merged.venues[0].merged_names.count("NIPS") == 1);
    }
    SUBCASE("empty map is the identity") {
        Corpus c = corpus_from("NIPS\t2005\t8\tA One\nICML\t2006\t9\tB Two\n");
        Corpus merged = merge_venues(c, {});
        CHECK(merged.venues.size() == c.venues.size());
        CHECK(merged.papers.size() == c.papers.size());
    }
    SUBCASE("collapsing 3 aliases drops venue count by 2") {
        // 5 papers, 4 distinct venues; A,B,C -> X leaves {X, D}
        Corpus c = corpus_from("A\t2005\t8\tP One\n"
                               "B\t2006\t8\tP One\n"
                               "C\t2007\t8\tQ Two\n"
                               "D\t2008\t8\tQ Two\n"
                               "A\t2009\t8\tR Three\n");
        Corpus merged = merge_venues(c, {{"A", "X"}, {"B", "X"}, {"C", "X"}});
        CHECK(merged.papers.size() == 5);
        CHECK(static_cast<int>(c.venues.size()) - static_cast<int>(merged.venues.size()) == 2);
    }
    SUBCASE("paper count and incidence preserved") {
        Corpus c = corpus_from("A\t2005\t8\tP One|Q Two\n"
                               "B\t2006\t8\tP One\n"
                               "C\t2007\t8\tQ Two|R Three|P One\n");
        std::size_t incidence_before = 0;
        for (const auto &p : c.papers)
            incidence_before += p.author_ids.size();
        Corpus merged = merge_venues(c, {{"A", "C"}, {"B", "C"}});
        std::size_t incidence_after = 0;
        for (const auto &p : merged.papers)
            incidence_after += p.author_ids.size();
        CHECK(merged.papers.size() == c.papers.size());
        CHECK(incidence_after == incidence_before);
    }
    SUBCASE("duplicate alias in map file is a configuration error") {
        std::istringstream in("NIPS\tNeurIPS\nNIPS\tICML\n");
        CHECK_THROWS_AS(load_merge_map(in), ConfigError);
    }
    SUBCASE("merged names stay unique across venues") {
        Corpus c = corpus_from("A\t2005\t8\tP One\nB\t2006\t8\tQ Two\nC\t2007\t8\tR Three\n");
        Corpus first = merge_venues(c, {{"A", "B"}});
        // "A" now lives inside B's merged set; pulling it out again would
        // leave the same name on two venues
        CHECK_THROWS_AS(merge_venues(first, {{"C", "A"}}), ConfigError);
        // a self-consistent second pass is fine
        Corpus second = merge_venues(first, {{"C", "B"}});
        CHECK(second.venues.size() == 1);
    }
}

TEST_CASE("name matching") {
    std::istringstream in("NIPS\t2005\t8\tAlice Smith|Bob Jones\n"
                          "ICML\t2006\t9\tCarol White\n"
                          "KDD\t2007\t10\tJiawei Han 0001\n");
    Corpus c = ingest_normalized(in);

    SUBCASE("exact name matches with similarity 1") {
        auto m = match_names({"Alice Smith"}, c, 0.9);
        CHECK(m.at("Alice Smith").matched());
        CHECK(m.at("Alice Smith").similarity == 1.0);
    }
    SUBCASE("disambiguation suffix does not block matching") {
        auto m = match_names({"Jiawei Han"}, c, 0.9);
        REQUIRE(m.at("Jiawei Han").matched());
        CHECK(c.authors[m.at("Jiawei Han").author_id].canonical_name == "Jiawei Han 0001");
    }
    SUBCASE("nonsense name stays unmatched at 0.9") {
        auto m = match_names({"Zzz Qqq"}, c, 0.9);
        CHECK_FALSE(m.at("Zzz Qqq").matched());
        // oracle: best similarity over the corpus, via an independent DP
        double best = 0.0;
        std::string nb = normalize_name("Zzz Qqq");
        for (const auto &a : c.authors) {
            std::string na = normalize_name(a.canonical_name);
            double sim = 1.0 - static_cast<double>(reference_levenshtein(na, nb)) /
                                   static_cast<double>(std::max(na.size(), nb.size()));
            best = std::max(best, sim);
        }
        CHECK(best < 0.9);
        CHECK(m.at("Zzz Qqq").similarity == doctest::Approx(best).epsilon(1e-12));
    }
    SUBCASE("fuzzy match above threshold") {
        auto m = match_names({"Alice Smyth"}, c, 0.8);
        REQUIRE(m.at("Alice Smyth").matched());
        CHECK(c.authors[m.at("Alice Smyth").author_id].canonical_name == "Alice Smith");
        CHECK(m.at("Alice Smyth").similarity > 0.8);
        CHECK(m.at("Alice Smyth").similarity < 1.0);
    }
    SUBCASE("similarity agrees with the reference DP on random strings") {
        std::mt19937 rng(3);
        const std::string alphabet = "abcdef ";
        for (int trial = 0; trial < 50; ++trial) {
            std::string a, b;
            std::size_t la = 3 + rng() % 8, lb = 3 + rng() % 8;
            for (std::size_t i = 0; i < la; ++i)
                a += alphabet[rng() % alphabet.size()];
            for (std::size_t i = 0; i < lb; ++i)
                b += alphabet[rng() % alphabet.size()];
            double expect = 1.0 - static_cast<double>(reference_levenshtein(a, b)) /
                                      static_cast<double>(std::max(a.size(), b.size()));
            CHECK(name_similarity(a, b) == doctest::Approx(expect).epsilon(1e-12));
        }
    }
}

TEST_CASE("alias names resolve through the index") {
    std::istringstream in("NIPS\t2005\t8\tAlice Smith\n");
    Corpus c = ingest_normalized(in);
    c.authors[0].alias_names.insert("A. Smith");
    c.rebuild_indexes();
    CHECK(c.author_id("A. Smith") == c.authors[0].author_id);
    auto m = match_names({"A. Smith"}, c, 0.99);
    CHECK(m.at("A. Smith").matched());
    CHECK(m.at("A. Smith").similarity == 1.0);
}

TEST_CASE("normalize_name") {
    CHECK(normalize_name("Jiawei Han 0001") == "jiawei han");
    CHECK(normalize_name("J.-P. O'Neil") == "j p o neil");
    CHECK(normalize_name("  Spaced   Out  ") == "spaced out");
    CHECK(normalize_name("Year 2019 Person 2019") == "year 2019 person"); // only suffix tokens
}

} // TEST_SUITE
