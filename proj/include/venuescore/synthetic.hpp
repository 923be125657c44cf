#pragma once

#include "venuescore/corpus.hpp"
#include "venuescore/design.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace venuescore {

// Desk-scale planted-truth fixture: venue scores are sampled, author values
// derive from them, and all target files are written in module-native formats.
struct SyntheticSpec {
    int venues = 200;
    int authors = 5000;
    int papers_per_author = 8;
    int first_year = 2000;
    int last_year = 2019;
    int home_venues = 5;        // per-author venue pool
    double coauthor_prob = 0.3; // chance a paper gains 1-2 co-authors
    double unknown_page_prob = 0.1;
    double score_sigma = 1.0;   // true venue scores ~ N(0, sigma^2)

    double faculty_fraction = 0.2; // top fraction by true value labeled +1
    double label_flip = 0.10;
    int top_k = 40;
    int ranked_universities = 50;

    double grant_prob = 0.3; // per-author chance of holding awards
    double grant_noise = 0.5;
    double salary_prob = 0.4;
    double salary_noise = 0.15;

    CreditModel credit = CreditModel::EqualSplit;
    std::uint64_t seed = 42;
};

struct SyntheticData {
    Corpus corpus;
    std::vector<double> true_venue_scores;  // per venue id
    std::vector<double> true_author_values; // per author id
    std::vector<int> faculty_labels;        // +1/-1 after flips

    std::string corpus_tsv;
    std::string affiliations_csv;
    std::string ranking_txt;
    std::string awards_jsonl;
    std::string cpi_csv;
    std::string salaries_csv;
    std::string truth_venues_tsv;
    std::string truth_authors_tsv;
    std::string truth_json;
};

SyntheticData generate_synthetic(const SyntheticSpec &spec);

// Writes every payload into dir (atomically); returns the paths written.
std::vector<std::filesystem::path> write_synthetic(const SyntheticData &data,
                                                   const std::filesystem::path &dir);

} // namespace venuescore
