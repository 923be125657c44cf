#pragma once

#include "venuescore/corpus.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace venuescore {

// Venue x author paper counts over the clustering window.
struct VenueAuthorCounts {
    std::vector<int> venue_ids;  // retained venues, ascending
    std::vector<int> author_ids; // vocabulary, ascending
    // per retained venue: (author index into author_ids, paper count)
    std::vector<std::vector<std::pair<int, int>>> counts;
    int since_year = 0;
    int min_universities = 0;
};

// Venues kept iff faculty from >= min_universities distinct universities
// published there since since_year.
VenueAuthorCounts build_count_matrix(const Corpus &corpus, int since_year, int min_universities,
                                     const std::map<std::string, std::string> &name_to_university,
                                     double match_threshold);

struct TopicVectors {
    std::vector<int> venue_ids;
    std::vector<std::vector<double>> vectors; // simplex rows, one per venue
    int d = 0;
    std::vector<std::string> warnings;
};

struct LdaConfig {
    int d = 50;
    double alpha = -1.0; // < 0 means 50/d
    double beta = 0.01;
    int iterations = 500;
    std::uint64_t seed = 1;
};

// Collapsed Gibbs sampling; venues are documents, authors are words.
TopicVectors lda_fit(const VenueAuthorCounts &counts, const LdaConfig &config);

struct Clustering {
    std::vector<int> assignment;
    std::vector<std::vector<double>> centroids;
    int k = 0;
    double silhouette = 0.0;
    double inertia = 0.0;
    std::vector<double> inertia_history; // non-increasing within the winning run
};

Clustering kmeans(const std::vector<std::vector<double>> &vectors, int k, int restarts,
                  std::uint64_t seed);

// Mean silhouette with Euclidean distance; singleton clusters score 0.
double silhouette_score(const std::vector<std::vector<double>> &vectors,
                        const std::vector<int> &assignment, int k);

std::map<int, double> silhouette_sweep(const std::vector<std::vector<double>> &vectors, int k_min,
                                       int k_max, int restarts, std::uint64_t seed);

// Paper-count-weighted mean of the topic vectors of the venues an entity
// publishes in, renormalized to the simplex.
std::vector<double> fingerprint(const Corpus &corpus, const VenueAuthorCounts &counts,
                                const TopicVectors &topics, const std::vector<int> &author_ids,
                                std::vector<std::string> *warnings = nullptr);

} // namespace venuescore
