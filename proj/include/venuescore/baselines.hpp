#pragma once

#include "venuescore/corpus.hpp"

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace venuescore {

struct ScoreTable {
    std::string tag;
    std::map<std::string, double> scores;
};

ScoreTable load_score_table(std::istream &in, std::string tag);
void write_score_table(const ScoreTable &table, std::ostream &out);

// Pairwise correlation coefficients. Spearman uses average ranks for ties;
// Kendall is the tie-corrected tau-b. Zero-variance input is an error.
double pearson(std::span<const double> x, std::span<const double> y);
double spearman(std::span<const double> x, std::span<const double> y);
double kendall(std::span<const double> x, std::span<const double> y);

struct PageRankConfig {
    double damping = 0.85;
    double tol = 1e-10; // L1 residual
    int max_iter = 200;
    bool binarize = false; // drop edge weights, keep adjacency
};

// Weighted undirected adjacency; dangling nodes redistribute uniformly.
std::vector<double> pagerank(const std::vector<std::vector<std::pair<int, double>>> &adjacency,
                             const PageRankConfig &config);

// Co-authorship graph: edge weight = number of co-authored papers.
ScoreTable pagerank_authors(const Corpus &corpus, const PageRankConfig &config);
// Venue graph: edge weight = number of authors publishing in both venues.
ScoreTable pagerank_venues(const Corpus &corpus, const PageRankConfig &config);

struct Alignment {
    enum class Kind { Exact, Fuzzy };
    Kind kind = Kind::Exact;
    double threshold = 0.9;

    static Alignment exact() { return {}; }
    static Alignment fuzzy(double threshold) { return {Kind::Fuzzy, threshold}; }
};

struct CorrelationReport {
    std::vector<std::string> tags;
    int aligned_count = 0;
    std::vector<std::vector<double>> spearman_m;
    std::vector<std::vector<double>> kendall_m;
    std::vector<std::vector<double>> pearson_m;
    std::map<std::string, std::vector<std::string>> dropped; // per table tag

    std::string to_json() const;
};

// Intersect entities across tables (normalized names; optional fuzzy tier),
// then compute all pairwise coefficients on the intersection.
CorrelationReport correlate(const std::vector<ScoreTable> &tables, const Alignment &alignment);

} // namespace venuescore
