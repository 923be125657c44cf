#pragma once

#include "venuescore/corpus.hpp"
#include "venuescore/design.hpp"
#include "venuescore/solver.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace venuescore {

// Learned quality per (venue, year).
struct VenueScoreModel {
    std::pair<int, int> year_range{0, 0};
    std::map<std::pair<int, int>, double> scores; // (venue_id, year) -> score
    std::string source;
    std::vector<std::string> normalization_history;
    std::vector<std::string> warnings;

    double at(int venue_id, int year) const;
    bool has(int venue_id, int year) const;
};

// Broadcast learned chunk weights to per-year scores; bias is dropped.
VenueScoreModel expand_weights(const std::vector<double> &weights, const ColumnMap &columns,
                               std::string source_tag);

enum class YearNormMode { PerYearStd, Top10Mean };

VenueScoreModel year_normalize(const VenueScoreModel &model, YearNormMode mode);

// Zero mean, unit variance per group (per year or global), then clip.
VenueScoreModel znorm_clip(const VenueScoreModel &model, double clip_sigmas = 12.0,
                           bool per_year = true);

struct CombinedModel {
    std::vector<VenueScoreModel> members;
    VenueScoreModel combined;
};

// Unweighted mean over members on the union of their domains. Members are
// expected to be znorm_clipped already.
CombinedModel combine(const std::vector<VenueScoreModel> &models);

struct AuthorScore {
    double total = 0.0;
    std::map<int, double> per_year; // publication year -> credited score
};

AuthorScore score_author(const VenueScoreModel &model, const Corpus &corpus, int author_id,
                         CreditModel credit,
                         std::optional<std::pair<int, int>> year_range = std::nullopt);

struct InstitutionScore {
    std::string university;
    double total = 0.0;
    double size_normed = 0.0;
    int faculty = 0;
    long long papers = 0;
};

// name_to_university is resolved against the corpus via match_names.
// size_normed = total / sqrt(faculty), or total / faculty when per_capita.
std::vector<InstitutionScore> score_institution(const VenueScoreModel &model, const Corpus &corpus,
                                                const std::map<std::string, std::string> &name_to_university,
                                                CreditModel credit, double match_threshold,
                                                bool per_capita = false,
                                                std::vector<std::string> *warnings = nullptr);

struct AgingCurvePoint {
    double mean_score = 0.0;
    long long authors = 0;
};

// Mean credited productivity per career year, over authors who still publish
// in that career year. Career year 0 is an author's first publication year.
std::map<int, AgingCurvePoint> aging_curve(const Corpus &corpus, const VenueScoreModel &model,
                                           CreditModel credit);

// Regularized plus-minus: ridge solution of incidence * x = paper_scores.
// incidence_rows lists the author indices on each paper.
std::vector<double> credit_split(const std::vector<std::vector<int>> &incidence_rows,
                                 int n_authors, const std::vector<double> &paper_scores,
                                 double lambda);
// Large-instance variant backed by the SGD solver.
std::vector<double> credit_split(const std::vector<std::vector<int>> &incidence_rows,
                                 int n_authors, const std::vector<double> &paper_scores,
                                 double lambda, const SolverConfig &config);

// venue_name, year, score table (the primary artifact output).
void write_venue_scores(const VenueScoreModel &model, const Corpus &corpus, std::ostream &out);
VenueScoreModel load_venue_scores(std::istream &in, const Corpus &corpus, std::string source_tag);

} // namespace venuescore
