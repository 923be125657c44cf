#pragma once

#include "venuescore/corpus.hpp"
#include "venuescore/design.hpp"
#include "venuescore/solver.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace venuescore {

// Regression rows plus target vector for one metric of interest.
struct TargetSet {
    std::vector<RowSpec> rows;
    std::vector<double> b;
    Loss loss = Loss::huber();
    bool znormed = false;
    bool log_amounts = false;
    bool marginal = false;
};

struct UnmatchedReport {
    std::vector<std::string> unmatched;
    std::size_t matched_count = 0;
};

// ---------------------------------------------------------------------------
// faculty status
// ---------------------------------------------------------------------------

struct FacultyLabels {
    std::vector<int> labels; // +1 / -1 per corpus author id
    int k = 40;
    std::string ranking_source;
};

// affiliations: "name,university" (or tab-separated) rows.
// ranking: university names in rank order, best first.
FacultyLabels build_faculty_labels(const Corpus &corpus, std::istream &affiliations,
                                   std::istream &ranking, int k, double match_threshold,
                                   UnmatchedReport *report = nullptr);

// Classification target over every corpus author, modified Huber loss.
TargetSet faculty_target_set(const FacultyLabels &labels);

std::map<std::string, std::string> parse_affiliations(std::istream &in);
std::vector<std::string> parse_ranking(std::istream &in);

// ---------------------------------------------------------------------------
// NSF awards
// ---------------------------------------------------------------------------

struct GrantTarget {
    std::string award_id;
    int year = 0;
    std::vector<int> pi_author_ids; // matched PIs only, sorted
    double matched_fraction = 0.0;
    double amount_adjusted = 0.0; // CPI-adjusted, pre-clip
    double amount_clipped = 0.0;
};

struct NsfConfig {
    bool log_amounts = false;
    bool znorm = true;
    bool marginal = false;
    double clip_cap = 1e7;
    double min_amount = 20000.0;
    double min_matched_fraction = 0.5;
    double match_threshold = 0.9;
    double lambda = 0.03;
};

struct NsfStats {
    long long kept = 0;
    long long dropped_amount = 0;
    long long dropped_negative = 0;
    long long dropped_nonfinite = 0;
    long long dropped_unmatched = 0;
    std::string to_json() const;
};

struct NsfBuildResult {
    TargetSet targets;
    std::vector<GrantTarget> grants;
    NsfStats stats;
};

// awards: JSON-lines {id, amount, year, pi_names[]}. cpi: year -> factor
// multiplying nominal dollars into constant dollars.
NsfBuildResult build_nsf_targets(const Corpus &corpus, std::istream &awards_jsonl,
                                 const std::map<int, double> &cpi, const NsfConfig &config);

std::map<int, double> load_cpi(std::istream &in);

// Identity below cap, cap*(1 + ln(x/cap)) above; continuous and C1 at cap.
double soft_clip(double x, double cap);

// ---------------------------------------------------------------------------
// salaries
// ---------------------------------------------------------------------------

struct SalaryRow {
    std::string name;
    double salary = 0.0;
    int year = 0;
};

struct SalaryTarget {
    int author_id = -1;
    double salary = 0.0;
};

struct SalaryConfig {
    double min_salary = 120000.0;
    double max_salary = 800000.0;
    double match_threshold = 0.9;
};

struct SalaryBuildResult {
    TargetSet targets;
    std::vector<SalaryTarget> retained;
    UnmatchedReport report;
    long long dropped_range = 0;
};

// "name,salary,year" rows; one stream per source file.
std::vector<SalaryRow> parse_salary_rows(std::istream &in);

// Max salary per individual across rows, range filter, then name matching.
SalaryBuildResult build_salary_targets(const Corpus &corpus, const std::vector<SalaryRow> &rows,
                                       const SalaryConfig &config);

// In-place zero-mean unit-variance; returns {mean, stddev}.
std::pair<double, double> znorm_vector(std::vector<double> &values);

} // namespace venuescore
