#include "venuescore/scores.hpp"

#include "venuescore/errors.hpp"
#include "venuescore/io_util.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace venuescore {

double VenueScoreModel::at(int venue_id, int year) const {
    auto it = scores.find({venue_id, year});
    return it == scores.end() ? 0.0 : it->second;
}

bool VenueScoreModel::has(int venue_id, int year) const {
    return scores.count({venue_id, year}) > 0;
}

VenueScoreModel expand_weights(const std::vector<double> &weights, const ColumnMap &columns,
                               std::string source_tag) {
    if (weights.size() < static_cast<std::size_t>(columns.width()))
        throw DataError("expand_weights: weight vector shorter than column map");
    VenueScoreModel model;
    model.year_range = columns.year_range;
    model.source = std::move(source_tag);
    for (std::size_t c = 0; c < columns.columns.size(); ++c) {
        const ColumnInfo &info = columns.columns[c];
        double w = weights[c];
        for (int y = info.start_year; y <= info.end_year; ++y)
            model.scores[{info.venue_id, y}] = w;
    }
    return model;
}

namespace {

std::map<int, std::vector<double>> scores_by_year(const VenueScoreModel &model) {
    std::map<int, std::vector<double>> by_year;
    for (const auto &[key, score] : model.scores)
        by_year[key.second].push_back(score);
    return by_year;
}

double population_std(const std::vector<double> &values, double mean) {
    double var = 0.0;
    for (double v : values)
        var += (v - mean) * (v - mean);
    return std::sqrt(var / static_cast<double>(values.size()));
}

} // namespace

VenueScoreModel year_normalize(const VenueScoreModel &model, YearNormMode mode) {
    VenueScoreModel out = model;
    std::map<int, double> divisor;
    for (auto &[year, values] : scores_by_year(model)) {
        double d = 0.0;
        if (mode == YearNormMode::PerYearStd) {
            double mean = 0.0;
            for (double v : values)
                mean += v;
            mean /= static_cast<double>(values.size());
            d = population_std(values, mean);
        } else {
            std::vector<double> top = values;
            std::sort(top.begin(), top.end(), std::greater<>());
            std::size_t n = std::min<std::size_t>(10, top.size());
            for (std::size_t i = 0; i < n; ++i)
                d += top[i];
            d /= static_cast<double>(n);
        }
        if (d <= 0.0) {
            out.warnings.push_back("year " + std::to_string(year) +
                                   " left unscaled (non-positive divisor)");
            divisor[year] = 1.0;
        } else {
            divisor[year] = d;
        }
    }
    for (auto &[key, score] : out.scores)
        score /= divisor.at(key.second);
    out.normalization_history.push_back(mode == YearNormMode::PerYearStd ? "year_std"
                                                                         : "year_top10_mean");
    return out;
}

VenueScoreModel znorm_clip(const VenueScoreModel &model, double clip_sigmas, bool per_year) {
    VenueScoreModel out = model;

    auto normalize_group = [&](const std::vector<std::pair<int, int>> &keys,
                               const std::string &label) {
        if (keys.size() < 2)
            throw DataError("znorm_clip: degenerate group (" + label + ")");
        double mean = 0.0;
        for (const auto &k : keys)
            mean += out.scores.at(k);
        mean /= static_cast<double>(keys.size());
        std::vector<double> vals;
        vals.reserve(keys.size());
        for (const auto &k : keys)
            vals.push_back(out.scores.at(k));
        double sd = population_std(vals, mean);
        if (sd <= 0.0)
            throw DataError("znorm_clip: zero variance group (" + label + ")");
        for (const auto &k : keys) {
            double z = (out.scores.at(k) - mean) / sd;
            out.scores[k] = std::clamp(z, -clip_sigmas, clip_sigmas);
        }
    };

    if (per_year) {
        std::map<int, std::vector<std::pair<int, int>>> groups;
        for (const auto &[key, _] : out.scores)
            groups[key.second].push_back(key);
        for (const auto &[year, keys] : groups)
            normalize_group(keys, "year " + std::to_string(year));
    } else {
        std::vector<std::pair<int, int>> keys;
        keys.reserve(out.scores.size());
        for (const auto &[key, _] : out.scores)
            keys.push_back(key);
        normalize_group(keys, "all years");
    }
    out.normalization_history.push_back(per_year ? "znorm_clip_per_year" : "znorm_clip_global");
    return out;
}

CombinedModel combine(const std::vector<VenueScoreModel> &models) {
    if (models.empty())
        throw DataError("combine: no models given");
    CombinedModel result;
    result.members = models;
    VenueScoreModel &c = result.combined;
    c.source = "combined";
    c.year_range = models.front().year_range;
    c.year_range.first = models.front().year_range.first;

    std::map<std::pair<int, int>, std::pair<double, int>> acc;
    for (const auto &m : models) {
        c.year_range.first = std::min(c.year_range.first, m.year_range.first);
        c.year_range.second = std::max(c.year_range.second, m.year_range.second);
        for (const auto &[key, score] : m.scores) {
            auto &slot = acc[key];
            slot.first += score;
            slot.second += 1;
        }
    }
    for (const auto &[key, slot] : acc)
        c.scores[key] = slot.first / static_cast<double>(slot.second);
    c.normalization_history.push_back("combined_mean_of_" + std::to_string(models.size()));
    return result;
}

AuthorScore score_author(const VenueScoreModel &model, const Corpus &corpus, int author_id,
                         CreditModel credit, std::optional<std::pair<int, int>> year_range) {
    if (author_id < 0 || author_id >= static_cast<int>(corpus.authors.size()))
        throw DataError("score_author: unknown author id " + std::to_string(author_id));
    AuthorScore result;
    for (int paper_id : corpus.papers_of_author(author_id)) {
        const Paper &p = corpus.papers[static_cast<std::size_t>(paper_id)];
        if (year_range && (p.year < year_range->first || p.year > year_range->second))
            continue;
        const auto weights = author_credit(credit, static_cast<int>(p.author_ids.size()));
        for (std::size_t pos = 0; pos < p.author_ids.size(); ++pos) {
            if (p.author_ids[pos] != author_id)
                continue;
            double v = weights[pos] * model.at(p.venue_id, p.year);
            result.total += v;
            result.per_year[p.year] += v;
        }
    }
    return result;
}

std::vector<InstitutionScore> score_institution(const VenueScoreModel &model, const Corpus &corpus,
                                                const std::map<std::string, std::string> &name_to_university,
                                                CreditModel credit, double match_threshold,
                                                bool per_capita,
                                                std::vector<std::string> *warnings) {
    std::vector<std::string> names;
    names.reserve(name_to_university.size());
    for (const auto &[name, _] : name_to_university)
        names.push_back(name);
    auto matches = match_names(names, corpus, match_threshold);

    std::map<std::string, InstitutionScore> by_university;
    for (const auto &[name, university] : name_to_university)
        by_university[university].university = university;

    std::map<std::string, std::set<int>> rosters;
    for (const auto &[name, university] : name_to_university) {
        const NameMatch &m = matches.at(name);
        if (!m.matched()) {
            if (warnings)
                warnings->push_back("unmatched faculty name: " + name);
            continue;
        }
        rosters[university].insert(m.author_id);
    }

    for (auto &[university, score] : by_university) {
        auto it = rosters.find(university);
        if (it == rosters.end() || it->second.empty()) {
            if (warnings)
                warnings->push_back("empty roster for " + university);
            continue;
        }
        for (int author : it->second) {
            score.total += score_author(model, corpus, author, credit).total;
            score.papers += static_cast<long long>(corpus.papers_of_author(author).size());
            ++score.faculty;
        }
        double denom = per_capita ? static_cast<double>(score.faculty)
                                  : std::sqrt(static_cast<double>(score.faculty));
        score.size_normed = score.total / denom;
    }

    std::vector<InstitutionScore> out;
    out.reserve(by_university.size());
    for (auto &[_, score] : by_university)
        out.push_back(std::move(score));
    std::sort(out.begin(), out.end(), [](const InstitutionScore &a, const InstitutionScore &b) {
        return a.total > b.total;
    });
    return out;
}

std::map<int, AgingCurvePoint> aging_curve(const Corpus &corpus, const VenueScoreModel &model,
                                           CreditModel credit) {
    std::map<int, AgingCurvePoint> curve;
    for (const auto &author : corpus.authors) {
        const auto &papers = corpus.papers_of_author(author.author_id);
        if (papers.empty())
            continue;
        int first_year = corpus.papers[static_cast<std::size_t>(papers.front())].year;
        for (int paper_id : papers)
            first_year = std::min(first_year, corpus.papers[static_cast<std::size_t>(paper_id)].year);

        std::map<int, double> per_career_year; // only career years with papers
        for (int paper_id : papers) {
            const Paper &p = corpus.papers[static_cast<std::size_t>(paper_id)];
            const auto weights = author_credit(credit, static_cast<int>(p.author_ids.size()));
            for (std::size_t pos = 0; pos < p.author_ids.size(); ++pos) {
                if (p.author_ids[pos] != author.author_id)
                    continue;
                per_career_year[p.year - first_year] +=
                    weights[pos] * model.at(p.venue_id, p.year);
            }
        }
        for (const auto &[career_year, value] : per_career_year) {
            auto &point = curve[career_year];
            point.mean_score += value;
            ++point.authors;
        }
    }
    for (auto &[_, point] : curve)
        point.mean_score /= static_cast<double>(point.authors);
    return curve;
}

namespace {

SparseMatrix incidence_to_sparse(const std::vector<std::vector<int>> &incidence_rows,
                                 int n_authors) {
    SparseMatrix m;
    m.n_rows = static_cast<int>(incidence_rows.size());
    m.n_cols = n_authors;
    m.bias_col = -1;
    m.row_ptr.push_back(0);
    for (const auto &authors : incidence_rows) {
        std::vector<int> sorted = authors;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        for (int a : sorted) {
            if (a < 0 || a >= n_authors)
                throw DataError("credit_split: author index out of range");
            m.col.push_back(a);
            m.val.push_back(1.0);
        }
        m.row_ptr.push_back(m.col.size());
    }
    return m;
}

} // namespace

std::vector<double> credit_split(const std::vector<std::vector<int>> &incidence_rows,
                                 int n_authors, const std::vector<double> &paper_scores,
                                 double lambda) {
    if (incidence_rows.size() != paper_scores.size())
        throw DataError("credit_split: score count does not match paper count");
    const int n_papers = static_cast<int>(incidence_rows.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n_papers, n_authors);
    for (int p = 0; p < n_papers; ++p)
        for (int a : incidence_rows[static_cast<std::size_t>(p)]) {
            if (a < 0 || a >= n_authors)
                throw DataError("credit_split: author index out of range");
            A(p, a) = 1.0;
        }
    Eigen::VectorXd b(n_papers);
    for (int p = 0; p < n_papers; ++p)
        b(p) = paper_scores[static_cast<std::size_t>(p)];
    Eigen::VectorXd x = ridge_closed_form(A, b, lambda);
    return std::vector<double>(x.data(), x.data() + x.size());
}

std::vector<double> credit_split(const std::vector<std::vector<int>> &incidence_rows,
                                 int n_authors, const std::vector<double> &paper_scores,
                                 double lambda, const SolverConfig &config) {
    SparseMatrix m = incidence_to_sparse(incidence_rows, n_authors);
    SolverConfig cfg = config;
    cfg.lambda = lambda;
    return sgd_fit(m, paper_scores, Loss::squared(), cfg).weights;
}

void write_venue_scores(const VenueScoreModel &model, const Corpus &corpus, std::ostream &out) {
    out << "venue\tyear\tscore\n";
    for (const auto &[key, score] : model.scores) {
        out << corpus.venues[static_cast<std::size_t>(key.first)].canonical_name << '\t'
            << key.second << '\t';
        std::ostringstream val;
        val.precision(17);
        val << score;
        out << val.str() << '\n';
    }
}

VenueScoreModel load_venue_scores(std::istream &in, const Corpus &corpus, std::string source_tag) {
    VenueScoreModel model;
    model.source = std::move(source_tag);
    model.year_range = corpus.year_range;
    std::string line;
    long lineno = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (first) {
            first = false;
            if (line.rfind("venue\t", 0) == 0)
                continue; // header
        }
        auto fields = split(line, '\t');
        if (fields.size() != 3)
            throw DataError("venue scores line " + std::to_string(lineno) +
                            ": expected venue<TAB>year<TAB>score");
        int venue = corpus.venue_id_by_name(fields[0]);
        if (venue < 0)
            throw DataError("venue scores line " + std::to_string(lineno) + ": unknown venue '" +
                            fields[0] + "'");
        try {
            model.scores[{venue, std::stoi(fields[1])}] = std::stod(fields[2]);
        } catch (const std::exception &) {
            throw DataError("venue scores line " + std::to_string(lineno) + ": bad year or score");
        }
    }
    return model;
}

} // namespace venuescore
