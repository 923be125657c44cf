#include "venuescore/targets.hpp"

#include "venuescore/errors.hpp"
#include "venuescore/io_util.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <set>

namespace venuescore {

// ---------------------------------------------------------------------------
// faculty status
// ---------------------------------------------------------------------------

namespace {

// "name,university" with tab preferred when present; universities may
// themselves contain commas, so the split is on the first separator.
std::pair<std::string, std::string> split_name_value(const std::string &line) {
    auto tab = line.find('\t');
    auto pos = (tab != std::string::npos) ? tab : line.find(',');
    if (pos == std::string::npos)
        return {trim(line), std::string()};
    return {trim(line.substr(0, pos)), trim(line.substr(pos + 1))};
}

} // namespace

std::map<std::string, std::string> parse_affiliations(std::istream &in) {
    std::map<std::string, std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        std::string s = trim(line);
        if (s.empty() || s[0] == '#')
            continue;
        auto [name, university] = split_name_value(s);
        if (name.empty() || university.empty())
            throw DataError("affiliations: expected 'name,university', got '" + s + "'");
        out[name] = university;
    }
    return out;
}

std::vector<std::string> parse_ranking(std::istream &in) {
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        std::string s = trim(line);
        if (s.empty() || s[0] == '#')
            continue;
        out.push_back(std::move(s));
    }
    return out;
}

FacultyLabels build_faculty_labels(const Corpus &corpus, std::istream &affiliations,
                                   std::istream &ranking, int k, double match_threshold,
                                   UnmatchedReport *report) {
    if (k < 1)
        throw ConfigError("faculty top-k must be >= 1");
    auto affiliation_map = parse_affiliations(affiliations);
    auto ranked = parse_ranking(ranking);

    std::map<std::string, int> rank_of;
    for (std::size_t i = 0; i < ranked.size(); ++i)
        rank_of.emplace(ranked[i], static_cast<int>(i) + 1);

    std::vector<std::string> names;
    names.reserve(affiliation_map.size());
    for (const auto &[name, _] : affiliation_map)
        names.push_back(name);
    auto matches = match_names(names, corpus, match_threshold);

    FacultyLabels labels;
    labels.k = k;
    labels.labels.assign(corpus.authors.size(), -1);

    UnmatchedReport local;
    UnmatchedReport &rep = report ? *report : local;
    for (const auto &[name, university] : affiliation_map) {
        const NameMatch &m = matches.at(name);
        if (!m.matched()) {
            rep.unmatched.push_back(name);
            continue;
        }
        ++rep.matched_count;
        auto it = rank_of.find(university);
        if (it != rank_of.end() && it->second <= k)
            labels.labels[static_cast<std::size_t>(m.author_id)] = 1;
    }
    return labels;
}

TargetSet faculty_target_set(const FacultyLabels &labels) {
    TargetSet set;
    set.loss = Loss::modified_huber();
    set.rows.reserve(labels.labels.size());
    set.b.reserve(labels.labels.size());
    for (std::size_t a = 0; a < labels.labels.size(); ++a) {
        RowSpec row;
        row.author_id = static_cast<int>(a);
        set.rows.push_back(row);
        set.b.push_back(static_cast<double>(labels.labels[a]));
    }
    return set;
}

// ---------------------------------------------------------------------------
// NSF awards
// ---------------------------------------------------------------------------

std::string NsfStats::to_json() const {
    nlohmann::json j;
    j["kept"] = kept;
    j["dropped"] = {{"amount", dropped_amount},
                    {"negative", dropped_negative},
                    {"nonfinite", dropped_nonfinite},
                    {"unmatched", dropped_unmatched}};
    return j.dump(2);
}

double soft_clip(double x, double cap) {
    if (cap <= 0.0)
        throw std::domain_error("soft_clip: cap must be positive");
    if (x <= cap)
        return x;
    return cap * (1.0 + std::log(x / cap));
}

std::map<int, double> load_cpi(std::istream &in) {
    std::map<int, double> out;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        std::string s = trim(line);
        if (s.empty() || s[0] == '#')
            continue;
        auto [year_s, factor_s] = split_name_value(s);
        try {
            out[std::stoi(year_s)] = std::stod(factor_s);
        } catch (const std::exception &) {
            throw DataError("cpi line " + std::to_string(lineno) + ": expected 'year,factor'");
        }
    }
    return out;
}

std::pair<double, double> znorm_vector(std::vector<double> &values) {
    if (values.size() < 2)
        throw DataError("znorm: need at least two values");
    double mean = 0.0;
    for (double v : values)
        mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values)
        var += (v - mean) * (v - mean);
    var /= static_cast<double>(values.size());
    double sd = std::sqrt(var);
    if (sd <= 0.0)
        throw DataError("znorm: zero variance");
    for (double &v : values)
        v = (v - mean) / sd;
    return {mean, sd};
}

namespace {

struct RawAward {
    std::string id;
    double amount = 0.0;
    int year = 0;
    std::vector<std::string> pi_names;
};

std::vector<RawAward> parse_awards(std::istream &in) {
    std::vector<RawAward> out;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty())
            continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(s);
        } catch (const nlohmann::json::exception &e) {
            throw DataError("awards line " + std::to_string(lineno) + ": " + e.what());
        }
        RawAward a;
        try {
            if (j.at("id").is_string())
                a.id = j.at("id").get<std::string>();
            else
                a.id = std::to_string(j.at("id").get<long long>());
            a.amount = j.at("amount").is_null()
                           ? std::numeric_limits<double>::quiet_NaN()
                           : j.at("amount").get<double>();
            a.year = j.at("year").get<int>();
            for (const auto &n : j.at("pi_names"))
                a.pi_names.push_back(n.get<std::string>());
        } catch (const nlohmann::json::exception &e) {
            throw DataError("awards line " + std::to_string(lineno) + ": " + e.what());
        }
        out.push_back(std::move(a));
    }
    return out;
}

} // namespace

NsfBuildResult build_nsf_targets(const Corpus &corpus, std::istream &awards_jsonl,
                                 const std::map<int, double> &cpi, const NsfConfig &config) {
    auto awards = parse_awards(awards_jsonl);

    std::set<std::string> all_names;
    for (const auto &a : awards)
        for (const auto &n : a.pi_names)
            all_names.insert(n);
    auto matches = match_names(std::vector<std::string>(all_names.begin(), all_names.end()),
                               corpus, config.match_threshold);

    NsfBuildResult result;
    for (const auto &award : awards) {
        if (!std::isfinite(award.amount)) {
            ++result.stats.dropped_nonfinite;
            continue;
        }
        if (award.amount < 0.0) {
            ++result.stats.dropped_negative;
            continue;
        }
        auto it = cpi.find(award.year);
        if (it == cpi.end())
            throw ConfigError("cpi table has no factor for year " + std::to_string(award.year));
        double adjusted = award.amount * it->second;
        if (adjusted < config.min_amount) {
            ++result.stats.dropped_amount;
            continue;
        }
        if (award.pi_names.empty()) {
            ++result.stats.dropped_unmatched;
            continue;
        }

        std::set<int> matched_ids;
        for (const auto &name : award.pi_names) {
            const NameMatch &m = matches.at(name);
            if (m.matched())
                matched_ids.insert(m.author_id);
        }
        double fraction =
            static_cast<double>(matched_ids.size()) / static_cast<double>(award.pi_names.size());
        if (fraction < config.min_matched_fraction) {
            ++result.stats.dropped_unmatched;
            continue;
        }

        GrantTarget g;
        g.award_id = award.id;
        g.year = award.year;
        g.pi_author_ids.assign(matched_ids.begin(), matched_ids.end());
        g.matched_fraction = fraction;
        g.amount_adjusted = adjusted;
        g.amount_clipped = soft_clip(adjusted, config.clip_cap);
        result.grants.push_back(std::move(g));
        ++result.stats.kept;
    }

    // Deterministic row order: by award id, then author id.
    std::sort(result.grants.begin(), result.grants.end(),
              [](const GrantTarget &a, const GrantTarget &b) { return a.award_id < b.award_id; });

    TargetSet &set = result.targets;
    set.loss = Loss::huber();
    set.log_amounts = config.log_amounts;
    set.marginal = config.marginal;

    std::map<int, double> cumulative; // per PI, for marginal mode

    // Marginal mode accumulates by award year, so order by year first there.
    std::vector<const GrantTarget *> order;
    order.reserve(result.grants.size());
    for (const auto &g : result.grants)
        order.push_back(&g);
    if (config.marginal)
        std::stable_sort(order.begin(), order.end(), [](const GrantTarget *a, const GrantTarget *b) {
            return a->year < b->year;
        });

    for (const GrantTarget *g : order) {
        double value = g->amount_clipped;
        if (config.log_amounts)
            value = std::log(value);
        value *= g->matched_fraction;
        double per_pi = value / static_cast<double>(g->pi_author_ids.size());
        for (int author : g->pi_author_ids) {
            RowSpec row;
            row.author_id = author;
            row.year_cutoff = g->year; // papers up to and including the award year
            set.rows.push_back(row);
            if (config.marginal) {
                cumulative[author] += per_pi;
                set.b.push_back(cumulative[author]);
            } else {
                set.b.push_back(per_pi);
            }
        }
    }

    if (config.znorm && set.b.size() >= 2) {
        znorm_vector(set.b);
        set.znormed = true;
    }
    return result;
}

// ---------------------------------------------------------------------------
// salaries
// ---------------------------------------------------------------------------

std::vector<SalaryRow> parse_salary_rows(std::istream &in) {
    std::vector<SalaryRow> out;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        std::string s = trim(line);
        if (s.empty() || s[0] == '#')
            continue;
        // name,salary,year; split from the right so names keep commas
        char sep = s.find('\t') != std::string::npos ? '\t' : ',';
        auto last = s.rfind(sep);
        auto mid = last == std::string::npos ? std::string::npos : s.rfind(sep, last - 1);
        if (mid == std::string::npos)
            throw DataError("salary line " + std::to_string(lineno) +
                            ": expected 'name,salary,year'");
        SalaryRow row;
        row.name = trim(s.substr(0, mid));
        try {
            row.salary = std::stod(s.substr(mid + 1, last - mid - 1));
            row.year = std::stoi(s.substr(last + 1));
        } catch (const std::exception &) {
            throw DataError("salary line " + std::to_string(lineno) +
                            ": bad salary or year field");
        }
        out.push_back(std::move(row));
    }
    return out;
}

SalaryBuildResult build_salary_targets(const Corpus &corpus, const std::vector<SalaryRow> &rows,
                                       const SalaryConfig &config) {
    std::map<std::string, double> max_salary;
    for (const auto &row : rows) {
        auto [it, fresh] = max_salary.try_emplace(row.name, row.salary);
        if (!fresh)
            it->second = std::max(it->second, row.salary);
    }

    SalaryBuildResult result;
    std::vector<std::string> names;
    for (const auto &[name, salary] : max_salary) {
        if (salary < config.min_salary || salary > config.max_salary) {
            ++result.dropped_range;
            continue;
        }
        names.push_back(name);
    }
    auto matches = match_names(names, corpus, config.match_threshold);

    // The salary regression is left unnormalized; z-scoring it is known to
    // produce a poor fit.
    TargetSet &set = result.targets;
    set.loss = Loss::huber();

    std::map<int, double> by_author; // dedupe: several names may hit one author
    for (const auto &name : names) {
        const NameMatch &m = matches.at(name);
        if (!m.matched()) {
            result.report.unmatched.push_back(name);
            continue;
        }
        ++result.report.matched_count;
        auto [it, fresh] = by_author.try_emplace(m.author_id, max_salary.at(name));
        if (!fresh)
            it->second = std::max(it->second, max_salary.at(name));
    }
    for (const auto &[author, salary] : by_author) {
        result.retained.push_back({author, salary});
        RowSpec row;
        row.author_id = author;
        set.rows.push_back(row);
        set.b.push_back(salary);
    }
    return result;
}

} // namespace venuescore
