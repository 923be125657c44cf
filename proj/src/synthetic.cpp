#include "venuescore/synthetic.hpp"

#include "venuescore/errors.hpp"
#include "venuescore/io_util.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

namespace venuescore {

namespace {

std::string venue_name(int i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "Venue V%04d", i);
    return buf;
}

std::string author_name(int i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "Author A%05d", i);
    return buf;
}

std::string university_name(int rank) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "Univ U%03d", rank);
    return buf;
}

} // namespace

SyntheticData generate_synthetic(const SyntheticSpec &spec) {
    if (spec.venues < 1 || spec.authors < 1 || spec.papers_per_author < 1 ||
        spec.home_venues < 1 || spec.last_year < spec.first_year)
        throw ConfigError("generate_synthetic: sizes must be positive and years ordered");
    if (spec.home_venues > spec.venues)
        throw ConfigError("generate_synthetic: home_venues exceeds venue count");

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> venue_pick(0, spec.venues - 1);
    std::uniform_int_distribution<int> year_pick(spec.first_year, spec.last_year);
    std::uniform_int_distribution<int> page_pick(6, 30);
    std::uniform_int_distribution<int> author_pick(0, spec.authors - 1);

    SyntheticData data;
    std::vector<double> raw_scores(static_cast<std::size_t>(spec.venues));
    for (double &s : raw_scores)
        s = spec.score_sigma * normal(rng);

    // Home venue pools give authors distinctive publication mixes.
    std::vector<std::vector<int>> home(static_cast<std::size_t>(spec.authors));
    for (auto &pool : home) {
        std::set<int> chosen;
        while (static_cast<int>(chosen.size()) < spec.home_venues)
            chosen.insert(venue_pick(rng));
        pool.assign(chosen.begin(), chosen.end());
    }

    struct RawPaper {
        int venue;
        int year;
        int pages; // -1 unknown
        std::vector<int> authors;
    };
    std::vector<RawPaper> papers;
    papers.reserve(static_cast<std::size_t>(spec.authors) * spec.papers_per_author);
    for (int a = 0; a < spec.authors; ++a) {
        for (int p = 0; p < spec.papers_per_author; ++p) {
            RawPaper paper;
            const auto &pool = home[static_cast<std::size_t>(a)];
            paper.venue = pool[static_cast<std::size_t>(
                std::uniform_int_distribution<int>(0, static_cast<int>(pool.size()) - 1)(rng))];
            paper.year = year_pick(rng);
            paper.pages = unit(rng) < spec.unknown_page_prob ? -1 : page_pick(rng);
            paper.authors.push_back(a);
            if (unit(rng) < spec.coauthor_prob) {
                int extras = 1 + (unit(rng) < 0.5 ? 1 : 0);
                for (int e = 0; e < extras; ++e) {
                    int other = author_pick(rng);
                    if (std::find(paper.authors.begin(), paper.authors.end(), other) ==
                        paper.authors.end())
                        paper.authors.push_back(other);
                }
            }
            papers.push_back(std::move(paper));
        }
    }

    // Corpus through the builder; export/ingest round-trips to the same ids.
    FilterConfig filter;
    filter.min_year = spec.first_year;
    filter.max_year = spec.last_year;
    CorpusBuilder builder(filter);
    for (const auto &p : papers) {
        std::vector<std::string> names;
        names.reserve(p.authors.size());
        for (int a : p.authors)
            names.push_back(author_name(a));
        builder.add_paper(venue_name(p.venue), VenueKind::Conference, p.year, p.pages, names);
    }
    data.corpus = builder.build();

    // Corpus ids follow first appearance, not synthetic indices; remap truth
    // onto corpus ids so downstream comparisons are direct.
    data.true_venue_scores.assign(data.corpus.venues.size(), 0.0);
    for (int v = 0; v < spec.venues; ++v) {
        int cid = data.corpus.venue_id_by_name(venue_name(v));
        if (cid >= 0)
            data.true_venue_scores[static_cast<std::size_t>(cid)] =
                raw_scores[static_cast<std::size_t>(v)];
    }

    data.true_author_values.assign(data.corpus.authors.size(), 0.0);
    for (const auto &p : data.corpus.papers) {
        const auto weights = author_credit(spec.credit, static_cast<int>(p.author_ids.size()));
        for (std::size_t pos = 0; pos < p.author_ids.size(); ++pos)
            data.true_author_values[static_cast<std::size_t>(p.author_ids[pos])] +=
                weights[pos] * data.true_venue_scores[static_cast<std::size_t>(p.venue_id)];
    }

    // Faculty labels: threshold at the (1 - faculty_fraction) quantile, then flip.
    std::vector<double> sorted_values = data.true_author_values;
    std::sort(sorted_values.begin(), sorted_values.end());
    const std::size_t cut_index = static_cast<std::size_t>(
        std::min<double>(static_cast<double>(sorted_values.size() - 1),
                         std::floor((1.0 - spec.faculty_fraction) *
                                    static_cast<double>(sorted_values.size()))));
    const double threshold = sorted_values[cut_index];

    data.faculty_labels.resize(data.corpus.authors.size());
    for (std::size_t a = 0; a < data.corpus.authors.size(); ++a) {
        int label = data.true_author_values[a] >= threshold ? 1 : -1;
        if (unit(rng) < spec.label_flip)
            label = -label;
        data.faculty_labels[a] = label;
    }

    // --- file payloads -----------------------------------------------------

    {
        std::ostringstream out;
        export_normalized(data.corpus, out);
        data.corpus_tsv = out.str();
    }

    {
        // Positives live at top-k universities, round robin.
        std::ostringstream aff, rank;
        int next_univ = 0;
        for (std::size_t a = 0; a < data.corpus.authors.size(); ++a) {
            if (data.faculty_labels[a] != 1)
                continue;
            aff << data.corpus.authors[a].canonical_name << ","
                << university_name(1 + (next_univ % spec.top_k)) << "\n";
            ++next_univ;
        }
        for (int r = 1; r <= spec.ranked_universities; ++r)
            rank << university_name(r) << "\n";
        data.affiliations_csv = aff.str();
        data.ranking_txt = rank.str();
    }

    {
        std::ostringstream awards, cpi;
        awards.precision(2);
        awards << std::fixed;
        // Standardize values for amount scaling.
        double mean = 0.0, var = 0.0;
        for (double v : data.true_author_values)
            mean += v;
        mean /= static_cast<double>(data.true_author_values.size());
        for (double v : data.true_author_values)
            var += (v - mean) * (v - mean);
        var /= static_cast<double>(data.true_author_values.size());
        const double sd = std::sqrt(std::max(var, 1e-12));

        long award_id = 100000;
        for (std::size_t a = 0; a < data.corpus.authors.size(); ++a) {
            if (unit(rng) >= spec.grant_prob)
                continue;
            int n_awards = 1 + (unit(rng) < 0.3 ? 1 : 0);
            for (int g = 0; g < n_awards; ++g) {
                double z = (data.true_author_values[a] - mean) / sd;
                double amount =
                    std::exp(11.5 + 0.8 * z + spec.grant_noise * normal(rng));
                int year = year_pick(rng);
                nlohmann::json j;
                j["id"] = "NSF" + std::to_string(award_id++);
                j["amount"] = amount;
                j["year"] = year;
                nlohmann::json pis = nlohmann::json::array();
                pis.push_back(data.corpus.authors[a].canonical_name);
                if (unit(rng) < 0.3)
                    pis.push_back(author_name(author_pick(rng)));
                j["pi_names"] = pis;
                awards << j.dump() << "\n";
            }
        }
        for (int y = spec.first_year; y <= spec.last_year; ++y)
            cpi << y << "," << 1.0 + 0.02 * (spec.last_year - y) << "\n";
        data.awards_jsonl = awards.str();
        data.cpi_csv = cpi.str();
    }

    {
        std::ostringstream sal;
        sal.precision(0);
        sal << std::fixed;
        double mean = 0.0, var = 0.0;
        for (double v : data.true_author_values)
            mean += v;
        mean /= static_cast<double>(data.true_author_values.size());
        for (double v : data.true_author_values)
            var += (v - mean) * (v - mean);
        var /= static_cast<double>(data.true_author_values.size());
        const double sd = std::sqrt(std::max(var, 1e-12));
        for (std::size_t a = 0; a < data.corpus.authors.size(); ++a) {
            if (unit(rng) >= spec.salary_prob)
                continue;
            double z = (data.true_author_values[a] - mean) / sd;
            for (int year = 2015; year <= 2017; ++year) {
                double salary = 250000.0 + 90000.0 * z +
                                spec.salary_noise * 100000.0 * normal(rng);
                sal << data.corpus.authors[a].canonical_name << "," << salary << "," << year
                    << "\n";
            }
        }
        data.salaries_csv = sal.str();
    }

    {
        std::ostringstream tv, ta;
        tv.precision(17);
        ta.precision(17);
        for (const auto &v : data.corpus.venues)
            tv << v.canonical_name << '\t'
               << data.true_venue_scores[static_cast<std::size_t>(v.venue_id)] << '\n';
        for (const auto &a : data.corpus.authors)
            ta << a.canonical_name << '\t'
               << data.true_author_values[static_cast<std::size_t>(a.author_id)] << '\n';
        data.truth_venues_tsv = tv.str();
        data.truth_authors_tsv = ta.str();
    }

    {
        nlohmann::json j;
        j["venues"] = spec.venues;
        j["authors"] = spec.authors;
        j["papers_per_author"] = spec.papers_per_author;
        j["years"] = {spec.first_year, spec.last_year};
        j["home_venues"] = spec.home_venues;
        j["coauthor_prob"] = spec.coauthor_prob;
        j["score_sigma"] = spec.score_sigma;
        j["faculty_fraction"] = spec.faculty_fraction;
        j["label_flip"] = spec.label_flip;
        j["top_k"] = spec.top_k;
        j["grant_prob"] = spec.grant_prob;
        j["grant_noise"] = spec.grant_noise;
        j["salary_prob"] = spec.salary_prob;
        j["salary_noise"] = spec.salary_noise;
        j["credit_model"] = static_cast<int>(spec.credit);
        j["seed"] = spec.seed;
        j["paper_count"] = data.corpus.papers.size();
        data.truth_json = j.dump(2);
    }

    return data;
}

std::vector<std::filesystem::path> write_synthetic(const SyntheticData &data,
                                                   const std::filesystem::path &dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::pair<std::string, const std::string *>> files = {
        {"corpus.tsv", &data.corpus_tsv},
        {"affiliations.csv", &data.affiliations_csv},
        {"ranking.txt", &data.ranking_txt},
        {"awards.jsonl", &data.awards_jsonl},
        {"cpi.csv", &data.cpi_csv},
        {"salaries.csv", &data.salaries_csv},
        {"truth_venues.tsv", &data.truth_venues_tsv},
        {"truth_authors.tsv", &data.truth_authors_tsv},
        {"truth.json", &data.truth_json},
    };
    std::vector<std::filesystem::path> written;
    for (const auto &[name, content] : files) {
        auto path = dir / name;
        atomic_write_text(path, *content);
        written.push_back(path);
    }
    return written;
}

} // namespace venuescore
