#include "venuescore/cluster.hpp"

#include "venuescore/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>

namespace venuescore {

// ---------------------------------------------------------------------------
// count matrix
// ---------------------------------------------------------------------------

VenueAuthorCounts build_count_matrix(const Corpus &corpus, int since_year, int min_universities,
                                     const std::map<std::string, std::string> &name_to_university,
                                     double match_threshold) {
    std::vector<std::string> names;
    names.reserve(name_to_university.size());
    for (const auto &[name, _] : name_to_university)
        names.push_back(name);
    auto matches = match_names(names, corpus, match_threshold);

    std::map<int, std::string> university_of; // author id -> university
    for (const auto &[name, university] : name_to_university) {
        const NameMatch &m = matches.at(name);
        if (m.matched())
            university_of.emplace(m.author_id, university);
    }

    std::map<int, std::set<std::string>> venue_universities;
    for (const auto &p : corpus.papers) {
        if (p.year < since_year)
            continue;
        for (int a : p.author_ids) {
            auto it = university_of.find(a);
            if (it != university_of.end())
                venue_universities[p.venue_id].insert(it->second);
        }
    }

    std::set<int> retained;
    for (const auto &[venue, universities] : venue_universities)
        if (static_cast<int>(universities.size()) >= min_universities)
            retained.insert(venue);
    if (retained.empty())
        throw DataError("count matrix is empty; lower min_universities (" +
                        std::to_string(min_universities) + ") or since_year (" +
                        std::to_string(since_year) + ")");

    std::map<int, std::map<int, int>> venue_author_counts;
    std::set<int> vocab;
    for (const auto &p : corpus.papers) {
        if (p.year < since_year || !retained.count(p.venue_id))
            continue;
        for (int a : p.author_ids) {
            ++venue_author_counts[p.venue_id][a];
            vocab.insert(a);
        }
    }

    VenueAuthorCounts out;
    out.since_year = since_year;
    out.min_universities = min_universities;
    out.venue_ids.assign(retained.begin(), retained.end());
    out.author_ids.assign(vocab.begin(), vocab.end());
    std::map<int, int> author_index;
    for (std::size_t i = 0; i < out.author_ids.size(); ++i)
        author_index[out.author_ids[i]] = static_cast<int>(i);

    out.counts.resize(out.venue_ids.size());
    for (std::size_t v = 0; v < out.venue_ids.size(); ++v) {
        auto it = venue_author_counts.find(out.venue_ids[v]);
        if (it == venue_author_counts.end())
            continue;
        for (const auto &[author, count] : it->second)
            out.counts[v].emplace_back(author_index.at(author), count);
    }
    return out;
}

// ---------------------------------------------------------------------------
// LDA via collapsed Gibbs sampling
// ---------------------------------------------------------------------------

TopicVectors lda_fit(const VenueAuthorCounts &counts, const LdaConfig &config) {
    if (config.d < 2)
        throw ConfigError("lda: need at least 2 topics");
    if (counts.venue_ids.empty())
        throw DataError("lda: empty count matrix");

    const int K = config.d;
    const int V = static_cast<int>(counts.author_ids.size());
    const int D = static_cast<int>(counts.venue_ids.size());
    const double alpha = config.alpha < 0.0 ? 50.0 / static_cast<double>(K) : config.alpha;
    const double beta = config.beta;

    struct Token {
        int doc;
        int word;
    };
    std::vector<Token> tokens;
    for (int doc = 0; doc < D; ++doc)
        for (const auto &[word, count] : counts.counts[static_cast<std::size_t>(doc)])
            for (int c = 0; c < count; ++c)
                tokens.push_back({doc, word});

    std::vector<int> z(tokens.size());
    std::vector<std::vector<int>> n_dk(static_cast<std::size_t>(D), std::vector<int>(K, 0));
    std::vector<std::vector<int>> n_kw(static_cast<std::size_t>(K), std::vector<int>(V, 0));
    std::vector<int> n_k(static_cast<std::size_t>(K), 0);
    std::vector<long long> doc_len(static_cast<std::size_t>(D), 0);

    std::mt19937_64 rng(config.seed);
    std::uniform_int_distribution<int> topic_dist(0, K - 1);
    for (std::size_t t = 0; t < tokens.size(); ++t) {
        int k = topic_dist(rng);
        z[t] = k;
        ++n_dk[static_cast<std::size_t>(tokens[t].doc)][static_cast<std::size_t>(k)];
        ++n_kw[static_cast<std::size_t>(k)][static_cast<std::size_t>(tokens[t].word)];
        ++n_k[static_cast<std::size_t>(k)];
        ++doc_len[static_cast<std::size_t>(tokens[t].doc)];
    }

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> p(static_cast<std::size_t>(K));
    const double v_beta = static_cast<double>(V) * beta;

    for (int sweep = 0; sweep < config.iterations; ++sweep) {
        for (std::size_t t = 0; t < tokens.size(); ++t) {
            const int doc = tokens[t].doc, word = tokens[t].word;
            int k = z[t];
            --n_dk[static_cast<std::size_t>(doc)][static_cast<std::size_t>(k)];
            --n_kw[static_cast<std::size_t>(k)][static_cast<std::size_t>(word)];
            --n_k[static_cast<std::size_t>(k)];

            double total = 0.0;
            for (int j = 0; j < K; ++j) {
                double w = (n_dk[static_cast<std::size_t>(doc)][static_cast<std::size_t>(j)] +
                            alpha) *
                           (n_kw[static_cast<std::size_t>(j)][static_cast<std::size_t>(word)] +
                            beta) /
                           (n_k[static_cast<std::size_t>(j)] + v_beta);
                total += w;
                p[static_cast<std::size_t>(j)] = total;
            }
            double u = unit(rng) * total;
            k = static_cast<int>(std::lower_bound(p.begin(), p.end(), u) - p.begin());
            if (k >= K)
                k = K - 1;

            z[t] = k;
            ++n_dk[static_cast<std::size_t>(doc)][static_cast<std::size_t>(k)];
            ++n_kw[static_cast<std::size_t>(k)][static_cast<std::size_t>(word)];
            ++n_k[static_cast<std::size_t>(k)];
        }
    }

    TopicVectors out;
    out.venue_ids = counts.venue_ids;
    out.d = K;
    out.vectors.resize(static_cast<std::size_t>(D));
    for (int doc = 0; doc < D; ++doc) {
        auto &vec = out.vectors[static_cast<std::size_t>(doc)];
        vec.resize(static_cast<std::size_t>(K));
        if (doc_len[static_cast<std::size_t>(doc)] == 0) {
            std::fill(vec.begin(), vec.end(), 1.0 / static_cast<double>(K));
            out.warnings.push_back("venue id " + std::to_string(counts.venue_ids[static_cast<std::size_t>(doc)]) +
                                   " has no papers in the window; uniform vector");
            continue;
        }
        double denom = static_cast<double>(doc_len[static_cast<std::size_t>(doc)]) +
                       static_cast<double>(K) * alpha;
        for (int k = 0; k < K; ++k)
            vec[static_cast<std::size_t>(k)] =
                (n_dk[static_cast<std::size_t>(doc)][static_cast<std::size_t>(k)] + alpha) / denom;
    }
    return out;
}

// ---------------------------------------------------------------------------
// k-means and silhouette
// ---------------------------------------------------------------------------

namespace {

double sq_dist(const std::vector<double> &a, const std::vector<double> &b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

struct LloydResult {
    std::vector<int> assignment;
    std::vector<std::vector<double>> centroids;
    double inertia = std::numeric_limits<double>::infinity();
    std::vector<double> inertia_history;
};

LloydResult lloyd_run(const std::vector<std::vector<double>> &points, int k,
                      std::mt19937_64 &rng) {
    const std::size_t n = points.size();
    const std::size_t dim = points[0].size();

    // k-means++ seeding
    std::vector<std::vector<double>> centroids;
    centroids.reserve(static_cast<std::size_t>(k));
    std::uniform_int_distribution<std::size_t> first(0, n - 1);
    centroids.push_back(points[first(rng)]);
    std::vector<double> d2(n);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    while (centroids.size() < static_cast<std::size_t>(k)) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto &c : centroids)
                best = std::min(best, sq_dist(points[i], c));
            d2[i] = best;
            total += best;
        }
        if (total <= 0.0) {
            centroids.push_back(points[first(rng)]);
            continue;
        }
        double u = unit(rng) * total;
        std::size_t pick = 0;
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += d2[i];
            if (acc >= u) {
                pick = i;
                break;
            }
        }
        centroids.push_back(points[pick]);
    }

    LloydResult result;
    result.assignment.assign(n, -1);
    for (int iter = 0; iter < 100; ++iter) {
        bool changed = false;
        double inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                double d = sq_dist(points[i], centroids[static_cast<std::size_t>(c)]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (result.assignment[i] != best) {
                result.assignment[i] = best;
                changed = true;
            }
            inertia += best_d;
        }
        result.inertia_history.push_back(inertia);
        result.inertia = inertia;
        if (!changed)
            break;

        std::vector<std::vector<double>> sums(static_cast<std::size_t>(k),
                                              std::vector<double>(dim, 0.0));
        std::vector<int> sizes(static_cast<std::size_t>(k), 0);
        for (std::size_t i = 0; i < n; ++i) {
            auto &s = sums[static_cast<std::size_t>(result.assignment[i])];
            for (std::size_t d = 0; d < dim; ++d)
                s[d] += points[i][d];
            ++sizes[static_cast<std::size_t>(result.assignment[i])];
        }
        for (int c = 0; c < k; ++c) {
            if (sizes[static_cast<std::size_t>(c)] == 0) {
                // Re-seed an empty cluster with the point farthest from its centroid.
                std::size_t far = 0;
                double far_d = -1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    double d = sq_dist(points[i],
                                       centroids[static_cast<std::size_t>(result.assignment[i])]);
                    if (d > far_d) {
                        far_d = d;
                        far = i;
                    }
                }
                centroids[static_cast<std::size_t>(c)] = points[far];
                continue;
            }
            for (std::size_t d = 0; d < dim; ++d)
                centroids[static_cast<std::size_t>(c)][d] =
                    sums[static_cast<std::size_t>(c)][d] /
                    static_cast<double>(sizes[static_cast<std::size_t>(c)]);
        }
    }
    result.centroids = std::move(centroids);
    return result;
}

} // namespace

double silhouette_score(const std::vector<std::vector<double>> &vectors,
                        const std::vector<int> &assignment, int k) {
    const std::size_t n = vectors.size();
    if (assignment.size() != n)
        throw DataError("silhouette: assignment size mismatch");
    std::vector<int> sizes(static_cast<std::size_t>(k), 0);
    for (int a : assignment) {
        if (a < 0 || a >= k)
            throw DataError("silhouette: assignment out of range");
        ++sizes[static_cast<std::size_t>(a)];
    }

    double total = 0.0;
    std::vector<double> cluster_dist(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(cluster_dist.begin(), cluster_dist.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j)
                continue;
            cluster_dist[static_cast<std::size_t>(assignment[j])] +=
                std::sqrt(sq_dist(vectors[i], vectors[j]));
        }
        const int own = assignment[i];
        if (sizes[static_cast<std::size_t>(own)] <= 1)
            continue; // singleton: contributes 0
        double a = cluster_dist[static_cast<std::size_t>(own)] /
                   static_cast<double>(sizes[static_cast<std::size_t>(own)] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (int c = 0; c < k; ++c) {
            if (c == own || sizes[static_cast<std::size_t>(c)] == 0)
                continue;
            b = std::min(b, cluster_dist[static_cast<std::size_t>(c)] /
                                static_cast<double>(sizes[static_cast<std::size_t>(c)]));
        }
        if (!std::isfinite(b))
            continue; // no other non-empty cluster
        double s = (b - a) / std::max(a, b);
        if (a == 0.0 && b == 0.0)
            s = 0.0;
        total += s;
    }
    return total / static_cast<double>(n);
}

Clustering kmeans(const std::vector<std::vector<double>> &vectors, int k, int restarts,
                  std::uint64_t seed) {
    if (k < 2)
        throw ConfigError("kmeans: k must be >= 2");
    if (static_cast<std::size_t>(k) >= vectors.size())
        throw DataError("kmeans: k must be smaller than the number of points");
    if (restarts < 1)
        throw ConfigError("kmeans: restarts must be >= 1");

    std::mt19937_64 seeder(seed);
    LloydResult best;
    for (int r = 0; r < restarts; ++r) {
        std::mt19937_64 rng(seeder());
        LloydResult run = lloyd_run(vectors, k, rng);
        if (run.inertia < best.inertia)
            best = std::move(run);
    }

    Clustering out;
    out.assignment = std::move(best.assignment);
    out.centroids = std::move(best.centroids);
    out.k = k;
    out.inertia = best.inertia;
    out.inertia_history = std::move(best.inertia_history);
    out.silhouette = silhouette_score(vectors, out.assignment, k);
    return out;
}

std::map<int, double> silhouette_sweep(const std::vector<std::vector<double>> &vectors, int k_min,
                                       int k_max, int restarts, std::uint64_t seed) {
    if (k_min < 2 || k_max < k_min)
        throw ConfigError("silhouette_sweep: need 2 <= k_min <= k_max");
    std::map<int, double> out;
    for (int k = k_min; k <= k_max && static_cast<std::size_t>(k) < vectors.size(); ++k)
        out[k] = kmeans(vectors, k, restarts, seed + static_cast<std::uint64_t>(k)).silhouette;
    if (out.empty())
        throw DataError("silhouette_sweep: no feasible k in range");
    return out;
}

// ---------------------------------------------------------------------------
// fingerprints
// ---------------------------------------------------------------------------

std::vector<double> fingerprint(const Corpus &corpus, const VenueAuthorCounts &counts,
                                const TopicVectors &topics, const std::vector<int> &author_ids,
                                std::vector<std::string> *warnings) {
    std::map<int, std::size_t> venue_row;
    for (std::size_t i = 0; i < topics.venue_ids.size(); ++i)
        venue_row[topics.venue_ids[i]] = i;

    std::set<int> entity(author_ids.begin(), author_ids.end());
    for (int a : author_ids)
        if (a < 0 || a >= static_cast<int>(corpus.authors.size()))
            throw DataError("fingerprint: unknown author id " + std::to_string(a));

    std::map<std::size_t, double> venue_weight; // topic row -> paper count
    double total = 0.0;
    for (int a : entity) {
        for (int paper_id : corpus.papers_of_author(a)) {
            const Paper &p = corpus.papers[static_cast<std::size_t>(paper_id)];
            if (p.year < counts.since_year)
                continue;
            auto it = venue_row.find(p.venue_id);
            if (it == venue_row.end())
                continue;
            venue_weight[it->second] += 1.0;
            total += 1.0;
        }
    }

    std::vector<double> out(static_cast<std::size_t>(topics.d), 0.0);
    if (total <= 0.0) {
        if (warnings)
            warnings->push_back("entity has no papers in retained venues; zero fingerprint");
        return out;
    }
    for (const auto &[row, w] : venue_weight)
        for (std::size_t k = 0; k < out.size(); ++k)
            out[k] += w * topics.vectors[row][k];
    double sum = 0.0;
    for (double v : out)
        sum += v;
    for (double &v : out)
        v /= sum;
    return out;
}

} // namespace venuescore
