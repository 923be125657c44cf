#include "venuescore/baselines.hpp"

#include "venuescore/errors.hpp"
#include "venuescore/io_util.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

namespace venuescore {

// ---------------------------------------------------------------------------
// score tables
// ---------------------------------------------------------------------------

ScoreTable load_score_table(std::istream &in, std::string tag) {
    ScoreTable table;
    table.tag = std::move(tag);
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        std::string s = trim(line);
        if (s.empty() || s[0] == '#')
            continue;
        // name<sep>score, split from the right so names keep separators
        char sep = s.find('\t') != std::string::npos ? '\t' : ',';
        auto pos = s.rfind(sep);
        if (pos == std::string::npos)
            throw DataError("score table line " + std::to_string(lineno) +
                            ": expected 'name,score'");
        std::string name = trim(s.substr(0, pos));
        try {
            table.scores[name] = std::stod(s.substr(pos + 1));
        } catch (const std::exception &) {
            if (lineno == 1)
                continue; // header line
            throw DataError("score table line " + std::to_string(lineno) + ": bad score");
        }
    }
    return table;
}

void write_score_table(const ScoreTable &table, std::ostream &out) {
    out.precision(17);
    for (const auto &[name, score] : table.scores)
        out << name << '\t' << score << '\n';
}

// ---------------------------------------------------------------------------
// correlation coefficients
// ---------------------------------------------------------------------------

namespace {

void check_pair(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw DataError("correlation: vectors differ in length");
    if (x.size() < 2)
        throw DataError("correlation: need at least two observations");
}

bool constant(std::span<const double> v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] != v[0])
            return false;
    return true;
}

// Average ranks, ties share the mid-rank.
std::vector<double> midranks(std::span<const double> v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[idx[j + 1]] == v[idx[i]])
            ++j;
        double rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k)
            ranks[idx[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

// Strict inversions (later element smaller) counted by merge sort.
long long count_inversions(std::vector<double> &v) {
    const std::size_t n = v.size();
    std::vector<double> tmp(n);
    long long inversions = 0;
    for (std::size_t width = 1; width < n; width *= 2) {
        for (std::size_t lo = 0; lo + width < n; lo += 2 * width) {
            std::size_t mid = lo + width;
            std::size_t hi = std::min(lo + 2 * width, n);
            std::size_t a = lo, b = mid, out = lo;
            while (a < mid && b < hi) {
                if (v[b] < v[a]) {
                    inversions += static_cast<long long>(mid - a);
                    tmp[out++] = v[b++];
                } else {
                    tmp[out++] = v[a++];
                }
            }
            while (a < mid)
                tmp[out++] = v[a++];
            while (b < hi)
                tmp[out++] = v[b++];
            std::copy(tmp.begin() + static_cast<long>(lo), tmp.begin() + static_cast<long>(hi),
                      v.begin() + static_cast<long>(lo));
        }
    }
    return inversions;
}

long long tie_pairs(std::vector<double> sorted_values) {
    long long pairs = 0;
    std::size_t i = 0;
    const std::size_t n = sorted_values.size();
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && sorted_values[j + 1] == sorted_values[i])
            ++j;
        long long t = static_cast<long long>(j - i + 1);
        pairs += t * (t - 1) / 2;
        i = j + 1;
    }
    return pairs;
}

} // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
    check_pair(x, y);
    if (constant(x) || constant(y))
        throw DataError("pearson: undefined for zero-variance input");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman(std::span<const double> x, std::span<const double> y) {
    check_pair(x, y);
    if (constant(x) || constant(y))
        throw DataError("spearman: undefined for zero-variance input");
    auto rx = midranks(x);
    auto ry = midranks(y);
    return pearson(rx, ry);
}

double kendall(std::span<const double> x, std::span<const double> y) {
    check_pair(x, y);
    if (constant(x) || constant(y))
        throw DataError("kendall: undefined for zero-variance input");

    const std::size_t n = x.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (x[a] != x[b])
            return x[a] < x[b];
        return y[a] < y[b];
    });

    long long xtie = 0, ntie = 0;
    std::vector<double> y_in_x_order(n);
    {
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && x[idx[j + 1]] == x[idx[i]])
                ++j;
            long long t = static_cast<long long>(j - i + 1);
            xtie += t * (t - 1) / 2;
            // joint ties inside the x group
            std::size_t a = i;
            while (a <= j) {
                std::size_t b = a;
                while (b + 1 <= j && y[idx[b + 1]] == y[idx[a]])
                    ++b;
                long long u = static_cast<long long>(b - a + 1);
                ntie += u * (u - 1) / 2;
                a = b + 1;
            }
            i = j + 1;
        }
        for (std::size_t k = 0; k < n; ++k)
            y_in_x_order[k] = y[idx[k]];
    }

    std::vector<double> y_sorted(y.begin(), y.end());
    std::sort(y_sorted.begin(), y_sorted.end());
    long long ytie = tie_pairs(y_sorted);

    long long discordant = count_inversions(y_in_x_order);
    long long total = static_cast<long long>(n) * (static_cast<long long>(n) - 1) / 2;
    long long con_minus_dis = total - xtie - ytie + ntie - 2 * discordant;

    double denom = std::sqrt(static_cast<double>(total - xtie)) *
                   std::sqrt(static_cast<double>(total - ytie));
    return std::clamp(static_cast<double>(con_minus_dis) / denom, -1.0, 1.0);
}

// ---------------------------------------------------------------------------
// PageRank
// ---------------------------------------------------------------------------

std::vector<double> pagerank(const std::vector<std::vector<std::pair<int, double>>> &adjacency,
                             const PageRankConfig &config) {
    if (config.damping <= 0.0 || config.damping >= 1.0)
        throw ConfigError("pagerank: damping must be in (0,1)");
    const std::size_t n = adjacency.size();
    if (n == 0)
        throw DataError("pagerank: empty graph");

    std::vector<double> degree(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (const auto &[_, w] : adjacency[i])
            degree[i] += config.binarize ? 1.0 : w;

    const double d = config.damping;
    const double n_inv = 1.0 / static_cast<double>(n);
    std::vector<double> x(n, n_inv), next(n, 0.0);

    double residual = 0.0;
    for (int iter = 0; iter < config.max_iter; ++iter) {
        double dangling = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (degree[i] == 0.0)
                dangling += x[i];
        std::fill(next.begin(), next.end(), (1.0 - d) * n_inv + d * dangling * n_inv);
        for (std::size_t j = 0; j < n; ++j) {
            if (degree[j] == 0.0)
                continue;
            const double share = d * x[j] / degree[j];
            for (const auto &[i, w] : adjacency[j])
                next[static_cast<std::size_t>(i)] += share * (config.binarize ? 1.0 : w);
        }
        residual = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            residual += std::abs(next[i] - x[i]);
        x.swap(next);
        if (residual < config.tol)
            return x;
    }
    std::ostringstream msg;
    msg << "pagerank: no convergence after " << config.max_iter << " iterations (L1 residual "
        << residual << ")";
    throw DataError(msg.str());
}

namespace {

std::vector<std::vector<std::pair<int, double>>>
to_adjacency(const std::map<std::pair<int, int>, double> &edges, std::size_t n) {
    std::vector<std::vector<std::pair<int, double>>> adj(n);
    for (const auto &[edge, w] : edges) {
        adj[static_cast<std::size_t>(edge.first)].emplace_back(edge.second, w);
        adj[static_cast<std::size_t>(edge.second)].emplace_back(edge.first, w);
    }
    return adj;
}

} // namespace

ScoreTable pagerank_authors(const Corpus &corpus, const PageRankConfig &config) {
    if (corpus.papers.empty())
        throw DataError("pagerank_authors: corpus has no papers");
    std::map<std::pair<int, int>, double> edges;
    for (const auto &p : corpus.papers) {
        for (std::size_t i = 0; i < p.author_ids.size(); ++i) {
            for (std::size_t j = i + 1; j < p.author_ids.size(); ++j) {
                int a = p.author_ids[i], b = p.author_ids[j];
                if (a == b)
                    continue; // no self-loops
                if (a > b)
                    std::swap(a, b);
                edges[{a, b}] += 1.0;
            }
        }
    }
    auto scores = pagerank(to_adjacency(edges, corpus.authors.size()), config);
    ScoreTable table;
    table.tag = "pagerank_authors";
    for (const auto &a : corpus.authors)
        table.scores[a.canonical_name] = scores[static_cast<std::size_t>(a.author_id)];
    return table;
}

ScoreTable pagerank_venues(const Corpus &corpus, const PageRankConfig &config) {
    if (corpus.papers.empty())
        throw DataError("pagerank_venues: corpus has no papers");
    // venues per author, then one edge unit per shared author
    std::vector<std::set<int>> venues_of(corpus.authors.size());
    for (const auto &p : corpus.papers)
        for (int a : p.author_ids)
            venues_of[static_cast<std::size_t>(a)].insert(p.venue_id);

    std::map<std::pair<int, int>, double> edges;
    for (const auto &venues : venues_of) {
        for (auto it = venues.begin(); it != venues.end(); ++it) {
            auto jt = it;
            for (++jt; jt != venues.end(); ++jt)
                edges[{*it, *jt}] += 1.0;
        }
    }
    auto scores = pagerank(to_adjacency(edges, corpus.venues.size()), config);
    ScoreTable table;
    table.tag = "pagerank_venues";
    for (const auto &v : corpus.venues)
        table.scores[v.canonical_name] = scores[static_cast<std::size_t>(v.venue_id)];
    return table;
}

// ---------------------------------------------------------------------------
// cross-table correlation
// ---------------------------------------------------------------------------

std::string CorrelationReport::to_json() const {
    nlohmann::json j;
    j["tables"] = tags;
    j["aligned_count"] = aligned_count;
    j["spearman"] = spearman_m;
    j["kendall"] = kendall_m;
    j["pearson"] = pearson_m;
    nlohmann::json d = nlohmann::json::object();
    for (const auto &[tag, names] : dropped)
        d[tag] = names;
    j["dropped"] = d;
    return j.dump(2);
}

CorrelationReport correlate(const std::vector<ScoreTable> &tables, const Alignment &alignment) {
    if (tables.size() < 2)
        throw DataError("correlate: need at least two tables");

    // Normalized-name -> score per table; the first table defines entities.
    std::vector<std::map<std::string, double>> by_norm(tables.size());
    std::vector<std::map<std::string, std::string>> norm_to_orig(tables.size());
    for (std::size_t t = 0; t < tables.size(); ++t) {
        for (const auto &[name, score] : tables[t].scores) {
            std::string n = normalize_name(name);
            if (by_norm[t].try_emplace(n, score).second)
                norm_to_orig[t].emplace(n, name);
        }
    }

    // Fuzzy tier: remap later tables' unmatched keys onto the first table's.
    if (alignment.kind == Alignment::Kind::Fuzzy) {
        std::vector<std::string> anchors;
        for (const auto &[n, _] : by_norm[0])
            anchors.push_back(n);
        for (std::size_t t = 1; t < tables.size(); ++t) {
            std::map<std::string, double> remapped;
            std::map<std::string, std::string> remapped_orig;
            for (const auto &[n, score] : by_norm[t]) {
                if (by_norm[0].count(n)) {
                    remapped.try_emplace(n, score);
                    remapped_orig.try_emplace(n, norm_to_orig[t].at(n));
                    continue;
                }
                double best = -1.0;
                std::string best_anchor;
                for (const auto &anchor : anchors) {
                    double sim = name_similarity(n, anchor);
                    if (sim > best) {
                        best = sim;
                        best_anchor = anchor;
                    }
                }
                if (best >= alignment.threshold) {
                    remapped.try_emplace(best_anchor, score);
                    remapped_orig.try_emplace(best_anchor, norm_to_orig[t].at(n));
                } else {
                    remapped.try_emplace(n, score);
                    remapped_orig.try_emplace(n, norm_to_orig[t].at(n));
                }
            }
            by_norm[t] = std::move(remapped);
            norm_to_orig[t] = std::move(remapped_orig);
        }
    }

    std::vector<std::string> entities;
    for (const auto &[n, _] : by_norm[0]) {
        bool everywhere = true;
        for (std::size_t t = 1; t < tables.size() && everywhere; ++t)
            everywhere = by_norm[t].count(n) > 0;
        if (everywhere)
            entities.push_back(n);
    }
    if (entities.size() < 2)
        throw DataError("correlate: fewer than two aligned entities");

    CorrelationReport report;
    report.aligned_count = static_cast<int>(entities.size());
    for (const auto &t : tables)
        report.tags.push_back(t.tag);

    std::set<std::string> kept(entities.begin(), entities.end());
    for (std::size_t t = 0; t < tables.size(); ++t) {
        auto &lost = report.dropped[tables[t].tag];
        for (const auto &[n, orig] : norm_to_orig[t])
            if (!kept.count(n))
                lost.push_back(orig);
    }

    std::vector<std::vector<double>> columns(tables.size());
    for (std::size_t t = 0; t < tables.size(); ++t) {
        columns[t].reserve(entities.size());
        for (const auto &e : entities)
            columns[t].push_back(by_norm[t].at(e));
    }

    const std::size_t k = tables.size();
    report.spearman_m.assign(k, std::vector<double>(k, 1.0));
    report.kendall_m.assign(k, std::vector<double>(k, 1.0));
    report.pearson_m.assign(k, std::vector<double>(k, 1.0));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            double s = spearman(columns[i], columns[j]);
            double kd = kendall(columns[i], columns[j]);
            double p = pearson(columns[i], columns[j]);
            report.spearman_m[i][j] = report.spearman_m[j][i] = s;
            report.kendall_m[i][j] = report.kendall_m[j][i] = kd;
            report.pearson_m[i][j] = report.pearson_m[j][i] = p;
        }
    }
    return report;
}

} // namespace venuescore
