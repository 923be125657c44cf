// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Oracles live in oracles.hpp and stay independent of the library
// paths they check.

#include "venuescore/baselines.hpp"
#include "venuescore/cluster.hpp"
#include "venuescore/corpus.hpp"
#include "venuescore/design.hpp"
#include "venuescore/scores.hpp"
#include "venuescore/solver.hpp"
#include "venuescore/synthetic.hpp"
#include "venuescore/targets.hpp"

#include "oracles.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <vector>

using namespace venuescore;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Check {
    Outcome &outcome;

    void require(bool ok, const std::string &what) {
        if (!ok) {
            outcome.pass = false;
            if (!outcome.detail.empty())
                outcome.detail += "; ";
            outcome.detail += what;
        }
    }

    void note(const std::string &text) {
        if (outcome.pass && outcome.detail.empty())
            outcome.detail = text;
    }
};

// ---------------------------------------------------------------------------

Outcome planted_model_recovery() {
    Outcome out;
    Check c{out};
    auto start = std::chrono::steady_clock::now();

    SyntheticSpec spec; // 200 venues, 5000 authors, 8 papers/author, 10% flips
    spec.seed = 42;
    SyntheticData data = generate_synthetic(spec);
    c.require(data.corpus.papers.size() >= 38000 && data.corpus.papers.size() <= 42000,
              "paper count outside ~40k");

    TargetSet targets;
    targets.loss = Loss::modified_huber();
    for (std::size_t a = 0; a < data.faculty_labels.size(); ++a) {
        RowSpec row;
        row.author_id = static_cast<int>(a);
        targets.rows.push_back(row);
        targets.b.push_back(static_cast<double>(data.faculty_labels[a]));
    }

    DesignMatrix design = build_design(data.corpus, CreditModel::EqualSplit,
                                       TemporalScheme::block(50), SizeNorm::off(), targets.rows);
    SolverConfig cfg;
    cfg.lambda = 0.03;
    cfg.epochs = 20;
    cfg.seed = 7;
    FitResult fit = sgd_fit(design.matrix, targets.b, targets.loss, cfg);

    std::vector<double> learned, truth;
    for (std::size_t v = 0; v < data.corpus.venues.size(); ++v) {
        learned.push_back(fit.weights[design.columns.column_of(static_cast<int>(v), 0)]);
        truth.push_back(data.true_venue_scores[v]);
    }
    double rho = spearman(learned, truth);
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    c.require(rho >= 0.8, "spearman " + std::to_string(rho) + " < 0.8");
    c.require(wall < 60.0, "wall time " + std::to_string(wall) + "s >= 60s");
    std::ostringstream note;
    note << "spearman " << rho << ", wall " << wall << "s";
    c.note(note.str());
    return out;
}

Outcome solver_oracle_equivalence() {
    Outcome out;
    Check c{out};

    std::mt19937 rng(12);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> mag(0.5, 1.5);
    const int n = 50, p = 20;
    Eigen::MatrixXd A(n, p);
    Eigen::VectorXd x_true(p), b(n);
    for (int j = 0; j < p; ++j)
        x_true(j) = (j % 2 == 0 ? 1.0 : -1.0) * mag(rng);
    SparseMatrix sparse;
    sparse.n_rows = n;
    sparse.n_cols = p;
    sparse.row_ptr.push_back(0);
    std::vector<double> target(n);
    for (int i = 0; i < n; ++i) {
        double dot = 0.0;
        for (int j = 0; j < p; ++j) {
            A(i, j) = normal(rng);
            dot += A(i, j) * x_true(j);
            sparse.col.push_back(j);
            sparse.val.push_back(A(i, j));
        }
        sparse.row_ptr.push_back(sparse.col.size());
        b(i) = dot + 0.01 * normal(rng);
        target[static_cast<std::size_t>(i)] = b(i);
    }

    const double lambda = 0.05;
    Eigen::VectorXd exact = ridge_closed_form(A, b, lambda);

    // closed-form residual against the normal equations
    Eigen::MatrixXd M =
        A.transpose() * A + static_cast<double>(n) * lambda * Eigen::MatrixXd::Identity(p, p);
    double residual = (M * exact - A.transpose() * b).lpNorm<Eigen::Infinity>();
    c.require(residual <= 1e-10, "normal-equation residual " + std::to_string(residual));

    SolverConfig cfg;
    cfg.lambda = lambda;
    cfg.epochs = 30000;
    cfg.learning_rate = 0.01;
    cfg.seed = 99;
    cfg.early_stop_rel = 0.0;
    FitResult fit = sgd_fit(sparse, target, Loss::squared(), cfg);

    double worst = 0.0;
    for (int j = 0; j < p; ++j)
        worst = std::max(worst,
                         std::abs(fit.weights[static_cast<std::size_t>(j)] - exact(j)) /
                             std::abs(exact(j)));
    c.require(worst <= 1e-2, "max relative coefficient error " + std::to_string(worst));
    std::ostringstream note;
    note << "max rel err " << worst << ", residual " << residual;
    c.note(note.str());
    return out;
}

Outcome loss_correctness() {
    Outcome out;
    Check c{out};

    // Huber continuity at |r| = delta
    for (double delta : {0.5, 1.0, 2.5}) {
        for (double sign : {1.0, -1.0}) {
            double r = sign * delta;
            double inside = 0.5 * r * r;
            double outside = delta * std::abs(r) - 0.5 * delta * delta;
            c.require(std::abs(inside - outside) <= 1e-12, "huber value kink mismatch");
            double g = loss_grad(Loss::huber(delta), 0.0, r);
            c.require(g == -r && g == -delta * sign, "huber derivative kink mismatch");
        }
    }

    // modified Huber: both branches give exactly 4 at margin -1
    c.require(loss_value(Loss::modified_huber(), -1.0, 1.0) == 4.0, "branch value at margin -1");
    c.require(-4.0 * (1.0 * -1.0) == 4.0 &&
                  std::pow(1.0 - (1.0 * -1.0), 2.0) == 4.0,
              "branch formulas disagree at margin -1");

    // gradients against central finite differences, away from kinks
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> pick(-3.0, 3.0);
    const double h = 1e-6;
    int checked = 0;
    for (int i = 0; i < 500; ++i) {
        double y_hat = pick(rng);
        double y = pick(rng);
        double label = (i % 2 == 0) ? 1.0 : -1.0;
        auto fd_ok = [&](const Loss &loss, double target) {
            double fd =
                (loss_value(loss, y_hat + h, target) - loss_value(loss, y_hat - h, target)) /
                (2.0 * h);
            double g = loss_grad(loss, y_hat, target);
            double scale = std::max(std::abs(fd), 1e-9);
            return std::abs(g - fd) / scale <= 1e-6;
        };
        if (std::abs(std::abs(y - y_hat) - 1.0) > 1e-3) {
            c.require(fd_ok(Loss::huber(1.0), y), "huber gradient vs FD");
            ++checked;
        }
        c.require(fd_ok(Loss::squared(), y), "squared gradient vs FD");
        double margin = label * y_hat;
        if (std::abs(margin + 1.0) > 1e-3 && std::abs(margin - 1.0) > 1e-3)
            c.require(fd_ok(Loss::modified_huber(), label), "modified huber gradient vs FD");
        c.require(fd_ok(Loss::logistic(), label), "logistic gradient vs FD");
    }
    c.note("kinks C1 to 1e-12, " + std::to_string(checked) + " FD spot checks");
    return out;
}

Outcome splat_kernel_criterion() {
    Outcome out;
    Check c{out};

    SplatKernel k = splat_kernel(4.5, 0.05, 2000, {1970, 2019});
    c.require(k.offsets.size() == 9, "support size " + std::to_string(k.offsets.size()));
    for (int i = 0; i < static_cast<int>(k.offsets.size()); ++i)
        c.require(k.offsets[static_cast<std::size_t>(i)] == i - 4, "support not -4..4");
    double sum = 0.0;
    for (double w : k.weights)
        sum += w;
    c.require(std::abs(sum - 1.0) <= 1e-12, "kernel sum deviates " + std::to_string(sum - 1.0));

    // oracle: the normalized discrete Gaussian straddles the clip at |d| = 5
    double total = 0.0;
    for (int d = -200; d <= 200; ++d)
        total += std::exp(-0.5 * d * d / (4.5 * 4.5));
    c.require(std::exp(-0.5 * 16.0 / 20.25) / total >= 0.05, "offset 4 fell below clip");
    c.require(std::exp(-0.5 * 25.0 / 20.25) / total < 0.05, "offset 5 survived clip");

    // dense hand-built mirror of a 3-paper corpus, bitwise equal entries
    FilterConfig fcfg;
    fcfg.min_year = 2000;
    fcfg.max_year = 2009;
    std::istringstream corpus_text("VA\t2004\t8\tA One|B Two\n"
                                   "VB\t2000\t8\tA One\n"
                                   "VC\t2009\t8\tB Two|C Three|A One\n");
    Corpus corpus = ingest_normalized(corpus_text, fcfg);
    DesignMatrix design = build_design(corpus, CreditModel::Harmonic,
                                       TemporalScheme::splat(4.5, 0.05), SizeNorm::on(1.5849));

    const int years = 10;
    std::vector<std::vector<double>> dense(
        corpus.authors.size(), std::vector<double>(corpus.venues.size() * years, 0.0));
    for (const auto &p : corpus.papers) {
        auto credit = author_credit(CreditModel::Harmonic, static_cast<int>(p.author_ids.size()));
        double size = size_multiplier(corpus.venue_year_size(p.venue_id, p.year), 1.5849);
        SplatKernel kp = splat_kernel(4.5, 0.05, p.year, corpus.year_range);
        for (std::size_t pos = 0; pos < p.author_ids.size(); ++pos)
            for (std::size_t i = 0; i < kp.offsets.size(); ++i)
                dense[p.author_ids[pos]]
                     [p.venue_id * years + (p.year + kp.offsets[i] - 2000)] +=
                    credit[pos] * size * kp.weights[i];
    }

    for (std::size_t a = 0; a < corpus.authors.size(); ++a) {
        const SparseMatrix &m = design.matrix;
        std::size_t nonzero = 0;
        for (std::size_t i = m.row_ptr[a]; i < m.row_ptr[a + 1]; ++i) {
            if (m.col[i] == m.bias_col)
                continue;
            ++nonzero;
            c.require(m.val[i] == dense[a][static_cast<std::size_t>(m.col[i])],
                      "matrix entry differs from dense mirror");
        }
        std::size_t expected = 0;
        for (double v : dense[a])
            if (v != 0.0)
                ++expected;
        c.require(nonzero == expected, "nonzero pattern differs from dense mirror");
    }

    // mass conservation: per-(paper, author) mass equals credit * size
    for (const auto &p : corpus.papers) {
        auto credit = author_credit(CreditModel::Harmonic, static_cast<int>(p.author_ids.size()));
        double size = size_multiplier(corpus.venue_year_size(p.venue_id, p.year), 1.5849);
        for (std::size_t pos = 0; pos < p.author_ids.size(); ++pos) {
            double mass = 0.0;
            for (int y = 0; y < years; ++y)
                mass += dense[p.author_ids[pos]][p.venue_id * years + y];
            c.require(std::abs(mass - credit[pos] * size) <= 1e-12,
                      "splatting changed a paper's total mass");
        }
    }
    c.note("support {-4..4}, sums 1, dense mirror bitwise equal");
    return out;
}

Outcome credit_model_criterion() {
    Outcome out;
    Check c{out};
    for (int n = 1; n <= 15; ++n) {
        for (CreditModel m : {CreditModel::EqualSplit, CreditModel::Harmonic,
                              CreditModel::HarmonicLastEqualsFirst}) {
            auto w = author_credit(m, n);
            double sum = 0.0;
            for (double x : w)
                sum += x;
            c.require(std::abs(sum - 1.0) <= 1e-12, "normalized credit sum deviates");
        }
        auto w = author_credit(CreditModel::FullCredit, n);
        double sum = 0.0;
        for (double x : w)
            sum += x;
        c.require(std::abs(sum - static_cast<double>(n)) <= 1e-12, "full credit sum deviates");
    }
    auto h3 = author_credit(CreditModel::Harmonic, 3);
    c.require(std::abs(h3[0] - 6.0 / 11.0) <= 1e-12 && std::abs(h3[1] - 3.0 / 11.0) <= 1e-12 &&
                  std::abs(h3[2] - 2.0 / 11.0) <= 1e-12,
              "harmonic n=3 differs from (6/11, 3/11, 2/11)");
    auto h4 = author_credit(CreditModel::HarmonicLastEqualsFirst, 3);
    c.require(std::abs(h4[0] - 0.4) <= 1e-12 && std::abs(h4[1] - 0.2) <= 1e-12 &&
                  std::abs(h4[2] - 0.4) <= 1e-12,
              "last-equals-first n=3 differs from (0.4, 0.2, 0.4)");
    c.note("sum rules to 1e-12, pinned n=3 values");
    return out;
}

Outcome correlation_criterion() {
    Outcome out;
    Check c{out};

    std::mt19937 rng(123);
    int compared = 0;
    while (compared < 100) {
        std::size_t n = 2 + rng() % 199;
        std::uniform_int_distribution<int> values(0, 12);
        std::vector<double> x(n), y(n);
        bool cx = true, cy = true;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = static_cast<double>(values(rng));
            y[i] = static_cast<double>(values(rng));
            cx = cx && x[i] == x[0];
            cy = cy && y[i] == y[0];
        }
        if (cx || cy)
            continue; // zero variance is an error by contract
        ++compared;
        c.require(kendall(x, y) == oracle::kendall_bruteforce(x, y),
                  "kendall differs from the O(n^2) oracle");
        c.require(std::abs(spearman(x, y) - oracle::spearman_bruteforce(x, y)) <= 1e-12,
                  "spearman differs from the O(n^2) oracle");
    }

    // monotone-transform invariance, exact
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> x(60), y(60), ey(60);
    for (std::size_t i = 0; i < 60; ++i) {
        x[i] = normal(rng);
        y[i] = normal(rng);
        ey[i] = std::exp(y[i]);
    }
    c.require(spearman(x, y) == spearman(x, ey), "spearman not transform-invariant");
    c.require(kendall(x, y) == kendall(x, ey), "kendall not transform-invariant");

    std::vector<double> a = {1, 2, 3}, b = {1, 3, 2};
    c.require(std::abs(kendall(a, b) - 1.0 / 3.0) <= 1e-15, "kendall(1,2,3 ; 1,3,2) != 1/3");
    c.note(std::to_string(compared) + " random tied vectors vs oracle, exact");
    return out;
}

Outcome pagerank_criterion() {
    Outcome out;
    Check c{out};
    PageRankConfig cfg;
    cfg.tol = 1e-14;
    cfg.max_iter = 5000;

    std::mt19937 rng(17);
    for (int trial = 0; trial < 3; ++trial) {
        const int n = 50;
        std::vector<std::vector<double>> dense(n, std::vector<double>(n, 0.0));
        std::vector<std::vector<std::pair<int, double>>> adj(n);
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (rng() % 4 == 0) {
                    double w = 1.0 + static_cast<double>(rng() % 5);
                    dense[i][j] = dense[j][i] = w;
                    adj[i].emplace_back(j, w);
                    adj[j].emplace_back(i, w);
                }
            }
        }
        auto sparse = pagerank(adj, cfg);
        auto expected = oracle::pagerank_dense(dense, cfg.damping, cfg.tol, cfg.max_iter);
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            c.require(std::abs(sparse[i] - expected[i]) <= 1e-10,
                      "entry differs from dense power iteration");
            c.require(sparse[i] >= 0.0, "negative pagerank entry");
            sum += sparse[i];
        }
        c.require(std::abs(sum - 1.0) <= 1e-12, "pagerank does not sum to 1");
    }

    std::istringstream two("VA\t2005\t8\tA One|B Two\n");
    Corpus corpus = ingest_normalized(two);
    ScoreTable t = pagerank_authors(corpus, cfg);
    c.require(std::abs(t.scores.at("A One") - 0.5) <= 1e-12 &&
                  std::abs(t.scores.at("B Two") - 0.5) <= 1e-12,
              "two-author case is not (0.5, 0.5)");
    c.note("3 random 50-node graphs vs dense oracle at 1e-10");
    return out;
}

Outcome normalization_criterion() {
    Outcome out;
    Check c{out};
    std::mt19937 rng(21);
    std::normal_distribution<double> normal(1.0, 3.0);

    VenueScoreModel model;
    model.year_range = {2000, 2004};
    for (int v = 0; v < 25; ++v)
        for (int y = 2000; y <= 2004; ++y)
            model.scores[{v, y}] = normal(rng);

    VenueScoreModel top10 = year_normalize(model, YearNormMode::Top10Mean);
    for (int y = 2000; y <= 2004; ++y) {
        std::vector<double> vals;
        for (int v = 0; v < 25; ++v)
            vals.push_back(top10.at(v, y));
        std::sort(vals.rbegin(), vals.rend());
        double mean = 0.0;
        for (int i = 0; i < 10; ++i)
            mean += vals[i];
        mean /= 10.0;
        c.require(std::abs(mean - 1.0) <= 1e-9, "top-10 mean deviates from 1");
    }

    VenueScoreModel z = znorm_clip(model);
    for (int y = 2000; y <= 2004; ++y) {
        double mean = 0.0, var = 0.0;
        for (int v = 0; v < 25; ++v)
            mean += z.at(v, y);
        mean /= 25.0;
        for (int v = 0; v < 25; ++v)
            var += (z.at(v, y) - mean) * (z.at(v, y) - mean);
        var /= 25.0;
        c.require(std::abs(mean) <= 1e-9, "znorm group mean deviates from 0");
        c.require(std::abs(var - 1.0) <= 1e-9, "znorm group variance deviates from 1");
    }

    for (YearNormMode mode : {YearNormMode::PerYearStd, YearNormMode::Top10Mean}) {
        VenueScoreModel nm = year_normalize(model, mode);
        for (int y = 2000; y <= 2004; ++y) {
            int before = 0, after = 0;
            for (int v = 1; v < 25; ++v) {
                if (model.at(v, y) > model.at(before, y))
                    before = v;
                if (nm.at(v, y) > nm.at(after, y))
                    after = v;
            }
            c.require(before == after, "year normalization changed a per-year argmax");
        }
    }
    c.note("top-10 means 1, z-groups (0,1), argmax preserved");
    return out;
}

Outcome clustering_criterion() {
    Outcome out;
    Check c{out};

    // planted five-component mixture
    std::mt19937_64 rng(23);
    std::normal_distribution<double> noise(0.0, 0.8);
    std::vector<std::vector<double>> centers = {
        {0, 0, 0, 0, 0, 0}, {10, 0, 0, 0, 0, 0}, {0, 10, 0, 0, 0, 0},
        {0, 0, 10, 0, 0, 0}, {0, 0, 0, 10, 0, 0},
    };
    std::vector<std::vector<double>> points;
    for (const auto &center : centers)
        for (int i = 0; i < 30; ++i) {
            std::vector<double> p(6);
            for (int d = 0; d < 6; ++d)
                p[d] = center[d] + noise(rng);
            points.push_back(std::move(p));
        }
    auto sweep = silhouette_sweep(points, 2, 9, 4, 19);
    int best_k = 0;
    double best = -2.0;
    for (const auto &[k, s] : sweep)
        if (s > best) {
            best = s;
            best_k = k;
        }
    c.require(best_k >= 4 && best_k <= 6,
              "sweep argmax " + std::to_string(best_k) + " outside {4,5,6}");

    // silhouette vs brute force on <= 300 points
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::vector<double>> cloud(250, std::vector<double>(4));
    for (auto &p : cloud)
        for (double &x : p)
            x = unit(rng);
    for (int k : {2, 5, 11}) {
        Clustering cl = kmeans(cloud, k, 2, 3);
        double brute = oracle::silhouette_bruteforce(cloud, cl.assignment, k);
        c.require(std::abs(cl.silhouette - brute) <= 1e-12,
                  "silhouette differs from brute force at k=" + std::to_string(k));
        c.require(cl.silhouette >= -1.0 && cl.silhouette <= 1.0, "silhouette outside [-1,1]");
    }

    // LDA vectors are simplex-valid
    std::ostringstream gen;
    std::mt19937 crng(5);
    for (int v = 0; v < 8; ++v)
        for (int p = 0; p < 25; ++p)
            gen << "V" << v << "\t2010\t8\tWriter W" << (crng() % 30) << "\n";
    std::istringstream corpus_in(gen.str());
    Corpus corpus = ingest_normalized(corpus_in);
    std::map<std::string, std::string> aff;
    for (int u = 0; u < 30; ++u)
        aff["Writer W" + std::to_string(u)] = "Uni " + std::to_string(u % 6);
    VenueAuthorCounts counts = build_count_matrix(corpus, 2000, 1, aff, 0.95);
    LdaConfig lcfg;
    lcfg.d = 5;
    lcfg.iterations = 100;
    lcfg.seed = 2;
    TopicVectors topics = lda_fit(counts, lcfg);
    for (const auto &vec : topics.vectors) {
        double sum = 0.0;
        for (double x : vec) {
            c.require(x >= 0.0, "negative topic mass");
            sum += x;
        }
        c.require(std::abs(sum - 1.0) <= 1e-9, "topic vector off the simplex");
    }
    std::ostringstream note;
    note << "sweep argmax " << best_k << ", silhouette matches brute force";
    c.note(note.str());
    return out;
}

Outcome plus_minus_criterion() {
    Outcome out;
    Check c{out};

    std::vector<std::vector<int>> incidence = {{0, 1}, {1, 2}, {0}, {2}, {0, 1, 2}};
    std::vector<double> scores = {3.0, 1.0, 2.0, -1.0, 4.0};
    const double lambda = 0.25;
    auto values = credit_split(incidence, 3, scores, lambda);

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(5, 3);
    for (int p = 0; p < 5; ++p)
        for (int a : incidence[static_cast<std::size_t>(p)])
            A(p, a) = 1.0;
    Eigen::VectorXd b(5);
    for (int p = 0; p < 5; ++p)
        b(p) = scores[static_cast<std::size_t>(p)];
    Eigen::MatrixXd M = A.transpose() * A + 5.0 * lambda * Eigen::MatrixXd::Identity(3, 3);
    Eigen::VectorXd expected = Eigen::FullPivLU<Eigen::MatrixXd>(M).solve(A.transpose() * b);
    for (int a = 0; a < 3; ++a)
        c.require(std::abs(values[static_cast<std::size_t>(a)] - expected(a)) <= 1e-8,
                  "5x3 instance differs from the dense ridge oracle");

    std::vector<std::vector<int>> identity = {{0}, {1}, {2}};
    std::vector<double> paper_scores = {1.5, -2.0, 0.25};
    auto recovered = credit_split(identity, 3, paper_scores, 0.0);
    for (int a = 0; a < 3; ++a)
        c.require(recovered[static_cast<std::size_t>(a)] ==
                      paper_scores[static_cast<std::size_t>(a)],
                  "identity incidence at lambda 0 is not exact");
    c.note("5x3 vs dense oracle at 1e-8, identity exact");
    return out;
}

Outcome aging_curve_criterion() {
    Outcome out;
    Check c{out};

    // cohort with a productivity hump at career year 15
    std::mt19937_64 rng(29);
    std::ostringstream gen;
    const int n_authors = 500;
    for (int a = 0; a < n_authors; ++a) {
        int first = 1970 + static_cast<int>(rng() % 8);
        for (int career = 0; career < 40; ++career) {
            double rate = 0.8 + 3.0 * std::exp(-0.5 * (career - 15.0) * (career - 15.0) / 16.0);
            std::poisson_distribution<int> papers(rate);
            int count = papers(rng);
            for (int i = 0; i < count; ++i)
                gen << "V\t" << (first + career) << "\t8\tCohort C" << a << "\n";
        }
    }
    std::istringstream in(gen.str());
    Corpus corpus = ingest_normalized(in);

    VenueScoreModel flat;
    flat.year_range = corpus.year_range;
    for (int y = corpus.year_range.first; y <= corpus.year_range.second; ++y)
        flat.scores[{0, y}] = 1.0;

    auto curve = aging_curve(corpus, flat, CreditModel::FullCredit);
    int argmax = 0;
    double peak = -1.0;
    for (const auto &[career, point] : curve) {
        if (career < 40 && point.mean_score > peak) {
            peak = point.mean_score;
            argmax = career;
        }
    }
    c.require(std::abs(argmax - 15) <= 2,
              "recovered peak at career year " + std::to_string(argmax));
    c.note("peak recovered at career year " + std::to_string(argmax));
    return out;
}

} // namespace

int main() {
    struct Criterion {
        const char *name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {"planted-model recovery", planted_model_recovery},
        {"solver-oracle equivalence", solver_oracle_equivalence},
        {"loss correctness", loss_correctness},
        {"splat kernel", splat_kernel_criterion},
        {"credit models", credit_model_criterion},
        {"correlation machinery", correlation_criterion},
        {"pagerank", pagerank_criterion},
        {"normalization", normalization_criterion},
        {"clustering", clustering_criterion},
        {"plus-minus credit", plus_minus_criterion},
        {"aging curve", aging_curve_criterion},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome outcome;
        try {
            outcome = criteria[i].run();
        } catch (const std::exception &e) {
            outcome.pass = false;
            outcome.detail = std::string("exception: ") + e.what();
        }
        std::printf("[%2zu/%zu] %s %-26s %s\n", i + 1, criteria.size(),
                    outcome.pass ? "PASS" : "FAIL", criteria[i].name, outcome.detail.c_str());
        if (!outcome.pass)
            ++failed;
    }
    if (failed == 0) {
        std::printf("all %zu acceptance criteria passed\n", criteria.size());
        return 0;
    }
    std::printf("%d acceptance criteria FAILED\n", failed);
    return 1;
}
