#include "venuescore/baselines.hpp"
#include "venuescore/cluster.hpp"
#include "venuescore/config.hpp"
#include "venuescore/corpus.hpp"
#include "venuescore/design.hpp"
#include "venuescore/errors.hpp"
#include "venuescore/io_util.hpp"
#include "venuescore/scores.hpp"
#include "venuescore/solver.hpp"
#include "venuescore/synthetic.hpp"
#include "venuescore/targets.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace venuescore;

namespace {

namespace fs = std::filesystem;

struct CommandContext {
    ConfigFile config;
    fs::path config_path;
    fs::path out_dir;
    std::uint64_t seed = 1;
    std::vector<fs::path> inputs;
    std::vector<fs::path> outputs;

    fs::path out(const std::string &name) const { return out_dir / name; }

    void track_input(const fs::path &p) { inputs.push_back(p); }

    void write_output(const std::string &name,
                      const std::function<void(std::ostream &)> &writer) {
        fs::path p = out(name);
        atomic_write(p, writer);
        outputs.push_back(p);
    }

    void write_output_text(const std::string &name, const std::string &text) {
        write_output(name, [&](std::ostream &o) { o << text; });
    }

    void finish(const std::string &command) {
        Manifest m;
        m.command = command;
        m.config_hash = hex64(fnv1a64(config.canonical_text()));
        m.seed = seed;
        m.inputs = inputs;
        m.outputs = outputs;
        write_manifest(out_dir, m);
    }
};

CommandContext make_context(const std::string &config_path, const std::string &out_override) {
    CommandContext ctx;
    ctx.config_path = config_path;
    ctx.config = ConfigFile::parse_file(config_path);
    std::string dir = out_override.empty() ? ctx.config.get_string("output", "dir", "out")
                                           : out_override;
    ctx.out_dir = dir;
    fs::create_directories(ctx.out_dir);
    // one root seed; per-stage seeds default to it
    ctx.seed = static_cast<std::uint64_t>(ctx.config.get_int("pipeline", "seed", 1));
    return ctx;
}

FilterConfig filter_from(const ConfigFile &cfg) {
    FilterConfig f;
    f.min_year = static_cast<int>(cfg.get_int("corpus", "min_year", 1970));
    f.max_year = static_cast<int>(cfg.get_int("corpus", "max_year", 2019));
    f.min_pages = static_cast<int>(cfg.get_int("corpus", "min_pages", 6));
    f.max_pages = static_cast<int>(cfg.get_int("corpus", "max_pages", 100));
    return f;
}

Corpus load_corpus(CommandContext &ctx, IngestStats *stats = nullptr) {
    const ConfigFile &cfg = ctx.config;
    std::string source = cfg.get_string("corpus", "source", "normalized");
    fs::path path = cfg.get_string("corpus", "path");
    if (!fs::exists(path))
        throw ConfigError("corpus path does not exist: " + path.string());
    ctx.track_input(path);

    FilterConfig filter = filter_from(cfg);
    Corpus corpus;
    if (source == "dblp") {
        corpus = ingest_dblp_file(path, filter, stats);
    } else if (source == "normalized") {
        corpus = ingest_normalized_file(path, filter, stats);
    } else {
        throw ConfigError("corpus source must be 'dblp' or 'normalized', got '" + source + "'");
    }

    if (cfg.has("corpus", "merge_map")) {
        fs::path map_path = cfg.get_string("corpus", "merge_map");
        if (!fs::exists(map_path))
            throw ConfigError("merge map does not exist: " + map_path.string());
        ctx.track_input(map_path);
        std::ifstream in(map_path);
        corpus = merge_venues(corpus, load_merge_map(in));
    }
    return corpus;
}

CreditModel credit_from(const ConfigFile &cfg, const std::string &key, int fallback) {
    int v = static_cast<int>(cfg.get_int("design", key, fallback));
    if (v < 1 || v > 4)
        throw ConfigError("credit model must be 1..4, got " + std::to_string(v));
    return static_cast<CreditModel>(v);
}

TemporalScheme temporal_from(const ConfigFile &cfg) {
    std::string kind = cfg.get_string("design", "temporal", "block");
    if (kind == "block")
        return TemporalScheme::block(static_cast<int>(cfg.get_int("design", "block_years", 50)));
    if (kind == "splat")
        return TemporalScheme::splat(cfg.get_double("design", "sigma", 4.5),
                                     cfg.get_double("design", "clip", 0.05));
    throw ConfigError("temporal scheme must be 'block' or 'splat', got '" + kind + "'");
}

SizeNorm size_norm_from(const ConfigFile &cfg) {
    double alpha = cfg.get_double("design", "size_alpha", 0.0);
    if (alpha <= 0.0)
        return SizeNorm::off();
    return SizeNorm::on(alpha);
}

SolverConfig solver_from(const ConfigFile &cfg, double default_lambda) {
    SolverConfig s;
    std::int64_t root = cfg.get_int("pipeline", "seed", 1);
    s.lambda = cfg.get_double("solver", "lambda", default_lambda);
    s.epochs = static_cast<int>(cfg.get_int("solver", "epochs", 20));
    s.learning_rate = cfg.get_double("solver", "learning_rate", 0.01);
    s.seed = static_cast<std::uint64_t>(cfg.get_int("solver", "seed", root));
    s.shuffle = cfg.get_bool("solver", "shuffle", true);
    s.early_stop_rel = cfg.get_double("solver", "early_stop_rel", 1e-6);
    return s;
}

std::map<std::string, std::string> affiliations_from(CommandContext &ctx,
                                                     const std::string &section) {
    fs::path path = ctx.config.get_string(section, "affiliations");
    if (!fs::exists(path))
        throw ConfigError("affiliations file does not exist: " + path.string());
    ctx.track_input(path);
    std::ifstream in(path);
    return parse_affiliations(in);
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

int cmd_synth(CommandContext &ctx) {
    const ConfigFile &cfg = ctx.config;
    SyntheticSpec spec;
    spec.venues = static_cast<int>(cfg.get_int("synth", "venues", spec.venues));
    spec.authors = static_cast<int>(cfg.get_int("synth", "authors", spec.authors));
    spec.papers_per_author =
        static_cast<int>(cfg.get_int("synth", "papers_per_author", spec.papers_per_author));
    spec.first_year = static_cast<int>(cfg.get_int("synth", "first_year", spec.first_year));
    spec.last_year = static_cast<int>(cfg.get_int("synth", "last_year", spec.last_year));
    spec.home_venues = static_cast<int>(cfg.get_int("synth", "home_venues", spec.home_venues));
    spec.faculty_fraction = cfg.get_double("synth", "faculty_fraction", spec.faculty_fraction);
    spec.label_flip = cfg.get_double("synth", "label_flip", spec.label_flip);
    spec.top_k = static_cast<int>(cfg.get_int("synth", "top_k", spec.top_k));
    spec.grant_noise = cfg.get_double("synth", "grant_noise", spec.grant_noise);
    spec.salary_noise = cfg.get_double("synth", "salary_noise", spec.salary_noise);
    spec.seed = static_cast<std::uint64_t>(
        cfg.get_int("synth", "seed", cfg.get_int("pipeline", "seed", 42)));
    ctx.seed = spec.seed;

    SyntheticData data = generate_synthetic(spec);
    for (const auto &path : write_synthetic(data, ctx.out_dir))
        ctx.outputs.push_back(path);
    ctx.finish("synth");
    std::cout << "synth: " << data.corpus.papers.size() << " papers, "
              << data.corpus.authors.size() << " authors, " << data.corpus.venues.size()
              << " venues -> " << ctx.out_dir.string() << "\n";
    return 0;
}

int cmd_ingest(CommandContext &ctx) {
    IngestStats stats;
    Corpus corpus = load_corpus(ctx, &stats);
    ctx.write_output("corpus.tsv", [&](std::ostream &o) { export_normalized(corpus, o); });
    ctx.write_output_text("ingest_stats.json", stats.to_json() + "\n");
    ctx.finish("ingest");
    std::cout << "ingest: kept " << stats.kept << " papers, " << corpus.authors.size()
              << " authors, " << corpus.venues.size() << " venues\n";
    return 0;
}

struct TrainedModel {
    DesignMatrix design;
    FitResult fit;
    VenueScoreModel model;
};

TrainedModel train_metric(CommandContext &ctx, const Corpus &corpus, const std::string &metric) {
    const ConfigFile &cfg = ctx.config;
    TargetSet targets;

    if (metric == "faculty") {
        fs::path rank_path = cfg.get_string("faculty", "ranking");
        if (!fs::exists(rank_path))
            throw ConfigError("ranking file does not exist: " + rank_path.string());
        ctx.track_input(rank_path);
        fs::path aff_path = cfg.get_string("faculty", "affiliations");
        if (!fs::exists(aff_path))
            throw ConfigError("affiliations file does not exist: " + aff_path.string());
        ctx.track_input(aff_path);
        std::ifstream aff(aff_path), rank(rank_path);
        UnmatchedReport report;
        FacultyLabels labels = build_faculty_labels(
            corpus, aff, rank, static_cast<int>(cfg.get_int("faculty", "top_k", 40)),
            cfg.get_double("faculty", "match_threshold", 0.9), &report);
        targets = faculty_target_set(labels);
        if (!report.unmatched.empty()) {
            std::ostringstream list;
            for (const auto &name : report.unmatched)
                list << name << "\n";
            ctx.write_output_text("unmatched_faculty.txt", list.str());
        }
    } else if (metric == "nsf") {
        fs::path awards_path = cfg.get_string("nsf", "awards");
        fs::path cpi_path = cfg.get_string("nsf", "cpi");
        for (const auto &p : {awards_path, cpi_path})
            if (!fs::exists(p))
                throw ConfigError("nsf input does not exist: " + p.string());
        ctx.track_input(awards_path);
        ctx.track_input(cpi_path);
        NsfConfig ncfg;
        ncfg.log_amounts = cfg.get_bool("nsf", "log_amounts", false);
        ncfg.znorm = cfg.get_bool("nsf", "znorm", true);
        ncfg.marginal = cfg.get_bool("nsf", "marginal", false);
        ncfg.match_threshold = cfg.get_double("nsf", "match_threshold", 0.9);
        std::ifstream awards(awards_path), cpi_in(cpi_path);
        auto result = build_nsf_targets(corpus, awards, load_cpi(cpi_in), ncfg);
        targets = std::move(result.targets);
        ctx.write_output_text("nsf_stats.json", result.stats.to_json() + "\n");
    } else if (metric == "salary") {
        std::vector<SalaryRow> rows;
        for (const auto &file : cfg.get_list("salary", "files")) {
            fs::path p = file;
            if (!fs::exists(p))
                throw ConfigError("salary file does not exist: " + p.string());
            ctx.track_input(p);
            std::ifstream in(p);
            auto parsed = parse_salary_rows(in);
            rows.insert(rows.end(), parsed.begin(), parsed.end());
        }
        SalaryConfig scfg;
        scfg.match_threshold = cfg.get_double("salary", "match_threshold", 0.9);
        auto result = build_salary_targets(corpus, rows, scfg);
        targets = std::move(result.targets);
    } else {
        throw ConfigError("metric must be faculty, nsf or salary, got '" + metric + "'");
    }

    if (targets.rows.empty())
        throw DataError("no regression rows for metric " + metric);

    if (targets.loss.kind == LossKind::Huber)
        targets.loss.delta = cfg.get_double("solver", "huber_delta", 1.0);

    TrainedModel out;
    out.design = build_design(corpus, credit_from(cfg, "credit_model", 1), temporal_from(cfg),
                              size_norm_from(cfg), targets.rows);
    out.fit = sgd_fit(out.design.matrix, targets.b, targets.loss, solver_from(cfg, 0.03));
    out.model = expand_weights(out.fit.weights, out.design.columns, metric);

    std::string year_mode = cfg.get_string("normalize", "year_mode", "none");
    if (year_mode == "std")
        out.model = year_normalize(out.model, YearNormMode::PerYearStd);
    else if (year_mode == "top10")
        out.model = year_normalize(out.model, YearNormMode::Top10Mean);
    else if (year_mode != "none")
        throw ConfigError("normalize year_mode must be none, std or top10");
    return out;
}

int cmd_train(CommandContext &ctx, const std::string &metric) {
    Corpus corpus = load_corpus(ctx);
    TrainedModel trained = train_metric(ctx, corpus, metric);

    ctx.write_output("venue_scores_" + metric + ".tsv",
                     [&](std::ostream &o) { write_venue_scores(trained.model, corpus, o); });
    ctx.write_output("column_map.tsv", [&](std::ostream &o) {
        write_column_map(trained.design.columns, corpus, o);
    });
    ctx.write_output("weights_" + metric + ".tsv", [&](std::ostream &o) {
        o.precision(17);
        o << "column\tvenue\tchunk_start_year\tchunk_end_year\tweight\n";
        const ColumnMap &cm = trained.design.columns;
        for (std::size_t i = 0; i < trained.fit.weights.size(); ++i) {
            if (static_cast<int>(i) == cm.bias_column()) {
                o << i << "\tBIAS\t0\t0\t" << trained.fit.weights[i] << '\n';
            } else {
                const ColumnInfo &info = cm.columns[i];
                o << i << '\t'
                  << corpus.venues[static_cast<std::size_t>(info.venue_id)].canonical_name
                  << '\t' << info.start_year << '\t' << info.end_year << '\t'
                  << trained.fit.weights[i] << '\n';
            }
        }
    });
    ctx.write_output_text("training_report_" + metric + ".json",
                          trained.fit.report.to_json() + "\n");
    ctx.finish("train_" + metric);
    std::cout << "train " << metric << ": " << trained.design.matrix.n_rows << " rows, "
              << trained.design.matrix.n_cols << " columns, " << trained.fit.report.epochs_run
              << " epochs\n";
    return 0;
}

int cmd_combine(CommandContext &ctx, const std::vector<std::string> &model_files) {
    std::vector<std::string> files = model_files;
    if (files.empty() && ctx.config.has("combine", "models"))
        files = ctx.config.get_list("combine", "models");
    if (files.empty())
        throw ConfigError("combine needs model files (--models or [combine] models)");

    Corpus corpus = load_corpus(ctx);
    double clip = ctx.config.get_double("normalize", "clip_sigmas", 12.0);
    bool per_year = ctx.config.get_bool("normalize", "znorm_per_year", true);

    std::vector<VenueScoreModel> members;
    for (const auto &file : files) {
        fs::path p = file;
        if (!fs::exists(p))
            throw ConfigError("model file does not exist: " + p.string());
        ctx.track_input(p);
        std::ifstream in(p);
        VenueScoreModel m = load_venue_scores(in, corpus, p.stem().string());
        members.push_back(znorm_clip(m, clip, per_year));
    }
    CombinedModel combined = combine(members);
    ctx.write_output("venue_scores_combined.tsv", [&](std::ostream &o) {
        write_venue_scores(combined.combined, corpus, o);
    });
    ctx.finish("combine");
    std::cout << "combine: " << members.size() << " models over "
              << combined.combined.scores.size() << " cells\n";
    return 0;
}

VenueScoreModel load_model_file(CommandContext &ctx, const Corpus &corpus,
                                const std::string &file) {
    fs::path p = file;
    if (!fs::exists(p))
        throw ConfigError("model file does not exist: " + p.string());
    ctx.track_input(p);
    std::ifstream in(p);
    return load_venue_scores(in, corpus, p.stem().string());
}

int cmd_rank(CommandContext &ctx, const std::string &model_file, const std::string &entity,
             int top, const std::string &year_agg) {
    Corpus corpus = load_corpus(ctx);
    VenueScoreModel model = load_model_file(ctx, corpus, model_file);
    CreditModel eval_credit = credit_from(ctx.config, "eval_credit_model", 2);

    std::vector<std::pair<std::string, double>> ranked;
    if (entity == "venues") {
        std::map<int, std::pair<double, int>> acc;
        std::map<int, std::pair<int, double>> latest; // year, score
        for (const auto &[key, score] : model.scores) {
            auto &slot = acc[key.first];
            slot.first += score;
            slot.second += 1;
            auto &l = latest[key.first];
            if (key.second >= l.first) {
                l.first = key.second;
                l.second = score;
            }
        }
        for (const auto &[venue, slot] : acc) {
            double value;
            if (year_agg == "sum")
                value = slot.first;
            else if (year_agg == "last")
                value = latest[venue].second;
            else if (year_agg == "mean")
                value = slot.first / slot.second;
            else
                throw ConfigError("year-agg must be mean, sum or last");
            ranked.emplace_back(corpus.venues[static_cast<std::size_t>(venue)].canonical_name,
                                value);
        }
    } else if (entity == "authors") {
        for (const auto &author : corpus.authors) {
            double total = score_author(model, corpus, author.author_id, eval_credit).total;
            ranked.emplace_back(author.canonical_name, total);
        }
    } else if (entity == "institutions") {
        auto aff = affiliations_from(ctx, "faculty");
        double threshold = ctx.config.get_double("faculty", "match_threshold", 0.9);
        bool per_capita = ctx.config.get_bool("output", "per_capita", false);
        auto institutions =
            score_institution(model, corpus, aff, eval_credit, threshold, per_capita);
        std::ostringstream table;
        table.precision(12);
        table << "rank\tuniversity\tfaculty\tpapers\tscore\tsize_normed\n";
        int r = 1;
        for (const auto &inst : institutions)
            table << r++ << '\t' << inst.university << '\t' << inst.faculty << '\t' << inst.papers
                  << '\t' << inst.total << '\t' << inst.size_normed << '\n';
        ctx.write_output_text("rank_institutions.tsv", table.str());
        ctx.finish("rank_institutions");
        std::cout << "rank institutions: " << institutions.size() << " universities\n";
        return 0;
    } else {
        throw ConfigError("entity must be venues, authors or institutions");
    }

    std::sort(ranked.begin(), ranked.end(), [](const auto &a, const auto &b) {
        if (a.second != b.second)
            return a.second > b.second;
        return a.first < b.first;
    });
    if (top > 0 && static_cast<int>(ranked.size()) > top)
        ranked.resize(static_cast<std::size_t>(top));

    ctx.write_output("rank_" + entity + ".tsv", [&](std::ostream &o) {
        o.precision(12);
        o << "rank\tname\tscore\n";
        int r = 1;
        for (const auto &[name, value] : ranked)
            o << r++ << '\t' << name << '\t' << value << '\n';
    });
    ctx.finish("rank_" + entity);
    std::cout << "rank " << entity << ": " << ranked.size() << " entries\n";
    return 0;
}

int cmd_score(CommandContext &ctx, const std::string &model_file, const std::string &author,
              bool per_paper_norm) {
    Corpus corpus = load_corpus(ctx);
    VenueScoreModel model = load_model_file(ctx, corpus, model_file);
    CreditModel eval_credit = credit_from(ctx.config, "eval_credit_model", 2);

    int author_id = corpus.author_id(author);
    if (author_id < 0) {
        auto matches = match_names({author}, corpus,
                                   ctx.config.get_double("faculty", "match_threshold", 0.9));
        if (!matches.at(author).matched())
            throw DataError("author not found: " + author);
        author_id = matches.at(author).author_id;
    }
    AuthorScore result = score_author(model, corpus, author_id, eval_credit);

    std::map<int, int> papers_per_year;
    for (int paper_id : corpus.papers_of_author(author_id))
        ++papers_per_year[corpus.papers[static_cast<std::size_t>(paper_id)].year];

    ctx.write_output("author_trajectory.tsv", [&](std::ostream &o) {
        o.precision(12);
        o << "year\tvalue\tpapers\n";
        for (const auto &[year, value] : result.per_year) {
            double v = value;
            if (per_paper_norm && papers_per_year.at(year) > 0)
                v /= papers_per_year.at(year);
            o << year << '\t' << v << '\t' << papers_per_year.at(year) << '\n';
        }
    });
    ctx.finish("score");
    std::cout << "score: " << corpus.authors[static_cast<std::size_t>(author_id)].canonical_name
              << " total " << result.total << "\n";
    return 0;
}

int cmd_correlate(CommandContext &ctx, const std::vector<std::string> &table_files,
                  double fuzzy_threshold) {
    if (table_files.size() < 2)
        throw ConfigError("correlate needs at least two --tables files");
    std::vector<ScoreTable> tables;
    for (const auto &file : table_files) {
        fs::path p = file;
        if (!fs::exists(p))
            throw ConfigError("score table does not exist: " + p.string());
        ctx.track_input(p);
        std::ifstream in(p);
        tables.push_back(load_score_table(in, p.stem().string()));
    }
    Alignment alignment =
        fuzzy_threshold > 0.0 ? Alignment::fuzzy(fuzzy_threshold) : Alignment::exact();
    CorrelationReport report = correlate(tables, alignment);
    ctx.write_output_text("correlation_report.json", report.to_json() + "\n");
    ctx.finish("correlate");
    std::cout << "correlate: " << report.aligned_count << " aligned entities across "
              << tables.size() << " tables\n";
    return 0;
}

int cmd_pagerank(CommandContext &ctx, const std::string &graph) {
    Corpus corpus = load_corpus(ctx);
    PageRankConfig pcfg;
    pcfg.damping = ctx.config.get_double("pagerank", "damping", 0.85);
    pcfg.tol = ctx.config.get_double("pagerank", "tol", 1e-10);
    pcfg.max_iter = static_cast<int>(ctx.config.get_int("pagerank", "max_iter", 1000));
    pcfg.binarize = ctx.config.get_bool("pagerank", "binarize", false);

    ScoreTable table;
    if (graph == "authors")
        table = pagerank_authors(corpus, pcfg);
    else if (graph == "venues")
        table = pagerank_venues(corpus, pcfg);
    else
        throw ConfigError("pagerank graph must be 'authors' or 'venues'");

    ctx.write_output("pagerank_" + graph + ".tsv",
                     [&](std::ostream &o) { write_score_table(table, o); });
    ctx.finish("pagerank_" + graph);
    std::cout << "pagerank " << graph << ": " << table.scores.size() << " nodes\n";
    return 0;
}

int cmd_cluster(CommandContext &ctx) {
    const ConfigFile &cfg = ctx.config;
    Corpus corpus = load_corpus(ctx);
    auto aff = affiliations_from(ctx, "cluster");

    int since_year = static_cast<int>(cfg.get_int("cluster", "since_year", 2005));
    int min_universities = static_cast<int>(cfg.get_int("cluster", "min_universities", 20));
    double threshold = cfg.get_double("cluster", "match_threshold", 0.9);
    VenueAuthorCounts counts =
        build_count_matrix(corpus, since_year, min_universities, aff, threshold);

    LdaConfig lcfg;
    lcfg.d = static_cast<int>(cfg.get_int("cluster", "d", 50));
    lcfg.alpha = cfg.get_double("cluster", "alpha", -1.0);
    lcfg.beta = cfg.get_double("cluster", "beta", 0.01);
    lcfg.iterations = static_cast<int>(cfg.get_int("cluster", "iterations", 500));
    lcfg.seed = static_cast<std::uint64_t>(
        cfg.get_int("cluster", "seed", cfg.get_int("pipeline", "seed", 1)));
    TopicVectors topics = lda_fit(counts, lcfg);

    int kmin = static_cast<int>(cfg.get_int("cluster", "kmin", 2));
    int kmax = static_cast<int>(cfg.get_int("cluster", "kmax", 30));
    int restarts = static_cast<int>(cfg.get_int("cluster", "restarts", 5));
    auto sweep = silhouette_sweep(topics.vectors, kmin, kmax, restarts, lcfg.seed);
    int best_k = kmin;
    double best_s = -2.0;
    for (const auto &[k, s] : sweep) {
        if (s > best_s) {
            best_s = s;
            best_k = k;
        }
    }
    Clustering clustering = kmeans(topics.vectors, best_k, restarts, lcfg.seed + best_k);

    ctx.write_output("topic_vectors.tsv", [&](std::ostream &o) {
        o.precision(12);
        for (std::size_t i = 0; i < topics.venue_ids.size(); ++i) {
            o << corpus.venues[static_cast<std::size_t>(topics.venue_ids[i])].canonical_name;
            for (double x : topics.vectors[i])
                o << '\t' << x;
            o << '\n';
        }
    });
    ctx.write_output("clusters.tsv", [&](std::ostream &o) {
        o << "venue\tcluster\n";
        for (std::size_t i = 0; i < topics.venue_ids.size(); ++i)
            o << corpus.venues[static_cast<std::size_t>(topics.venue_ids[i])].canonical_name
              << '\t' << clustering.assignment[i] << '\n';
    });
    ctx.write_output("silhouette_sweep.tsv", [&](std::ostream &o) {
        o.precision(12);
        o << "k\tsilhouette\n";
        for (const auto &[k, s] : sweep)
            o << k << '\t' << s << '\n';
    });

    if (cfg.get_bool("cluster", "fingerprints", false)) {
        std::map<std::string, std::vector<std::string>> rosters;
        for (const auto &[name, university] : aff)
            rosters[university].push_back(name);
        ctx.write_output("fingerprints.tsv", [&](std::ostream &o) {
            o.precision(12);
            for (const auto &[university, names] : rosters) {
                auto matches = match_names(names, corpus, threshold);
                std::vector<int> ids;
                for (const auto &name : names)
                    if (matches.at(name).matched())
                        ids.push_back(matches.at(name).author_id);
                if (ids.empty())
                    continue;
                std::vector<double> fp = fingerprint(corpus, counts, topics, ids);
                o << university;
                for (double x : fp)
                    o << '\t' << x;
                o << '\n';
            }
        });
    }
    ctx.finish("cluster");
    std::cout << "cluster: " << counts.venue_ids.size() << " venues, best k " << best_k
              << " (silhouette " << best_s << ")\n";
    return 0;
}

int cmd_aging(CommandContext &ctx, const std::string &model_file) {
    Corpus corpus = load_corpus(ctx);
    VenueScoreModel model = load_model_file(ctx, corpus, model_file);
    CreditModel eval_credit = credit_from(ctx.config, "eval_credit_model", 2);
    auto curve = aging_curve(corpus, model, eval_credit);
    ctx.write_output("aging_curve.tsv", [&](std::ostream &o) {
        o.precision(12);
        o << "career_year\tmean_score\tauthors\n";
        for (const auto &[year, point] : curve)
            o << year << '\t' << point.mean_score << '\t' << point.authors << '\n';
    });
    ctx.finish("aging");
    std::cout << "aging: " << curve.size() << " career years\n";
    return 0;
}

int cmd_credit_split(CommandContext &ctx, const std::string &model_file, double lambda) {
    Corpus corpus = load_corpus(ctx);
    VenueScoreModel model = load_model_file(ctx, corpus, model_file);

    std::vector<std::vector<int>> incidence;
    std::vector<double> paper_scores;
    incidence.reserve(corpus.papers.size());
    for (const auto &p : corpus.papers) {
        incidence.push_back(p.author_ids);
        paper_scores.push_back(model.at(p.venue_id, p.year));
    }

    std::vector<double> values;
    if (corpus.authors.size() <= 4000) {
        values = credit_split(incidence, static_cast<int>(corpus.authors.size()), paper_scores,
                              lambda);
    } else {
        SolverConfig scfg = solver_from(ctx.config, lambda);
        scfg.early_stop_rel = 0.0;
        values = credit_split(incidence, static_cast<int>(corpus.authors.size()), paper_scores,
                              lambda, scfg);
    }
    ctx.write_output("plus_minus.tsv", [&](std::ostream &o) {
        o.precision(12);
        o << "author\tvalue\n";
        for (const auto &a : corpus.authors)
            o << a.canonical_name << '\t' << values[static_cast<std::size_t>(a.author_id)]
              << '\n';
    });
    ctx.finish("credit_split");
    std::cout << "credit-split: " << values.size() << " authors\n";
    return 0;
}

nlohmann::json error_json(const std::string &type, const std::string &message) {
    nlohmann::json j;
    j["error"] = {{"type", type}, {"message", message}};
    return j;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"venue score engine: learn per-venue quality scores from publication "
                 "records and external metrics"};
    app.require_subcommand(1);
    app.footer(R"(config keys (defaults in parentheses):
  [pipeline] seed (1)              root seed; stage seeds default to it
  [corpus]   source (normalized)   normalized | dblp
             path                  corpus file; dblp input may be gzip
             merge_map             optional alias<TAB>canonical venue merges
             min_year (1970) max_year (2019)
             min_pages (6) max_pages (100)
  [design]   credit_model (1)      1 equal split, 2 full, 3 harmonic, 4 harmonic last=first
             eval_credit_model (2) credit used when scoring authors
             temporal (block)      block | splat
             block_years (50)      >= 50 collapses to a single non-temporal chunk
             sigma (4.5) clip (0.05)
             size_alpha (0 = off)  per-paper multiplier M^(-1/alpha); 1.5849 blends
  [solver]   lambda (0.03) epochs (20) learning_rate (0.01)
             seed shuffle (true) early_stop_rel (1e-6) huber_delta (1.0)
  [faculty]  affiliations ranking top_k (40) match_threshold (0.9)
  [nsf]      awards cpi log_amounts (false) znorm (true) marginal (false)
             match_threshold (0.9)
  [salary]   files match_threshold (0.9)
  [normalize] year_mode (none)     none | std | top10
             clip_sigmas (12) znorm_per_year (true)
  [pagerank] damping (0.85) tol (1e-10) max_iter (1000) binarize (false)
  [cluster]  affiliations d (50) alpha (50/d) beta (0.01) iterations (500)
             since_year (2005) min_universities (20) kmin (2) kmax (30)
             restarts (5) match_threshold (0.9) seed fingerprints (false)
  [combine]  models                comma-separated venue score tables
  [synth]    venues (200) authors (5000) papers_per_author (8) home_venues (5)
             first_year (2000) last_year (2019) faculty_fraction (0.2)
             label_flip (0.1) top_k (40) grant_noise (0.5) salary_noise (0.15) seed
  [output]   dir (out) per_capita (false))");

    std::string config_path;
    std::string out_dir;
    bool json_errors = false;
    app.add_option("-c,--config", config_path, "pipeline config file")->required();
    app.add_option("-o,--out-dir", out_dir, "override [output] dir");
    app.add_flag("--json-errors", json_errors, "emit machine-readable errors on stderr");

    auto *synth = app.add_subcommand("synth", "generate a planted-truth synthetic fixture");
    auto *ingest = app.add_subcommand("ingest", "parse and filter the corpus, write the "
                                                "normalized form and ingestion stats");

    std::string metric = "faculty";
    auto *train = app.add_subcommand("train", "fit venue scores against a metric of interest");
    train->add_option("--metric", metric, "faculty | nsf | salary")->required();

    std::vector<std::string> model_files;
    auto *combine_cmd = app.add_subcommand("combine", "z-normalize, clip and average models");
    combine_cmd->add_option("--models", model_files, "venue score tables to combine");

    std::string model_file, entity = "venues", year_agg = "mean";
    int top = 0;
    auto *rank = app.add_subcommand("rank", "rank venues, authors or institutions");
    rank->add_option("--model", model_file, "venue score table")->required();
    rank->add_option("--entity", entity, "venues | authors | institutions");
    rank->add_option("--top", top, "keep only the top N entries");
    rank->add_option("--year-agg", year_agg, "venue aggregation: mean | sum | last");

    std::string score_model, score_author_name;
    bool per_paper = false;
    auto *score = app.add_subcommand("score", "score one author and write the career trajectory");
    score->add_option("--model", score_model, "venue score table")->required();
    score->add_option("--author", score_author_name, "author name")->required();
    score->add_flag("--per-paper", per_paper, "divide yearly values by yearly paper counts");

    std::vector<std::string> table_files;
    double fuzzy = 0.0;
    auto *correlate_cmd =
        app.add_subcommand("correlate", "pairwise rank correlations between score tables");
    correlate_cmd->add_option("--tables", table_files, "two or more name,score tables");
    correlate_cmd->add_option("--fuzzy", fuzzy, "fuzzy name alignment threshold (0 = exact)");

    std::string graph = "authors";
    auto *pagerank_cmd = app.add_subcommand("pagerank", "co-authorship PageRank baselines");
    pagerank_cmd->add_option("--graph", graph, "authors | venues");

    auto *cluster_cmd =
        app.add_subcommand("cluster", "LDA topic vectors, silhouette sweep and k-means labels");
    (void)cluster_cmd;

    std::string aging_model;
    auto *aging = app.add_subcommand("aging", "mean productivity by career year");
    aging->add_option("--model", aging_model, "venue score table")->required();

    std::string split_model;
    double split_lambda = 0.03;
    auto *split =
        app.add_subcommand("credit-split", "regularized plus-minus credit over paper scores");
    split->add_option("--model", split_model, "venue score table")->required();
    split->add_option("--lambda", split_lambda, "ridge strength");

    CLI11_PARSE(app, argc, argv);

    try {
        CommandContext ctx = make_context(config_path, out_dir);
        if (synth->parsed())
            return cmd_synth(ctx);
        if (ingest->parsed())
            return cmd_ingest(ctx);
        if (train->parsed())
            return cmd_train(ctx, metric);
        if (combine_cmd->parsed())
            return cmd_combine(ctx, model_files);
        if (rank->parsed())
            return cmd_rank(ctx, model_file, entity, top, year_agg);
        if (score->parsed())
            return cmd_score(ctx, score_model, score_author_name, per_paper);
        if (correlate_cmd->parsed())
            return cmd_correlate(ctx, table_files, fuzzy);
        if (pagerank_cmd->parsed())
            return cmd_pagerank(ctx, graph);
        if (cluster_cmd->parsed())
            return cmd_cluster(ctx);
        if (aging->parsed())
            return cmd_aging(ctx, aging_model);
        if (split->parsed())
            return cmd_credit_split(ctx, split_model, split_lambda);
        std::cerr << "no subcommand\n";
        return 1;
    } catch (const ConfigError &e) {
        if (json_errors)
            std::cerr << error_json("config", e.what()).dump() << "\n";
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const DivergenceError &e) {
        if (json_errors)
            std::cerr << error_json("divergence", e.what()).dump() << "\n";
        std::cerr << "numeric divergence: " << e.what() << "\n";
        return 3;
    } catch (const DataError &e) {
        if (json_errors)
            std::cerr << error_json("data", e.what()).dump() << "\n";
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        if (json_errors)
            std::cerr << error_json("internal", e.what()).dump() << "\n";
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
