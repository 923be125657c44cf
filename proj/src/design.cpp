#include "venuescore/design.hpp"

#include "venuescore/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

namespace venuescore {

std::vector<double> author_credit(CreditModel model, int n_authors) {
    if (n_authors < 1)
        throw std::domain_error("author_credit: need at least one author");
    const std::size_t n = static_cast<std::size_t>(n_authors);
    std::vector<double> w(n, 0.0);
    switch (model) {
    case CreditModel::EqualSplit:
        std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(n_authors));
        break;
    case CreditModel::FullCredit:
        std::fill(w.begin(), w.end(), 1.0);
        break;
    case CreditModel::Harmonic:
    case CreditModel::HarmonicLastEqualsFirst: {
        for (std::size_t i = 0; i < n; ++i)
            w[i] = 1.0 / static_cast<double>(i + 1);
        if (model == CreditModel::HarmonicLastEqualsFirst)
            w[n - 1] = w[0];
        double sum = 0.0;
        for (double x : w)
            sum += x;
        for (double &x : w)
            x /= sum;
        break;
    }
    }
    return w;
}

TemporalScheme TemporalScheme::block(int n_years) {
    if (n_years < 1)
        throw std::domain_error("block scheme needs n_years >= 1");
    TemporalScheme s;
    s.kind = Kind::Block;
    s.block_years = n_years;
    return s;
}

TemporalScheme TemporalScheme::splat(double sigma, double clip) {
    if (sigma <= 0.0)
        throw std::domain_error("splat sigma must be positive");
    if (clip < 0.0 || clip >= 1.0)
        throw std::domain_error("splat clip must be in [0,1)");
    TemporalScheme s;
    s.kind = Kind::Splat;
    s.sigma = sigma;
    s.clip = clip;
    return s;
}

SplatKernel splat_kernel(double sigma, double clip, int year, std::pair<int, int> year_range) {
    if (sigma <= 0.0)
        throw std::domain_error("splat sigma must be positive");
    if (clip < 0.0 || clip >= 1.0)
        throw std::domain_error("splat clip must be in [0,1)");

    // Wide enough that the omitted tail is negligible for the clip test.
    const int radius = std::max(1, static_cast<int>(std::ceil(10.0 * sigma)));
    std::vector<double> raw(static_cast<std::size_t>(2 * radius + 1));
    double total = 0.0;
    for (int d = -radius; d <= radius; ++d) {
        double w = std::exp(-0.5 * (static_cast<double>(d) * d) / (sigma * sigma));
        raw[static_cast<std::size_t>(d + radius)] = w;
        total += w;
    }

    SplatKernel kernel;
    double kept_sum = 0.0;
    for (int d = -radius; d <= radius; ++d) {
        double w = raw[static_cast<std::size_t>(d + radius)];
        if (w / total < clip)
            continue; // truncated tail
        int target = year + d;
        if (target < year_range.first || target > year_range.second)
            continue; // boundary years keep their mass via renormalization
        kernel.offsets.push_back(d);
        kernel.weights.push_back(w);
        kept_sum += w;
    }
    if (kernel.offsets.empty()) {
        // Very wide kernels can clip everything; the publication year itself
        // must always carry the mass.
        kernel.offsets.push_back(0);
        kernel.weights.push_back(1.0);
        return kernel;
    }
    for (double &w : kernel.weights)
        w /= kept_sum;
    return kernel;
}

double size_multiplier(long long venue_year_papers, double alpha) {
    if (venue_year_papers < 1)
        throw std::domain_error("size_multiplier: venue-year paper count must be >= 1");
    if (alpha <= 0.0)
        throw std::domain_error("size_multiplier: alpha must be positive");
    return std::pow(static_cast<double>(venue_year_papers), -1.0 / alpha);
}

int ColumnMap::chunk_of_year(int year) const {
    if (n_chunks <= 1 || columns.empty())
        return 0;
    // Only the final chunk may be partial, so chunk 0 carries the width.
    int width = columns[0].end_year - columns[0].start_year + 1;
    return (year - year_range.first) / width;
}

ColumnMap make_column_map(const Corpus &corpus, const TemporalScheme &scheme) {
    ColumnMap map;
    map.n_venues = static_cast<int>(corpus.venues.size());
    map.year_range = corpus.year_range;
    const int span = corpus.year_range.second - corpus.year_range.first + 1;

    int chunk_width = 1;
    if (scheme.kind == TemporalScheme::Kind::Block) {
        chunk_width = scheme.block_years;
        map.n_chunks = (span + chunk_width - 1) / chunk_width;
    } else {
        map.n_chunks = span; // one column per year
    }

    map.columns.reserve(static_cast<std::size_t>(map.n_venues) * map.n_chunks);
    for (int v = 0; v < map.n_venues; ++v) {
        for (int c = 0; c < map.n_chunks; ++c) {
            ColumnInfo info;
            info.venue_id = v;
            info.chunk = c;
            info.start_year = corpus.year_range.first + c * chunk_width;
            info.end_year = std::min(info.start_year + chunk_width - 1, corpus.year_range.second);
            map.columns.push_back(info);
        }
    }
    return map;
}

double SparseMatrix::dot_row(int row, const std::vector<double> &x) const {
    double sum = 0.0;
    for (std::size_t i = row_ptr[static_cast<std::size_t>(row)];
         i < row_ptr[static_cast<std::size_t>(row) + 1]; ++i)
        sum += val[i] * x[static_cast<std::size_t>(col[i])];
    return sum;
}

namespace {

struct DesignBuilder {
    const Corpus &corpus;
    CreditModel credit;
    const TemporalScheme &scheme;
    const SizeNorm &size_norm;
    ColumnMap map;
    int chunk_width;
    mutable std::map<int, SplatKernel> kernel_cache;

    explicit DesignBuilder(const Corpus &c, CreditModel cm, const TemporalScheme &ts,
                           const SizeNorm &sn)
        : corpus(c), credit(cm), scheme(ts), size_norm(sn), map(make_column_map(c, ts)) {
        chunk_width =
            scheme.kind == TemporalScheme::Kind::Block ? scheme.block_years : 1;
    }

    int chunk_of(int year) const { return (year - map.year_range.first) / chunk_width; }

    const SplatKernel &kernel_for(int year) const {
        auto it = kernel_cache.find(year);
        if (it == kernel_cache.end())
            it = kernel_cache
                     .emplace(year, splat_kernel(scheme.sigma, scheme.clip, year, map.year_range))
                     .first;
        return it->second;
    }

    // Accumulates one author's contribution from one paper into a row map.
    void add_paper(std::map<int, double> &row, const Paper &p, double credit_weight,
                   double row_weight) const {
        double mult = credit_weight * row_weight;
        if (size_norm.enabled) {
            long long m = corpus.venue_year_size(p.venue_id, p.year);
            mult *= size_multiplier(m, size_norm.alpha);
        }
        if (scheme.kind == TemporalScheme::Kind::Block) {
            row[map.column_of(p.venue_id, chunk_of(p.year))] += mult;
        } else {
            const SplatKernel &k = kernel_for(p.year);
            for (std::size_t i = 0; i < k.offsets.size(); ++i) {
                int target_year = p.year + k.offsets[i];
                row[map.column_of(p.venue_id, target_year - map.year_range.first)] +=
                    mult * k.weights[i];
            }
        }
    }

    void fill_row(std::map<int, double> &row, int author_id, std::optional<int> cutoff,
                  double row_weight) const {
        for (int paper_id : corpus.papers_of_author(author_id)) {
            const Paper &p = corpus.papers[static_cast<std::size_t>(paper_id)];
            if (cutoff && p.year > *cutoff)
                continue;
            const auto weights = author_credit(credit, static_cast<int>(p.author_ids.size()));
            for (std::size_t pos = 0; pos < p.author_ids.size(); ++pos) {
                if (p.author_ids[pos] == author_id)
                    add_paper(row, p, weights[pos], row_weight);
            }
        }
    }

    DesignMatrix assemble(std::span<const RowSpec> rows) const {
        DesignMatrix design;
        design.columns = map;
        SparseMatrix &m = design.matrix;
        m.n_rows = static_cast<int>(rows.size());
        m.n_cols = map.width();
        m.bias_col = map.bias_column();
        m.row_ptr.reserve(rows.size() + 1);
        m.row_ptr.push_back(0);

        std::map<int, double> row;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const RowSpec &spec = rows[r];
            if (spec.author_id < 0 ||
                spec.author_id >= static_cast<int>(corpus.authors.size()))
                throw DataError("design row " + std::to_string(r) +
                                " references unknown author id " +
                                std::to_string(spec.author_id));
            row.clear();
            fill_row(row, spec.author_id, spec.year_cutoff, spec.weight);
            for (const auto &[c, v] : row) {
                m.col.push_back(c);
                m.val.push_back(v);
            }
            m.col.push_back(m.bias_col);
            m.val.push_back(1.0);
            m.row_ptr.push_back(m.col.size());
        }
        return design;
    }
};

} // namespace

DesignMatrix build_design(const Corpus &corpus, CreditModel credit, const TemporalScheme &scheme,
                          const SizeNorm &size_norm) {
    std::vector<RowSpec> rows(corpus.authors.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        rows[i].author_id = static_cast<int>(i);
    return build_design(corpus, credit, scheme, size_norm, rows);
}

DesignMatrix build_design(const Corpus &corpus, CreditModel credit, const TemporalScheme &scheme,
                          const SizeNorm &size_norm, std::span<const RowSpec> rows) {
    if (corpus.papers.empty())
        throw DataError("build_design: corpus has no papers");
    DesignBuilder builder(corpus, credit, scheme, size_norm);
    return builder.assemble(rows);
}

void write_column_map(const ColumnMap &map, const Corpus &corpus, std::ostream &out) {
    out << "column\tvenue\tchunk_start_year\tchunk_end_year\n";
    for (std::size_t i = 0; i < map.columns.size(); ++i) {
        const ColumnInfo &c = map.columns[i];
        out << i << '\t' << corpus.venues[static_cast<std::size_t>(c.venue_id)].canonical_name
            << '\t' << c.start_year << '\t' << c.end_year << '\n';
    }
    out << map.bias_column() << "\tBIAS\t0\t0\n";
}

} // namespace venuescore
