#pragma once

#include "venuescore/corpus.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace venuescore {

// How one paper's credit is divided among its ordered authors.
enum class CreditModel {
    EqualSplit = 1,             // 1/n each
    FullCredit = 2,             // 1 each
    Harmonic = 3,               // (1, 1/2, ..., 1/n) normalized to sum 1
    HarmonicLastEqualsFirst = 4 // harmonic, last author raised to the first's share
};

std::vector<double> author_credit(CreditModel model, int n_authors);

struct TemporalScheme {
    enum class Kind { Block, Splat };
    Kind kind = Kind::Block;
    int block_years = 50; // Block: chunk width in years
    double sigma = 4.5;   // Splat: Gaussian width in years
    double clip = 0.05;   // Splat: minimum normalized kernel weight kept

    static TemporalScheme block(int n_years);
    static TemporalScheme splat(double sigma, double clip);
};

// Discrete Gaussian over integer year offsets, truncated and renormalized.
struct SplatKernel {
    std::vector<int> offsets;
    std::vector<double> weights; // positive, sum to 1
};

SplatKernel splat_kernel(double sigma, double clip, int year, std::pair<int, int> year_range);

// M papers at a venue-year -> per-paper multiplier M^(-1/alpha).
double size_multiplier(long long venue_year_papers, double alpha);

struct SizeNorm {
    bool enabled = false;
    double alpha = 1.5849;

    static SizeNorm off() { return {}; }
    static SizeNorm on(double alpha) { return {true, alpha}; }
};

struct ColumnInfo {
    int venue_id = 0;
    int chunk = 0;
    int start_year = 0;
    int end_year = 0;
};

struct ColumnMap {
    int n_venues = 0;
    int n_chunks = 0;
    std::pair<int, int> year_range{0, 0};
    std::vector<ColumnInfo> columns; // n_venues * n_chunks entries, bias excluded

    int bias_column() const { return n_venues * n_chunks; }
    int width() const { return n_venues * n_chunks + 1; }
    int column_of(int venue_id, int chunk) const { return venue_id * n_chunks + chunk; }
    int chunk_of_year(int year) const;
};

ColumnMap make_column_map(const Corpus &corpus, const TemporalScheme &scheme);

// CSR with an optional bias column (unregularized by the solver).
struct SparseMatrix {
    int n_rows = 0;
    int n_cols = 0;
    int bias_col = -1;
    std::vector<std::size_t> row_ptr;
    std::vector<int> col;
    std::vector<double> val;

    std::size_t nnz() const { return val.size(); }
    double dot_row(int row, const std::vector<double> &x) const;
};

struct DesignMatrix {
    SparseMatrix matrix;
    ColumnMap columns;
};

// One regression row: an author's publication vector, optionally truncated
// at a year, scaled by a row weight in (0,1].
struct RowSpec {
    int author_id = -1;
    std::optional<int> year_cutoff;
    double weight = 1.0;
};

// Rows = all corpus authors, in author-id order.
DesignMatrix build_design(const Corpus &corpus, CreditModel credit,
                          const TemporalScheme &scheme, const SizeNorm &size_norm);
// Rows = explicit specs (regression targets).
DesignMatrix build_design(const Corpus &corpus, CreditModel credit,
                          const TemporalScheme &scheme, const SizeNorm &size_norm,
                          std::span<const RowSpec> rows);

// column_index, venue_name, chunk_start_year, chunk_end_year
void write_column_map(const ColumnMap &map, const Corpus &corpus, std::ostream &out);

} // namespace venuescore
