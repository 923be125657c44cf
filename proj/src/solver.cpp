#include "venuescore/solver.hpp"

#include "venuescore/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace venuescore {

namespace {

void check_label(double y) {
    if (y != 1.0 && y != -1.0)
        throw std::domain_error("classification loss needs labels in {-1,+1}, got " +
                                std::to_string(y));
}

} // namespace

double loss_value(const Loss &loss, double y_hat, double y) {
    switch (loss.kind) {
    case LossKind::Squared: {
        double r = y - y_hat;
        return 0.5 * r * r;
    }
    case LossKind::Huber: {
        double r = y - y_hat;
        double a = std::abs(r);
        if (a <= loss.delta)
            return 0.5 * r * r;
        return loss.delta * a - 0.5 * loss.delta * loss.delta;
    }
    case LossKind::ModifiedHuber: {
        check_label(y);
        double margin = y * y_hat;
        if (margin >= -1.0) {
            double h = std::max(0.0, 1.0 - margin);
            return h * h;
        }
        return -4.0 * margin;
    }
    case LossKind::Logistic: {
        check_label(y);
        double margin = y * y_hat;
        // log(1 + exp(-m)) without overflow
        if (margin < -30.0)
            return -margin;
        return std::log1p(std::exp(-margin));
    }
    }
    return 0.0;
}

double loss_grad(const Loss &loss, double y_hat, double y) {
    switch (loss.kind) {
    case LossKind::Squared:
        return y_hat - y;
    case LossKind::Huber: {
        double r = y - y_hat;
        if (std::abs(r) <= loss.delta)
            return -r;
        return -loss.delta * (r > 0 ? 1.0 : -1.0);
    }
    case LossKind::ModifiedHuber: {
        check_label(y);
        double margin = y * y_hat;
        if (margin >= 1.0)
            return 0.0;
        if (margin >= -1.0)
            return -2.0 * y * (1.0 - margin);
        return -4.0 * y;
    }
    case LossKind::Logistic: {
        check_label(y);
        double margin = y * y_hat;
        if (margin > 30.0)
            return -y * std::exp(-margin);
        return -y / (1.0 + std::exp(margin));
    }
    }
    return 0.0;
}

std::string TrainingReport::to_json() const {
    nlohmann::json j;
    j["epochs_run"] = epochs_run;
    j["epoch_loss"] = epoch_loss;
    j["config"] = {{"lambda", config.lambda},
                   {"epochs", config.epochs},
                   {"learning_rate", config.learning_rate},
                   {"seed", config.seed},
                   {"shuffle", config.shuffle},
                   {"early_stop_rel", config.early_stop_rel}};
    return j.dump(2);
}

FitResult sgd_fit(const SparseMatrix &design, const std::vector<double> &b, const Loss &loss,
                  const SolverConfig &config) {
    if (static_cast<int>(b.size()) != design.n_rows)
        throw DataError("sgd_fit: target length " + std::to_string(b.size()) +
                        " does not match row count " + std::to_string(design.n_rows));
    if (config.lambda < 0.0)
        throw ConfigError("sgd_fit: lambda must be >= 0");
    if (config.epochs < 1)
        throw ConfigError("sgd_fit: epochs must be >= 1");

    const int n_rows = design.n_rows;
    const int n_cols = design.n_cols;
    const int bias = design.bias_col;

    // Penalized weights are kept as scale * z so the per-step ridge decay is
    // O(1); the bias is stored separately and never decayed.
    std::vector<double> z(static_cast<std::size_t>(n_cols), 0.0);
    double scale = 1.0;
    double bias_w = 0.0;

    std::vector<int> order(static_cast<std::size_t>(n_rows));
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(config.seed);

    TrainingReport report;
    report.config = config;

    const double eta0 = config.learning_rate;
    long long t = 0;
    double prev_epoch_loss = std::numeric_limits<double>::infinity();

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        if (config.shuffle)
            std::shuffle(order.begin(), order.end(), rng);

        double loss_sum = 0.0;
        for (int idx : order) {
            const std::size_t begin = design.row_ptr[static_cast<std::size_t>(idx)];
            const std::size_t end = design.row_ptr[static_cast<std::size_t>(idx) + 1];

            double y_hat = 0.0;
            for (std::size_t i = begin; i < end; ++i) {
                int c = design.col[i];
                y_hat += design.val[i] *
                         (c == bias ? bias_w : scale * z[static_cast<std::size_t>(c)]);
            }
            const double eta =
                eta0 / (1.0 + eta0 * config.lambda * static_cast<double>(t));
            ++t;

            loss_sum += loss_value(loss, y_hat, b[static_cast<std::size_t>(idx)]);
            const double g = loss_grad(loss, y_hat, b[static_cast<std::size_t>(idx)]);
            if (!std::isfinite(y_hat) || !std::isfinite(g))
                throw DivergenceError("sgd_fit: non-finite prediction", epoch, eta);

            if (config.lambda > 0.0)
                scale *= 1.0 - eta * config.lambda;
            if (scale <= 0.0 || !std::isfinite(scale))
                throw DivergenceError("sgd_fit: weight scale collapsed", epoch, eta);
            for (std::size_t i = begin; i < end; ++i) {
                int c = design.col[i];
                if (c == bias)
                    bias_w -= eta * g * design.val[i];
                else
                    z[static_cast<std::size_t>(c)] -= eta * g * design.val[i] / scale;
            }
            if (scale < 1e-9) {
                for (double &v : z)
                    v *= scale;
                scale = 1.0;
            }
        }

        double penalty = 0.0;
        for (double v : z)
            penalty += (scale * v) * (scale * v);
        penalty *= 0.5 * config.lambda;
        const double epoch_loss = loss_sum / static_cast<double>(n_rows) + penalty;
        if (!std::isfinite(epoch_loss))
            throw DivergenceError("sgd_fit: non-finite epoch loss", epoch, eta0);
        report.epoch_loss.push_back(epoch_loss);
        report.epochs_run = epoch + 1;

        if (config.early_stop_rel > 0.0 && epoch > 0) {
            double denom = std::max(std::abs(prev_epoch_loss), 1e-12);
            // Stop once the epoch loss has settled; a loss that still moves
            // (including upward, as under divergence) keeps training.
            if (std::abs(prev_epoch_loss - epoch_loss) / denom < config.early_stop_rel)
                break;
        }
        prev_epoch_loss = epoch_loss;
    }

    FitResult result;
    result.weights.resize(static_cast<std::size_t>(n_cols), 0.0);
    for (int c = 0; c < n_cols; ++c)
        result.weights[static_cast<std::size_t>(c)] =
            (c == bias) ? bias_w : scale * z[static_cast<std::size_t>(c)];
    for (double w : result.weights)
        if (!std::isfinite(w))
            throw DivergenceError("sgd_fit: non-finite weight after training",
                                  report.epochs_run, eta0);
    result.report = std::move(report);
    return result;
}

Eigen::VectorXd ridge_closed_form(const Eigen::MatrixXd &A, const Eigen::VectorXd &b,
                                  double lambda, int bias_col) {
    if (A.rows() != b.size())
        throw DataError("ridge_closed_form: dimension mismatch");
    const auto n = A.cols();
    const double m = static_cast<double>(A.rows());

    Eigen::MatrixXd normal = A.transpose() * A;
    for (Eigen::Index j = 0; j < n; ++j) {
        if (j == bias_col)
            continue;
        normal(j, j) += m * lambda;
    }
    Eigen::VectorXd rhs = A.transpose() * b;

    if (lambda > 0.0)
        return normal.ldlt().solve(rhs);

    Eigen::FullPivLU<Eigen::MatrixXd> lu(normal);
    if (!lu.isInvertible())
        throw DataError("ridge_closed_form: singular system with lambda = 0");
    return lu.solve(rhs);
}

} // namespace venuescore
