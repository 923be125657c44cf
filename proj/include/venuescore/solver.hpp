#pragma once

#include "venuescore/design.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace venuescore {

enum class LossKind { Squared, Huber, ModifiedHuber, Logistic };

struct Loss {
    LossKind kind = LossKind::Squared;
    double delta = 1.0; // Huber transition point

    static Loss squared() { return {LossKind::Squared, 0.0}; }
    static Loss huber(double delta = 1.0) { return {LossKind::Huber, delta}; }
    static Loss modified_huber() { return {LossKind::ModifiedHuber, 0.0}; }
    static Loss logistic() { return {LossKind::Logistic, 0.0}; }
};

double loss_value(const Loss &loss, double y_hat, double y);
// d/d y_hat
double loss_grad(const Loss &loss, double y_hat, double y);

struct SolverConfig {
    double lambda = 0.03;
    int epochs = 20;
    double learning_rate = 0.01; // eta_t = eta0 / (1 + eta0 * lambda * t)
    std::uint64_t seed = 1;
    bool shuffle = true;
    double early_stop_rel = 1e-6; // 0 disables early stopping
};

struct TrainingReport {
    std::vector<double> epoch_loss; // mean data loss + ridge penalty, per epoch
    int epochs_run = 0;
    SolverConfig config;
    std::string to_json() const;
};

struct FitResult {
    std::vector<double> weights;
    TrainingReport report;
};

// Seeded, shuffled per-row SGD on mean loss + ridge penalty; the bias column
// is exempt from the penalty. Deterministic for a fixed seed.
FitResult sgd_fit(const SparseMatrix &design, const std::vector<double> &b, const Loss &loss,
                  const SolverConfig &config);

// Dense test oracle: solves (A'A + m*lambda*I) x = A'b with the bias column
// (if any) left unpenalized.
Eigen::VectorXd ridge_closed_form(const Eigen::MatrixXd &A, const Eigen::VectorXd &b,
                                  double lambda, int bias_col = -1);

} // namespace venuescore
