#pragma once

#include <string>
#include <vector>

#include "sentfact/amr.hpp"
#include "sentfact/embed.hpp"
#include "sentfact/factorize.hpp"
#include "sentfact/matrix.hpp"

namespace sentfact {

// Positive weights summing to 1.
struct MassVector {
    std::vector<double> weights;

    static MassVector uniform(std::size_t n);
    void validate() const;
};

// Nonnegative matrix whose row/column sums meet the prescribed marginals
// within the solver's achieved violation.
struct TransportPlan {
    Matrix values;
    MassVector row_marginal, col_marginal;
    double marginal_violation = 0.0;
    int iterations = 0;

    double max_violation() const; // recomputed from values
};

struct OwmdParams {
    double lambda1 = 10.0;
    double lambda2 = 0.03;
    double sigma = 10.0;
    int max_iter = 20;
    double tol = 1e-6;

    void validate() const;
};

// Normalized bag-of-words over unique tokens in first-appearance order.
struct NbowResult {
    std::vector<std::string> tokens;
    std::vector<long long> counts;
    MassVector weights;
};

NbowResult nbow(const std::vector<std::string>& tokens);

struct WmdResult {
    double distance = 0.0;
    TransportPlan plan;
    std::vector<std::string> words_a, words_b; // unique surviving words
    std::size_t dropped_a = 0, dropped_b = 0;  // OOV tokens removed
};

// Word Mover's Distance: exact optimal transport between the two nBOW
// distributions under Euclidean embedding costs. Solved as a
// transportation problem by min-cost flow on integer-scaled costs.
WmdResult wmd(const std::vector<std::string>& s1, const std::vector<std::string>& s2,
              const EmbeddingStore& store);

// Distance from 1-based position (i, j) to the diagonal of an m x n grid:
// |i/m - j/n| / sqrt(1/m^2 + 1/n^2).
double line_distance(int i, int j, int m, int n);

// Gaussian prior over positions: P_ij = exp(-l(i,j)^2 / (2 sigma^2)) / (sigma sqrt(2 pi)).
Matrix prior_matrix(int m, int n, double sigma);

// Position bonus S_ij = lambda1 / ((i/m - j/n)^2 + 1).
double position_bonus(int i, int j, int m, int n, double lambda1);

// Scaling kernel K_ij = P_ij * exp((S_ij - D_ij) / lambda2), computed in
// log space; rows whose exponents would overflow or vanish are rescaled
// by their maximum, which leaves the scaled transport plan unchanged.
// All entries are strictly positive.
Matrix owmd_kernel(const Matrix& cost, const OwmdParams& params);

// Sinkhorn-Knopp scaling: alternates k1 <- alpha ./ (K k2) and
// k2 <- beta ./ (K^T k1) until the marginal violation drops below tol or
// max_iter is reached; returns diag(k1) K diag(k2).
TransportPlan sinkhorn(const Matrix& kernel, const MassVector& alpha, const MassVector& beta,
                       const OwmdParams& params);

struct OwmdResult {
    double distance = 0.0;  // transport cost sum_ij T_ij D_ij
    double objective = 0.0; // cost - lambda1 * I(T) + lambda2 * KL(T || P)
    TransportPlan plan;
    std::size_t dropped_a = 0, dropped_b = 0;
};

// Ordered Word Mover's Distance over raw token sequences: uniform weights
// per position (duplicates keep separate positions), Sinkhorn plan for
// the order-penalized kernel, reported distance is the transport cost.
OwmdResult owmd(const std::vector<std::string>& s1, const std::vector<std::string>& s2,
                const EmbeddingStore& store, const OwmdParams& params = {});

// OWMD over annotated sentences: both sides are first factorized and
// replaced by their root units (the reordered predicate-argument form).
OwmdResult owmd(const AnnotatedSentence& s1, const AnnotatedSentence& s2,
                const EmbeddingStore& store, const OwmdParams& params = {},
                const FactorizationParams& factor_params = {});

enum class Baseline { bow_cosine, avg_embedding_cosine };

// 1 - cosine similarity between bag-of-words count vectors or averaged
// embedding vectors.
double baseline_distance(Baseline kind, const std::vector<std::string>& s1,
                         const std::vector<std::string>& s2, const EmbeddingStore& store);

} // namespace sentfact
