#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "sentfact/matrix.hpp"

namespace sentfact {

// Read-only map from surface token to a d-dimensional vector. Tokens are
// lowercased on load and on lookup. Immutable after load and safe to
// share across concurrent distance computations.
class EmbeddingStore {
public:
    EmbeddingStore() = default;
    EmbeddingStore(std::size_t dim,
                   std::unordered_map<std::string, std::vector<double>> table)
        : dim_(dim), table_(std::move(table)) {}

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return table_.size(); }

    // nullptr when the token (after lowercasing) is out of vocabulary.
    const std::vector<double>* find(const std::string& token) const;

private:
    std::size_t dim_ = 0;
    std::unordered_map<std::string, std::vector<double>> table_;
};

// Loads word2vec text format: a `<count> <dim>` header line, then one
// `<token> <v1> ... <vdim>` line per word. Gzip-compressed files are
// decompressed transparently. vocab_filter, when given, keeps only the
// listed tokens (compared lowercased).
EmbeddingStore load_embeddings(const std::string& path,
                               const std::unordered_set<std::string>* vocab_filter = nullptr);

// Sum of the embeddings of in-vocabulary tokens; an empty or all-OOV
// unit yields a zero vector.
std::vector<double> unit_vector(const std::vector<std::string>& unit,
                                const EmbeddingStore& store);

// Pairwise Euclidean costs between the surviving (in-vocabulary) tokens
// of the two lists; kept_a/kept_b map matrix rows/cols back to the
// original token positions.
struct CostMatrixResult {
    Matrix cost;
    std::vector<std::size_t> kept_a, kept_b;
};

CostMatrixResult cost_matrix(const std::vector<std::string>& a,
                             const std::vector<std::string>& b,
                             const EmbeddingStore& store);

double euclidean_distance(const std::vector<double>& x, const std::vector<double>& y);

} // namespace sentfact
