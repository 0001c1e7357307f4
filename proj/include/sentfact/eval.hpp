#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sentfact/amr.hpp"
#include "sentfact/embed.hpp"
#include "sentfact/factorize.hpp"
#include "sentfact/transport.hpp"

namespace sentfact {

struct EvalRecord {
    std::string id;
    double gold_score = 0.0;
    std::vector<std::string> tokens_a, tokens_b;
    std::optional<AnnotatedSentence> annotated_a, annotated_b;
};

struct CorrelationReport {
    std::string metric_name;
    double pearson_r = 0.0;
    double spearman_rho = 0.0;
    std::size_t n = 0;       // pairs that produced a distance
    std::size_t skipped = 0; // pairs excluded for this metric
};

enum class DatasetFormat { tsv_sts, annotated };

// tsv-sts: `score \t sentence1 \t sentence2` per line, sentences
// whitespace-tokenized and lowercased. annotated: records of an optional
// `# ::id` line, a `# ::score` line, and two annotated-sentence blocks.
// Malformed rows are skipped with a warning on stderr and counted.
std::vector<EvalRecord> load_dataset(const std::string& path, DatasetFormat format,
                                     std::size_t* skipped = nullptr);

// r = cov(X, Y) / (sigma_X sigma_Y), two-pass.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

// Pearson correlation of rank variables; ties get fractional (average) ranks.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

struct MetricConfig {
    std::string name;
    std::function<double(const EvalRecord&)> distance;
};

// Builds one of the standard metrics: "owmd", "wmd", "bow", "avg". OWMD
// uses the factorized root units when a record carries annotations and
// the raw token order otherwise.
MetricConfig make_metric(const std::string& name, const EmbeddingStore& store,
                         const OwmdParams& owmd_params = {},
                         const FactorizationParams& factor_params = {});

// Computes each metric's distance per pair (concurrently; result order is
// fixed by input order) and correlates the negated distances with the
// gold scores. Pairs failing a metric are excluded from that metric's
// correlation and counted in the report.
std::vector<CorrelationReport> evaluate(const std::vector<EvalRecord>& records,
                                        const std::vector<MetricConfig>& metrics,
                                        unsigned threads = 0);

} // namespace sentfact
