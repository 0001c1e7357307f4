// sentfact: hierarchical sentence factorization and order-preserving
// transport distances between sentences.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sentfact/amr.hpp"
#include "sentfact/errors.hpp"
#include "sentfact/eval.hpp"
#include "sentfact/factorize.hpp"
#include "sentfact/text.hpp"
#include "sentfact/transport.hpp"

namespace {

using nlohmann::json;
using namespace sentfact;

struct CommonOptions {
    std::string embeddings;
    OwmdParams owmd_params;
    FactorizationParams factor_params;
    bool json_output = false;
};

void add_param_flags(CLI::App* cmd, CommonOptions& opts, bool with_embeddings) {
    if (with_embeddings)
        cmd->add_option("--embeddings", opts.embeddings, "word2vec text embedding file")
            ->envname("SENTFACT_EMBEDDINGS");
    cmd->add_option("--lambda1", opts.owmd_params.lambda1, "position bonus weight");
    cmd->add_option("--lambda2", opts.owmd_params.lambda2, "prior divergence weight");
    cmd->add_option("--sigma", opts.owmd_params.sigma, "diagonal prior width");
    cmd->add_option("--max-iter", opts.owmd_params.max_iter, "Sinkhorn iteration cap");
    cmd->add_option("--tol", opts.owmd_params.tol, "marginal violation tolerance");
    cmd->add_option("--depth", opts.factor_params.max_depth, "factorization tree depth");
    cmd->add_option("--k", opts.factor_params.branching, "branching factor per node");
    cmd->add_flag("--json", opts.json_output, "structured output on stdout");
}

std::string format_distance(double d) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.6f", d);
    return buffer;
}

json params_to_json(const OwmdParams& p) {
    return {{"lambda1", p.lambda1}, {"lambda2", p.lambda2},   {"sigma", p.sigma},
            {"maxIter", p.max_iter}, {"tol", p.tol}};
}

json plan_to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

void print_plan(std::ostream& out, const Matrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out << ' ';
            out << m(i, j);
        }
        out << '\n';
    }
}

EmbeddingStore load_store(const CommonOptions& opts) {
    if (opts.embeddings.empty())
        throw LoadError("no embedding file given (--embeddings or SENTFACT_EMBEDDINGS)");
    return load_embeddings(opts.embeddings);
}

int run_factorize(const std::string& input, const std::string& output,
                  const CommonOptions& opts) {
    opts.factor_params.validate();
    auto sentences = read_annotated_file(input);

    std::ofstream file;
    if (!output.empty()) {
        file.open(output);
        if (!file) throw LoadError("cannot write output file '" + output + "'");
    }
    std::ostream& out = output.empty() ? std::cout : file;

    json doc = json::array();
    for (std::size_t s = 0; s < sentences.size(); ++s) {
        FactorNode tree = factorize_sentence(sentences[s], opts.factor_params);
        auto levels = multiscale_units(tree, opts.factor_params);
        if (opts.json_output) {
            json entry;
            entry["tree"] = json::array();
            for (const auto& line : tree_export_lines(tree)) {
                auto tab = line.find('\t');
                entry["tree"].push_back(
                    {{"path", line.substr(0, tab)},
                     {"unit", split_whitespace(line.substr(tab + 1))}});
            }
            entry["multiscale"] = json::array();
            for (const auto& level : levels) {
                json units = json::array();
                for (const auto& unit : level) units.push_back(unit);
                entry["multiscale"].push_back(std::move(units));
            }
            doc.push_back(std::move(entry));
        } else {
            if (s) out << '\n';
            for (const auto& line : tree_export_lines(tree)) out << line << '\n';
            for (const auto& line : multiscale_export_lines(levels)) out << line << '\n';
        }
    }
    if (opts.json_output) out << doc.dump(2) << '\n';
    return 0;
}

int run_distance(const std::string& metric, const std::string& text_a,
                 const std::string& text_b, const std::string& file_a,
                 const std::string& file_b, bool dump_plan, const CommonOptions& opts) {
    bool raw = !text_a.empty() || !text_b.empty();
    bool annotated = !file_a.empty() || !file_b.empty();
    if (raw == annotated)
        throw FormatError("give either --a/--b or --a-file/--b-file");
    if (raw && (text_a.empty() || text_b.empty()))
        throw FormatError("both --a and --b are required");
    if (annotated && (file_a.empty() || file_b.empty()))
        throw FormatError("both --a-file and --b-file are required");

    double distance = 0.0;
    std::optional<double> objective;
    std::optional<Matrix> plan;

    if (metric == "bow" && raw) {
        auto ta = split_whitespace(to_lower(text_a));
        auto tb = split_whitespace(to_lower(text_b));
        distance = baseline_distance(Baseline::bow_cosine, ta, tb, EmbeddingStore());
    } else {
        EmbeddingStore store = load_store(opts);
        std::vector<std::string> ta, tb;
        std::optional<AnnotatedSentence> ann_a, ann_b;
        if (raw) {
            ta = split_whitespace(to_lower(text_a));
            tb = split_whitespace(to_lower(text_b));
        } else {
            auto sa = read_annotated_file(file_a);
            auto sb = read_annotated_file(file_b);
            if (sa.empty() || sb.empty()) throw FormatError("annotated input file is empty");
            ann_a = sa.front();
            ann_b = sb.front();
            ta = ann_a->tokens;
            tb = ann_b->tokens;
        }

        if (metric == "owmd") {
            OwmdResult r;
            if (ann_a && ann_b) {
                r = owmd(*ann_a, *ann_b, store, opts.owmd_params, opts.factor_params);
            } else {
                std::cerr << "warning: input is not annotated; OWMD runs on the raw token order"
                          << std::endl;
                r = owmd(ta, tb, store, opts.owmd_params);
            }
            distance = r.distance;
            objective = r.objective;
            plan = r.plan.values;
        } else if (metric == "wmd") {
            auto r = wmd(ta, tb, store);
            distance = r.distance;
            plan = r.plan.values;
        } else if (metric == "bow") {
            distance = baseline_distance(Baseline::bow_cosine, ta, tb, store);
        } else if (metric == "avg") {
            distance = baseline_distance(Baseline::avg_embedding_cosine, ta, tb, store);
        } else {
            throw FormatError("unknown metric '" + metric + "' (expected owmd, wmd, bow, avg)");
        }
    }

    if (opts.json_output) {
        json doc = {{"metric", metric},
                    {"distance", distance},
                    {"params", params_to_json(opts.owmd_params)}};
        if (objective) doc["objective"] = *objective;
        if (dump_plan && plan) doc["plan"] = plan_to_json(*plan);
        std::cout << doc.dump(2) << '\n';
    } else {
        std::cout << metric << '\t' << format_distance(distance) << '\n';
        if (dump_plan && plan) print_plan(std::cout, *plan);
    }
    return 0;
}

int run_eval(const std::string& input, const std::string& format_name,
             const std::string& metric_list, const CommonOptions& opts) {
    DatasetFormat format;
    if (format_name == "tsv-sts")
        format = DatasetFormat::tsv_sts;
    else if (format_name == "annotated")
        format = DatasetFormat::annotated;
    else
        throw FormatError("unknown dataset format '" + format_name +
                          "' (expected tsv-sts or annotated)");

    std::vector<std::string> metric_names;
    for (const auto& name : split_char(metric_list, ','))
        if (!name.empty()) metric_names.push_back(name);
    if (metric_names.empty()) throw FormatError("no metrics requested");

    std::size_t skipped_rows = 0;
    auto records = load_dataset(input, format, &skipped_rows);
    if (skipped_rows)
        std::cerr << "warning: skipped " << skipped_rows << " malformed dataset rows\n";

    bool needs_store = false;
    for (const auto& name : metric_names)
        if (name != "bow") needs_store = true;
    EmbeddingStore store;
    if (needs_store) store = load_store(opts);

    if (format == DatasetFormat::tsv_sts)
        for (const auto& name : metric_names)
            if (name == "owmd") {
                std::cerr << "warning: dataset is not annotated; "
                             "OWMD runs on the raw token order\n";
                break;
            }

    std::vector<MetricConfig> metrics;
    for (const auto& name : metric_names)
        metrics.push_back(make_metric(name, store, opts.owmd_params, opts.factor_params));

    auto reports = evaluate(records, metrics);

    if (opts.json_output) {
        json doc = json::array();
        for (const auto& r : reports)
            doc.push_back({{"metric", r.metric_name},
                           {"n", r.n},
                           {"skipped", r.skipped},
                           {"pearson", r.pearson_r},
                           {"spearman", r.spearman_rho}});
        std::cout << doc.dump(2) << '\n';
    } else {
        for (const auto& r : reports)
            std::cout << r.metric_name << '\t' << r.n << '\t' << format_distance(r.pearson_r)
                      << '\t' << format_distance(r.spearman_rho) << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hierarchical sentence factorization and ordered transport distances"};
    app.require_subcommand(1);

    CommonOptions fact_opts, dist_opts, eval_opts;

    auto* fact = app.add_subcommand("factorize",
                                    "factorize annotated sentences into semantic-unit trees");
    std::string fact_input, fact_output;
    fact->add_option("input", fact_input, "annotated sentence file")->required();
    fact->add_option("--output", fact_output, "write exports to a file instead of stdout");
    add_param_flags(fact, fact_opts, false);

    auto* dist = app.add_subcommand("distance", "distance between two sentences");
    std::string dist_metric = "owmd", dist_a, dist_b, dist_a_file, dist_b_file;
    bool dump_plan = false;
    dist->add_option("--metric", dist_metric, "owmd, wmd, bow, or avg");
    dist->add_option("--a", dist_a, "first sentence as raw text");
    dist->add_option("--b", dist_b, "second sentence as raw text");
    dist->add_option("--a-file", dist_a_file, "first sentence as an annotated file");
    dist->add_option("--b-file", dist_b_file, "second sentence as an annotated file");
    dist->add_flag("--dump-plan", dump_plan, "print the transport plan matrix");
    add_param_flags(dist, dist_opts, true);

    auto* eval_cmd = app.add_subcommand("eval", "correlate metric distances with gold scores");
    std::string eval_input, eval_format = "tsv-sts", eval_metrics = "owmd";
    eval_cmd->add_option("input", eval_input, "dataset file")->required();
    eval_cmd->add_option("--format", eval_format, "tsv-sts or annotated");
    eval_cmd->add_option("--metrics", eval_metrics, "comma-separated metric list");
    add_param_flags(eval_cmd, eval_opts, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (fact->parsed()) return run_factorize(fact_input, fact_output, fact_opts);
        if (dist->parsed())
            return run_distance(dist_metric, dist_a, dist_b, dist_a_file, dist_b_file,
                                dump_plan, dist_opts);
        if (eval_cmd->parsed()) return run_eval(eval_input, eval_format, eval_metrics, eval_opts);
    } catch (const sentfact::FileNotFoundError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const sentfact::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
