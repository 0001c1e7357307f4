#include "sentfact/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <thread>

#include "sentfact/errors.hpp"
#include "sentfact/text.hpp"

namespace sentfact {

namespace {

std::optional<double> parse_finite(const std::string& s) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
        if (used != s.size() || !std::isfinite(v)) return std::nullopt;
        return v;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::vector<EvalRecord> load_tsv(std::istream& in, std::size_t& skipped) {
    std::vector<EvalRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_char(line, '\t');
        if (fields.size() != 3) {
            std::cerr << "warning: line " << line_no << ": expected 3 tab-separated fields, got "
                      << fields.size() << "; skipped\n";
            ++skipped;
            continue;
        }
        auto score = parse_finite(fields[0]);
        if (!score) {
            std::cerr << "warning: line " << line_no << ": non-numeric score '" << fields[0]
                      << "'; skipped\n";
            ++skipped;
            continue;
        }
        EvalRecord rec;
        rec.id = std::to_string(line_no);
        rec.gold_score = *score;
        for (const auto& t : split_whitespace(fields[1])) rec.tokens_a.push_back(to_lower(t));
        for (const auto& t : split_whitespace(fields[2])) rec.tokens_b.push_back(to_lower(t));
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<EvalRecord> load_annotated(std::istream& in, std::size_t& skipped) {
    const std::string id_tag = "# ::id";
    const std::string score_tag = "# ::score";
    const std::string tok_tag = "# ::tok";
    const std::string align_tag = "# ::align";

    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }

    std::vector<EvalRecord> records;
    std::size_t i = 0;
    auto starts_with = [](const std::string& s, const std::string& tag) {
        return s.rfind(tag, 0) == 0;
    };
    while (i < lines.size()) {
        if (!starts_with(lines[i], id_tag) && !starts_with(lines[i], score_tag)) {
            if (!split_whitespace(lines[i]).empty()) {
                std::cerr << "warning: line " << (i + 1) << ": expected '# ::score'; skipped\n";
                ++skipped;
                while (i < lines.size() && !starts_with(lines[i], id_tag) &&
                       !starts_with(lines[i], score_tag))
                    ++i;
                continue;
            }
            ++i;
            continue;
        }
        std::size_t record_start = i;
        EvalRecord rec;
        rec.id = "pair-" + std::to_string(records.size() + skipped + 1);
        try {
            if (starts_with(lines[i], id_tag)) {
                auto fields = split_whitespace(lines[i].substr(id_tag.size()));
                if (!fields.empty()) rec.id = fields.front();
                ++i;
            }
            if (i >= lines.size() || !starts_with(lines[i], score_tag))
                throw FormatError("missing '# ::score' line");
            auto score = parse_finite(lines[i].substr(score_tag.size()));
            if (!score) throw FormatError("non-numeric score '" + lines[i] + "'");
            rec.gold_score = *score;
            ++i;

            auto take_block = [&]() {
                std::vector<std::string> block;
                if (i >= lines.size() || !starts_with(lines[i], tok_tag))
                    throw FormatError("expected '# ::tok' line");
                while (i < lines.size()) {
                    if (split_whitespace(lines[i]).empty())
                        throw FormatError("unterminated annotated block");
                    block.push_back(lines[i]);
                    bool done = starts_with(lines[i], align_tag);
                    ++i;
                    if (done) break;
                }
                if (!starts_with(block.back(), align_tag))
                    throw FormatError("unterminated annotated block");
                return parse_annotated_block(block);
            };
            AnnotatedSentence a = take_block();
            AnnotatedSentence b = take_block();
            rec.tokens_a = a.tokens;
            rec.tokens_b = b.tokens;
            rec.annotated_a = std::move(a);
            rec.annotated_b = std::move(b);
            records.push_back(std::move(rec));
        } catch (const Error& e) {
            std::cerr << "warning: record at line " << (record_start + 1) << ": " << e.what()
                      << "; skipped\n";
            ++skipped;
            i = record_start + 1;
            while (i < lines.size() && !starts_with(lines[i], id_tag) &&
                   !starts_with(lines[i], score_tag))
                ++i;
        }
    }
    return records;
}

// Fractional (average) ranks, 1-based.
std::vector<double> average_ranks(const std::vector<double>& values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
        double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

} // namespace

std::vector<EvalRecord> load_dataset(const std::string& path, DatasetFormat format,
                                     std::size_t* skipped) {
    std::ifstream in(path);
    if (!in) throw FileNotFoundError("cannot open dataset '" + path + "'");
    std::size_t skip_count = 0;
    auto records = format == DatasetFormat::tsv_sts ? load_tsv(in, skip_count)
                                                    : load_annotated(in, skip_count);
    if (records.empty()) throw LoadError("dataset '" + path + "' has no valid rows");
    if (skipped) *skipped = skip_count;
    return records;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size())
        throw std::invalid_argument("correlation inputs must have equal length");
    auto n = x.size();
    if (n < 2) throw UndefinedValueError("correlation needs at least 2 points");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw UndefinedValueError("correlation undefined: zero variance");
    return sxy / (std::sqrt(sxx) * std::sqrt(syy));
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size())
        throw std::invalid_argument("correlation inputs must have equal length");
    return pearson(average_ranks(x), average_ranks(y));
}

MetricConfig make_metric(const std::string& name, const EmbeddingStore& store,
                         const OwmdParams& owmd_params,
                         const FactorizationParams& factor_params) {
    if (name == "owmd")
        return {name, [&store, owmd_params, factor_params](const EvalRecord& rec) {
                    if (rec.annotated_a && rec.annotated_b)
                        return owmd(*rec.annotated_a, *rec.annotated_b, store, owmd_params,
                                    factor_params)
                            .distance;
                    return owmd(rec.tokens_a, rec.tokens_b, store, owmd_params).distance;
                }};
    if (name == "wmd")
        return {name, [&store](const EvalRecord& rec) {
                    return wmd(rec.tokens_a, rec.tokens_b, store).distance;
                }};
    if (name == "bow")
        return {name, [&store](const EvalRecord& rec) {
                    return baseline_distance(Baseline::bow_cosine, rec.tokens_a, rec.tokens_b,
                                             store);
                }};
    if (name == "avg")
        return {name, [&store](const EvalRecord& rec) {
                    return baseline_distance(Baseline::avg_embedding_cosine, rec.tokens_a,
                                             rec.tokens_b, store);
                }};
    throw FormatError("unknown metric '" + name + "' (expected owmd, wmd, bow, or avg)");
}

std::vector<CorrelationReport> evaluate(const std::vector<EvalRecord>& records,
                                        const std::vector<MetricConfig>& metrics,
                                        unsigned threads) {
    if (records.size() < 2) throw EvalError("evaluation needs at least 2 records");
    if (threads == 0)
        threads = std::clamp(std::thread::hardware_concurrency(), 1u, 8u);
    threads = std::min<unsigned>(threads, static_cast<unsigned>(records.size()));

    std::vector<CorrelationReport> reports;
    reports.reserve(metrics.size());
    for (const auto& metric : metrics) {
        std::vector<std::optional<double>> distances(records.size());
        std::atomic<std::size_t> cursor{0};
        auto worker = [&] {
            for (std::size_t i = cursor.fetch_add(1); i < records.size();
                 i = cursor.fetch_add(1)) {
                try {
                    double d = metric.distance(records[i]);
                    if (std::isfinite(d)) distances[i] = d;
                } catch (const Error&) {
                    // pair excluded for this metric
                }
            }
        };
        std::vector<std::thread> pool;
        for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
        worker();
        for (auto& t : pool) t.join();

        std::vector<double> x, y;
        for (std::size_t i = 0; i < records.size(); ++i)
            if (distances[i]) {
                x.push_back(-*distances[i]); // higher similarity ~ higher gold score
                y.push_back(records[i].gold_score);
            }
        if (x.size() < 2)
            throw EvalError("metric '" + metric.name + "': fewer than 2 successful pairs");

        CorrelationReport report;
        report.metric_name = metric.name;
        report.n = x.size();
        report.skipped = records.size() - x.size();
        report.pearson_r = pearson(x, y);
        report.spearman_rho = spearman(x, y);
        reports.push_back(std::move(report));
    }
    return reports;
}

} // namespace sentfact
