#include "sentfact/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <unordered_map>

#include "sentfact/errors.hpp"
#include "sentfact/text.hpp"

namespace sentfact {

namespace {

constexpr double kCostScale = 1e9; // integer scaling for exact min-cost flow

// Min-cost flow by successive shortest paths with Johnson potentials.
// Costs are nonnegative, so plain Dijkstra works from the start.
class MinCostFlow {
public:
    explicit MinCostFlow(int nodes) : graph_(nodes) {}

    void add_edge(int from, int to, long long cap, long long cost) {
        graph_[from].push_back({to, cap, cost, static_cast<int>(graph_[to].size())});
        graph_[to].push_back({from, 0, -cost, static_cast<int>(graph_[from].size()) - 1});
    }

    // Sends up to max_flow units; returns (flow sent, total cost).
    std::pair<long long, long long> solve(int source, int sink, long long max_flow) {
        const long long inf = std::numeric_limits<long long>::max();
        std::vector<long long> potential(graph_.size(), 0);
        long long flow = 0, cost = 0;
        while (flow < max_flow) {
            std::vector<long long> dist(graph_.size(), inf);
            std::vector<int> prev_node(graph_.size(), -1), prev_edge(graph_.size(), -1);
            using State = std::pair<long long, int>;
            std::priority_queue<State, std::vector<State>, std::greater<>> queue;
            dist[source] = 0;
            queue.emplace(0, source);
            while (!queue.empty()) {
                auto [d, u] = queue.top();
                queue.pop();
                if (d > dist[u]) continue;
                for (std::size_t e = 0; e < graph_[u].size(); ++e) {
                    const Edge& edge = graph_[u][e];
                    if (edge.cap <= 0) continue;
                    long long nd = d + edge.cost + potential[u] - potential[edge.to];
                    if (nd < dist[edge.to]) {
                        dist[edge.to] = nd;
                        prev_node[edge.to] = u;
                        prev_edge[edge.to] = static_cast<int>(e);
                        queue.emplace(nd, edge.to);
                    }
                }
            }
            if (dist[sink] == inf) break; // no augmenting path left
            for (std::size_t v = 0; v < graph_.size(); ++v)
                if (dist[v] < inf) potential[v] += dist[v];
            long long bottleneck = max_flow - flow;
            for (int v = sink; v != source; v = prev_node[v])
                bottleneck = std::min(bottleneck, graph_[prev_node[v]][prev_edge[v]].cap);
            for (int v = sink; v != source; v = prev_node[v]) {
                Edge& edge = graph_[prev_node[v]][prev_edge[v]];
                edge.cap -= bottleneck;
                graph_[v][edge.rev].cap += bottleneck;
                cost += bottleneck * edge.cost;
            }
            flow += bottleneck;
        }
        return {flow, cost};
    }

    long long flow_on(int from, int edge_index) const {
        const Edge& edge = graph_[from][edge_index];
        return graph_[edge.to][edge.rev].cap; // residual of the reverse arc
    }

private:
    struct Edge {
        int to;
        long long cap, cost;
        int rev;
    };
    std::vector<std::vector<Edge>> graph_;
};

std::vector<std::string> lowered(const std::vector<std::string>& tokens) {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(to_lower(t));
    return out;
}

std::vector<std::string> filter_in_vocab(const std::vector<std::string>& tokens,
                                         const EmbeddingStore& store, std::size_t& dropped) {
    std::vector<std::string> kept;
    kept.reserve(tokens.size());
    for (const auto& t : tokens)
        if (store.find(t))
            kept.push_back(t);
    dropped = tokens.size() - kept.size();
    return kept;
}

double dot(const std::vector<double>& x, const std::vector<double>& y) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
    return acc;
}

double cosine_distance(const std::vector<double>& x, const std::vector<double>& y) {
    double nx = std::sqrt(dot(x, x)), ny = std::sqrt(dot(y, y));
    if (nx == 0.0 || ny == 0.0)
        throw UndefinedValueError("cosine similarity undefined for a zero vector");
    return 1.0 - dot(x, y) / (nx * ny);
}

OwmdResult owmd_impl(const std::vector<std::string>& s1, const std::vector<std::string>& s2,
                     const EmbeddingStore& store, const OwmdParams& params) {
    OwmdResult result;
    auto kept1 = filter_in_vocab(s1, store, result.dropped_a);
    auto kept2 = filter_in_vocab(s2, store, result.dropped_b);
    if (kept1.empty() || kept2.empty())
        throw EmptyInputError("sentence has no in-vocabulary tokens");

    auto m = kept1.size();
    auto n = kept2.size();
    Matrix cost(m, n);
    std::vector<const std::vector<double>*> va(m), vb(n);
    for (std::size_t i = 0; i < m; ++i) va[i] = store.find(kept1[i]);
    for (std::size_t j = 0; j < n; ++j) vb[j] = store.find(kept2[j]);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) cost(i, j) = euclidean_distance(*va[i], *vb[j]);

    Matrix kernel = owmd_kernel(cost, params);
    result.plan = sinkhorn(kernel, MassVector::uniform(m), MassVector::uniform(n), params);

    const Matrix& plan = result.plan.values;
    Matrix prior = prior_matrix(static_cast<int>(m), static_cast<int>(n), params.sigma);
    double transport_cost = 0.0, homogeneity = 0.0, kl = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double t = plan(i, j);
            transport_cost += t * cost(i, j);
            homogeneity += t / params.lambda1 *
                           position_bonus(static_cast<int>(i) + 1, static_cast<int>(j) + 1,
                                          static_cast<int>(m), static_cast<int>(n),
                                          params.lambda1);
            if (t > 0.0) kl += t * (std::log(t) - std::log(prior(i, j)));
        }
    result.distance = transport_cost;
    result.objective = transport_cost - params.lambda1 * homogeneity + params.lambda2 * kl;
    return result;
}

OwmdResult transpose_result(OwmdResult r) {
    r.plan.values = r.plan.values.transposed();
    std::swap(r.plan.row_marginal, r.plan.col_marginal);
    std::swap(r.dropped_a, r.dropped_b);
    return r;
}

} // namespace

MassVector MassVector::uniform(std::size_t n) {
    MassVector v;
    v.weights.assign(n, 1.0 / static_cast<double>(n));
    return v;
}

void MassVector::validate() const {
    double sum = 0.0;
    for (double w : weights) {
        if (!(w > 0.0)) throw FormatError("mass vector entries must be positive");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw FormatError("mass vector must sum to 1");
}

double TransportPlan::max_violation() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < values.rows(); ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < values.cols(); ++j) sum += values(i, j);
        worst = std::max(worst, std::abs(sum - row_marginal.weights[i]));
    }
    for (std::size_t j = 0; j < values.cols(); ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < values.rows(); ++i) sum += values(i, j);
        worst = std::max(worst, std::abs(sum - col_marginal.weights[j]));
    }
    return worst;
}

void OwmdParams::validate() const {
    if (!(lambda1 > 0.0)) throw FormatError("lambda1 must be positive");
    if (!(lambda2 > 0.0)) throw FormatError("lambda2 must be positive");
    if (!(sigma > 0.0)) throw FormatError("sigma must be positive");
    if (max_iter < 1) throw FormatError("max iterations must be >= 1");
    if (!(tol > 0.0)) throw FormatError("tolerance must be positive");
}

NbowResult nbow(const std::vector<std::string>& tokens) {
    if (tokens.empty()) throw EmptyInputError("cannot build nBOW of an empty token list");
    NbowResult result;
    std::unordered_map<std::string, std::size_t> index;
    for (const auto& t : tokens) {
        auto [it, inserted] = index.try_emplace(t, result.tokens.size());
        if (inserted) {
            result.tokens.push_back(t);
            result.counts.push_back(0);
        }
        ++result.counts[it->second];
    }
    auto total = static_cast<double>(tokens.size());
    result.weights.weights.reserve(result.counts.size());
    for (long long c : result.counts)
        result.weights.weights.push_back(static_cast<double>(c) / total);
    return result;
}

WmdResult wmd(const std::vector<std::string>& s1, const std::vector<std::string>& s2,
              const EmbeddingStore& store) {
    WmdResult result;
    auto kept1 = filter_in_vocab(lowered(s1), store, result.dropped_a);
    auto kept2 = filter_in_vocab(lowered(s2), store, result.dropped_b);
    if (kept1.empty() || kept2.empty())
        throw EmptyInputError("sentence has no in-vocabulary tokens");

    NbowResult n1 = nbow(kept1), n2 = nbow(kept2);
    result.words_a = n1.tokens;
    result.words_b = n2.tokens;
    auto m = n1.tokens.size();
    auto n = n2.tokens.size();

    Matrix cost(m, n);
    for (std::size_t i = 0; i < m; ++i) {
        const auto* va = store.find(n1.tokens[i]);
        for (std::size_t j = 0; j < n; ++j)
            cost(i, j) = euclidean_distance(*va, *store.find(n2.tokens[j]));
    }

    // Integer transportation problem: supplies c_i * total2, demands
    // d_j * total1; both sides sum to total1 * total2.
    long long total1 = static_cast<long long>(kept1.size());
    long long total2 = static_cast<long long>(kept2.size());
    long long grid = total1 * total2;
    int source = 0, sink = static_cast<int>(m + n) + 1;
    MinCostFlow flow(static_cast<int>(m + n) + 2);
    for (std::size_t i = 0; i < m; ++i)
        flow.add_edge(source, static_cast<int>(i) + 1, n1.counts[i] * total2, 0);
    std::vector<std::vector<int>> cell_edge(m, std::vector<int>(n));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            cell_edge[i][j] = static_cast<int>(j) + 1; // edge index within row node
            flow.add_edge(static_cast<int>(i) + 1, static_cast<int>(m + j) + 1, grid,
                          std::llround(cost(i, j) * kCostScale));
        }
    for (std::size_t j = 0; j < n; ++j)
        flow.add_edge(static_cast<int>(m + j) + 1, sink, n2.counts[j] * total1, 0);

    auto [sent, int_cost] = flow.solve(source, sink, grid);
    if (sent != grid)
        throw NumericError("transportation problem is infeasible"); // cannot happen
    result.distance =
        static_cast<double>(int_cost) / (kCostScale * static_cast<double>(grid));

    result.plan.values = Matrix(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            result.plan.values(i, j) =
                static_cast<double>(flow.flow_on(static_cast<int>(i) + 1, cell_edge[i][j])) /
                static_cast<double>(grid);
    result.plan.row_marginal = n1.weights;
    result.plan.col_marginal = n2.weights;
    result.plan.iterations = 0;
    result.plan.marginal_violation = result.plan.max_violation();
    return result;
}

double line_distance(int i, int j, int m, int n) {
    double di = static_cast<double>(i) / m;
    double dj = static_cast<double>(j) / n;
    return std::abs(di - dj) /
           std::sqrt(1.0 / (static_cast<double>(m) * m) + 1.0 / (static_cast<double>(n) * n));
}

Matrix prior_matrix(int m, int n, double sigma) {
    Matrix prior(static_cast<std::size_t>(m), static_cast<std::size_t>(n));
    double norm = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
    for (int i = 1; i <= m; ++i)
        for (int j = 1; j <= n; ++j) {
            double l = line_distance(i, j, m, n);
            prior(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)) =
                norm * std::exp(-l * l / (2.0 * sigma * sigma));
        }
    return prior;
}

double position_bonus(int i, int j, int m, int n, double lambda1) {
    double d = static_cast<double>(i) / m - static_cast<double>(j) / n;
    return lambda1 / (d * d + 1.0);
}

Matrix owmd_kernel(const Matrix& cost, const OwmdParams& params) {
    params.validate();
    auto m = static_cast<int>(cost.rows());
    auto n = static_cast<int>(cost.cols());
    double log_norm = -std::log(params.sigma * std::sqrt(2.0 * std::numbers::pi));

    Matrix log_kernel(cost.rows(), cost.cols());
    for (int i = 1; i <= m; ++i)
        for (int j = 1; j <= n; ++j) {
            double l = line_distance(i, j, m, n);
            double log_prior = log_norm - l * l / (2.0 * params.sigma * params.sigma);
            double bonus = position_bonus(i, j, m, n, params.lambda1);
            log_kernel(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)) =
                log_prior +
                (bonus - cost(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1))) /
                    params.lambda2;
        }

    // Rescale a row by its maximum only when exponentiating it directly
    // would overflow or vanish; diag(r) K leaves the Sinkhorn plan intact.
    constexpr double kSafeExponent = 600.0;
    Matrix kernel(cost.rows(), cost.cols());
    for (std::size_t i = 0; i < cost.rows(); ++i) {
        double row_max = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < cost.cols(); ++j)
            row_max = std::max(row_max, log_kernel(i, j));
        double shift = std::abs(row_max) > kSafeExponent ? row_max : 0.0;
        for (std::size_t j = 0; j < cost.cols(); ++j) {
            double value = std::exp(log_kernel(i, j) - shift);
            kernel(i, j) = value > 0.0 ? value : std::numeric_limits<double>::min();
        }
    }
    return kernel;
}

TransportPlan sinkhorn(const Matrix& kernel, const MassVector& alpha, const MassVector& beta,
                       const OwmdParams& params) {
    params.validate();
    auto m = kernel.rows();
    auto n = kernel.cols();
    if (alpha.weights.size() != m || beta.weights.size() != n)
        throw FormatError("marginal sizes do not match the kernel");

    auto check_finite = [](const std::vector<double>& v) {
        for (double x : v)
            if (!std::isfinite(x))
                throw NumericError(
                    "sinkhorn scaling produced non-finite values; consider a larger lambda2");
    };

    std::vector<double> k1(m, 1.0), k2(n, 1.0);
    double violation = std::numeric_limits<double>::infinity();
    int iterations = 0;
    for (int it = 0; it < params.max_iter; ++it) {
        ++iterations;
        std::vector<double> kk2 = kernel.multiply(k2);
        for (std::size_t i = 0; i < m; ++i) k1[i] = alpha.weights[i] / kk2[i];
        check_finite(k1);
        std::vector<double> ktk1 = kernel.multiply_transposed(k1);
        for (std::size_t j = 0; j < n; ++j) k2[j] = beta.weights[j] / ktk1[j];
        check_finite(k2);

        // Columns are exact right after the k2 update; rows carry the error.
        kk2 = kernel.multiply(k2);
        violation = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            violation = std::max(violation, std::abs(k1[i] * kk2[i] - alpha.weights[i]));
        if (violation <= params.tol) break;
    }

    TransportPlan plan;
    plan.values = Matrix(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) plan.values(i, j) = k1[i] * kernel(i, j) * k2[j];
    plan.row_marginal = alpha;
    plan.col_marginal = beta;
    plan.iterations = iterations;
    plan.marginal_violation = violation;
    return plan;
}

OwmdResult owmd(const std::vector<std::string>& s1, const std::vector<std::string>& s2,
                const EmbeddingStore& store, const OwmdParams& params) {
    params.validate();
    auto low1 = lowered(s1);
    auto low2 = lowered(s2);
    // Fixed orientation makes owmd(a, b) and owmd(b, a) run the identical
    // arithmetic, so the metric is exactly symmetric.
    if (low2 < low1) return transpose_result(owmd_impl(low2, low1, store, params));
    return owmd_impl(low1, low2, store, params);
}

OwmdResult owmd(const AnnotatedSentence& s1, const AnnotatedSentence& s2,
                const EmbeddingStore& store, const OwmdParams& params,
                const FactorizationParams& factor_params) {
    Unit root1 = factorize_sentence(s1, factor_params).unit;
    Unit root2 = factorize_sentence(s2, factor_params).unit;
    return owmd(root1, root2, store, params);
}

double baseline_distance(Baseline kind, const std::vector<std::string>& s1,
                         const std::vector<std::string>& s2, const EmbeddingStore& store) {
    if (s1.empty() || s2.empty())
        throw EmptyInputError("cannot compare an empty sentence");
    auto low1 = lowered(s1);
    auto low2 = lowered(s2);
    if (kind == Baseline::bow_cosine) {
        std::unordered_map<std::string, double> c1, c2;
        for (const auto& t : low1) c1[t] += 1.0;
        for (const auto& t : low2) c2[t] += 1.0;
        double cross = 0.0, n1 = 0.0, n2 = 0.0;
        for (const auto& [t, c] : c1) {
            n1 += c * c;
            if (auto it = c2.find(t); it != c2.end()) cross += c * it->second;
        }
        for (const auto& [t, c] : c2) n2 += c * c;
        return 1.0 - cross / (std::sqrt(n1) * std::sqrt(n2));
    }

    std::size_t dropped1 = 0, dropped2 = 0;
    auto kept1 = filter_in_vocab(low1, store, dropped1);
    auto kept2 = filter_in_vocab(low2, store, dropped2);
    if (kept1.empty() || kept2.empty())
        throw UndefinedValueError("averaged embedding undefined: no in-vocabulary tokens");
    auto mean = [&](const std::vector<std::string>& tokens) {
        std::vector<double> v = unit_vector(tokens, store);
        for (double& x : v) x /= static_cast<double>(tokens.size());
        return v;
    };
    return cosine_distance(mean(kept1), mean(kept2));
}

} // namespace sentfact
