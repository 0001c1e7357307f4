#include "sentfact/embed.hpp"

#include <zlib.h>

#include <cmath>
#include <cstdio>
#include <sstream>

#include "sentfact/errors.hpp"
#include "sentfact/text.hpp"

namespace sentfact {

namespace {

// Reads whole lines through zlib; plain files pass through unchanged.
class GzLineReader {
public:
    explicit GzLineReader(const std::string& path) : file_(gzopen(path.c_str(), "rb")) {
        if (!file_) throw FileNotFoundError("cannot open embedding file '" + path + "'");
    }
    ~GzLineReader() {
        if (file_) gzclose(file_);
    }
    GzLineReader(const GzLineReader&) = delete;
    GzLineReader& operator=(const GzLineReader&) = delete;

    bool next_line(std::string& out) {
        out.clear();
        char buffer[4096];
        bool got_any = false;
        while (gzgets(file_, buffer, sizeof(buffer))) {
            got_any = true;
            out += buffer;
            if (!out.empty() && out.back() == '\n') {
                out.pop_back();
                if (!out.empty() && out.back() == '\r') out.pop_back();
                return true;
            }
        }
        return got_any;
    }

private:
    gzFile file_;
};

} // namespace

const std::vector<double>* EmbeddingStore::find(const std::string& token) const {
    auto it = table_.find(to_lower(token));
    return it == table_.end() ? nullptr : &it->second;
}

EmbeddingStore load_embeddings(const std::string& path,
                               const std::unordered_set<std::string>* vocab_filter) {
    GzLineReader reader(path);
    std::string line;
    if (!reader.next_line(line))
        throw LoadError("embedding file '" + path + "' is empty");

    std::istringstream header(line);
    long long count = 0, dim = 0;
    if (!(header >> count >> dim) || count < 0 || dim < 1)
        throw LoadError("embedding file '" + path + "': malformed header line '" + line + "'");

    std::unordered_map<std::string, std::vector<double>> table;
    table.reserve(static_cast<std::size_t>(count));
    std::size_t line_no = 1;
    while (reader.next_line(line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream in(line);
        std::string token;
        in >> token;
        std::vector<double> vec;
        vec.reserve(static_cast<std::size_t>(dim));
        double v;
        while (in >> v) vec.push_back(v);
        if (vec.size() != static_cast<std::size_t>(dim))
            throw LoadError("embedding file '" + path + "' line " + std::to_string(line_no) +
                            ": expected " + std::to_string(dim) + " values, got " +
                            std::to_string(vec.size()));
        std::string key = to_lower(token);
        if (vocab_filter && !vocab_filter->count(key)) continue;
        table.try_emplace(std::move(key), std::move(vec)); // first occurrence wins
    }
    return EmbeddingStore(static_cast<std::size_t>(dim), std::move(table));
}

std::vector<double> unit_vector(const std::vector<std::string>& unit,
                                const EmbeddingStore& store) {
    std::vector<double> sum(store.dim(), 0.0);
    for (const auto& token : unit)
        if (const auto* vec = store.find(token))
            for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += (*vec)[i];
    return sum;
}

double euclidean_distance(const std::vector<double>& x, const std::vector<double>& y) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double d = x[i] - y[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

CostMatrixResult cost_matrix(const std::vector<std::string>& a,
                             const std::vector<std::string>& b,
                             const EmbeddingStore& store) {
    CostMatrixResult result;
    std::vector<const std::vector<double>*> va, vb;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (const auto* vec = store.find(a[i])) {
            va.push_back(vec);
            result.kept_a.push_back(i);
        }
    for (std::size_t j = 0; j < b.size(); ++j)
        if (const auto* vec = store.find(b[j])) {
            vb.push_back(vec);
            result.kept_b.push_back(j);
        }
    if (va.empty() || vb.empty())
        throw EmptyInputError("sentence has no in-vocabulary tokens");

    result.cost = Matrix(va.size(), vb.size());
    for (std::size_t i = 0; i < va.size(); ++i)
        for (std::size_t j = 0; j < vb.size(); ++j)
            result.cost(i, j) = euclidean_distance(*va[i], *vb[j]);
    return result;
}

} // namespace sentfact
