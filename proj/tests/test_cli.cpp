// End-to-end checks of the sentfact binary: exit codes, output formats,
// and determinism. SENTFACT_BIN and SENTFACT_TESTDATA_DIR come from the
// build.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "sentfact/eval.hpp"
#include "sentfact/text.hpp"
#include "sentfact/transport.hpp"

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

std::string data_path(const std::string& name) {
    return std::string(SENTFACT_TESTDATA_DIR) + "/" + name;
}

RunResult run(const std::string& args) {
    std::string command = std::string(SENTFACT_BIN) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult result;
    std::array<char, 4096> buffer{};
    std::size_t n = 0;
    while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
        result.out.append(buffer.data(), n);
    int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

} // namespace

TEST_CASE("factorize emits the tree and multiscale exports") {
    auto r = run("factorize " + data_path("fig1_a.annot"));
    CHECK(r.exit_code == 0);
    auto lines = lines_of(r.out);
    REQUIRE(!lines.empty());
    CHECK(lines[0] == "0\tchase Tom Jerry little yard big");
    bool has_d1 = false, has_d2 = false;
    for (const auto& line : lines) {
        if (line == "d1\tchase|Tom|Jerry little|yard big") has_d1 = true;
        if (line == "d2\tchase|-|-|-|Tom|-|-|-|Jerry|little|-|-|yard|big|-|-") has_d2 = true;
    }
    CHECK(has_d1);
    CHECK(has_d2);
}

TEST_CASE("factorize with --depth 1 exports depths 0..1 only") {
    auto r = run("factorize --depth 1 " + data_path("fig1_a.annot"));
    CHECK(r.exit_code == 0);
    bool has_d0 = false, has_d1 = false, has_d2 = false;
    for (const auto& line : lines_of(r.out)) {
        if (line.rfind("d0\t", 0) == 0) has_d0 = true;
        if (line.rfind("d1\t", 0) == 0) has_d1 = true;
        if (line.rfind("d2\t", 0) == 0) has_d2 = true;
    }
    CHECK(has_d0);
    CHECK(has_d1);
    CHECK_FALSE(has_d2);
}

TEST_CASE("factorize exits 2 on a missing input file") {
    auto r = run("factorize /nonexistent/input.annot");
    CHECK(r.exit_code == 2);
    CHECK(r.out.empty()); // diagnostics go to stderr
}

TEST_CASE("distance wmd of identical sentences prints zero") {
    auto r = run("distance --metric wmd --embeddings " + data_path("toy_embeddings.txt") +
                 " --a \"tom chase jerry\" --b \"tom chase jerry\"");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "wmd\t0.000000\n");
}

TEST_CASE("permuted sentences: wmd zero, owmd positive") {
    std::string common = " --embeddings " + data_path("toy_embeddings.txt") +
                         " --a \"morty is laughing at rick\" --b \"rick is laughing at morty\"";
    auto w = run("distance --metric wmd" + common);
    CHECK(w.exit_code == 0);
    CHECK(w.out == "wmd\t0.000000\n");

    auto o = run("distance --metric owmd" + common);
    CHECK(o.exit_code == 0);
    auto fields = lines_of(o.out);
    REQUIRE(!fields.empty());
    double value = std::stod(fields[0].substr(fields[0].find('\t') + 1));
    CHECK(value > 0.0);
}

TEST_CASE("distance on annotated files uses the factorized root units") {
    auto r = run("distance --metric owmd --embeddings " + data_path("toy_embeddings.txt") +
                 " --a-file " + data_path("fig1_a.annot") + " --b-file " +
                 data_path("fig1_b.annot"));
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("owmd\t", 0) == 0);
}

TEST_CASE("distance --json echoes the parameters") {
    auto r = run("distance --metric owmd --lambda1 10 --lambda2 0.03 --json --embeddings " +
                 data_path("toy_embeddings.txt") +
                 " --a \"tom chase jerry\" --b \"jerry chase tom\"");
    CHECK(r.exit_code == 0);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["metric"] == "owmd");
    CHECK(doc["params"]["lambda1"] == 10.0);
    CHECK(doc["params"]["lambda2"] == 0.03);
    CHECK(doc["distance"].get<double>() > 0.0);
    CHECK(doc.contains("objective"));
}

TEST_CASE("distance --dump-plan prints the matrix after the distance") {
    auto r = run("distance --metric wmd --dump-plan --embeddings " +
                 data_path("toy_embeddings.txt") +
                 " --a \"tom chase\" --b \"tom chase\"");
    CHECK(r.exit_code == 0);
    auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 3); // distance line + 2 plan rows
    CHECK(lines[0] == "wmd\t0.000000");
}

TEST_CASE("distance errors on all-OOV input") {
    auto r = run("distance --metric wmd --embeddings " + data_path("toy_embeddings.txt") +
                 " --a \"qqq zzz\" --b \"tom\"");
    CHECK(r.exit_code == 1);
}

TEST_CASE("eval prints one report line per metric") {
    std::string common = " --format annotated --metrics owmd,wmd,bow,avg --embeddings " +
                         data_path("toy_embeddings.txt");
    auto r = run("eval " + data_path("mini_corpus.annot") + common);
    CHECK(r.exit_code == 0);
    auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 4);
    CHECK(lines[0].rfind("owmd\t20\t", 0) == 0);
    CHECK(lines[1].rfind("wmd\t20\t", 0) == 0);
    CHECK(lines[2].rfind("bow\t20\t", 0) == 0);
    CHECK(lines[3].rfind("avg\t20\t", 0) == 0);

    auto single = run("eval " + data_path("mini_corpus.annot") +
                      " --format annotated --metrics owmd --embeddings " +
                      data_path("toy_embeddings.txt"));
    CHECK(lines_of(single.out).size() == 1);
}

TEST_CASE("eval output is byte-identical across runs") {
    std::string cmd = "eval " + data_path("mini_corpus.annot") +
                      " --format annotated --metrics owmd,wmd --embeddings " +
                      data_path("toy_embeddings.txt");
    auto first = run(cmd);
    auto second = run(cmd);
    CHECK(first.exit_code == 0);
    CHECK(first.out == second.out);
}

TEST_CASE("a dataset built from the tool's own distances re-evaluates to rho 1") {
    // gold := -wmd(distance) computed through the library, then fed back
    // through the CLI as a tsv dataset
    sentfact::EmbeddingStore store = sentfact::load_embeddings(data_path("toy_embeddings.txt"));
    std::vector<std::pair<std::string, std::string>> pairs{
        {"tom chase jerry", "cat catch mouse"},
        {"dog bite boy", "teacher help student"},
        {"fox watch hen", "boy read book"},
        {"girl sing song", "rick follow morty"},
        {"tom chase jerry", "tom chase mouse"},
    };
    std::ostringstream tsv;
    for (const auto& [a, b] : pairs) {
        auto dist = sentfact::wmd(sentfact::split_whitespace(a),
                                  sentfact::split_whitespace(b), store);
        tsv << -dist.distance << '\t' << a << '\t' << b << '\n';
    }
    auto path = std::filesystem::temp_directory_path() / "self_distance.tsv";
    std::ofstream(path) << tsv.str();

    auto r = run("eval " + path.string() + " --format tsv-sts --metrics wmd --embeddings " +
                 data_path("toy_embeddings.txt") + " --json");
    CHECK(r.exit_code == 0);
    auto doc = nlohmann::json::parse(r.out);
    REQUIRE(doc.size() == 1);
    CHECK(doc[0]["metric"] == "wmd");
    CHECK(doc[0]["spearman"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(doc[0]["pearson"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("eval honors the SENTFACT_EMBEDDINGS environment fallback") {
    std::string cmd = "SENTFACT_EMBEDDINGS=" + data_path("toy_embeddings.txt") + " " +
                      std::string(SENTFACT_BIN) + " distance --metric wmd --a \"tom\" --b " +
                      "\"tom\" 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 256> buffer{};
    std::string out;
    std::size_t n = 0;
    while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) out.append(buffer.data(), n);
    int status = pclose(pipe);
    CHECK(WEXITSTATUS(status) == 0);
    CHECK(out == "wmd\t0.000000\n");
}
