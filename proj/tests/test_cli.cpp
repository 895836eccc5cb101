#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "ellqdet/cli.hpp"
#include "ellqdet/report_io.hpp"
#include "ellqdet/suite.hpp"

using namespace ellqdet;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch_dir()
{
    static int counter = 0;
    const fs::path dir = fs::temp_directory_path() / fmt::format("ellqdet_cli_test_{}_{}", ::getpid(), counter++);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::vector<std::vector<std::string>> matrix_rows(const std::string& dump)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(dump);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields;
        std::istringstream ls(line);
        std::string f;
        while (std::getline(ls, f, ',')) fields.push_back(f.substr(f.find_first_not_of(' ')));
        rows.push_back(fields);
    }
    return rows;
}

std::string literal(cplx x) { return fmt::format("{:.17g}{:+.17g}i", x.real(), x.imag()); }

cplx from_pair(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

}  // namespace

TEST_CASE("parse_complex")
{
    CHECK(parse_complex("1.5+2i") == cplx{1.5, 2.0});
    CHECK(parse_complex("1.5-2.25i") == cplx{1.5, -2.25});
    CHECK(parse_complex("-0.5") == cplx{-0.5, 0.0});
    CHECK(parse_complex("3i") == cplx{0.0, 3.0});
    CHECK(parse_complex("-i") == cplx{0.0, -1.0});
    CHECK(parse_complex("1e-3+2e-2j") == cplx{1e-3, 2e-2});
    CHECK(parse_complex("0.5-1e-3i") == cplx{0.5, -1e-3});
    for (const char* bad : {"", "abc", "1+", "1+2", "1+2ix", "i+1"}) CHECK_THROWS_AS(parse_complex(bad), ConfigError);
}

TEST_CASE("parse_format")
{
    CHECK(parse_format("json") == ReportFormat::Json);
    CHECK(parse_format("csv") == ReportFormat::Csv);
    CHECK(parse_format("text") == ReportFormat::Text);
    CHECK_THROWS_AS(parse_format("xml"), ConfigError);
}

TEST_CASE("verify exit codes")
{
    const Run ok = run({"verify", "--n", "2", "--seed", "7"});
    CHECK(ok.code == kExitOk);
    CHECK(ok.err.find("0 failed") != std::string::npos);

    const Run near_one = run({"verify", "--n", "3", "--q", "0.99"});
    CHECK(near_one.err.find("warning:") != std::string::npos);
    CHECK(near_one.code == kExitOk);

    const Run bad_p = run({"verify", "--p", "1.2"});
    CHECK(bad_p.code == kExitConfig);
    CHECK(bad_p.out.empty());

    CHECK(run({"verify", "--q", "zz"}).code == kExitConfig);
    CHECK(run({"verify", "--n", "1"}).code == kExitConfig);
    CHECK(run({"verify", "--bogus"}).code == kExitConfig);
    CHECK(run({"verify", "--format", "xml"}).code == kExitConfig);
    CHECK(run({"scan", "--grid", "4by4"}).code == kExitConfig);
    CHECK(run({"scan", "--check", "nope"}).code == kExitConfig);

    const Run strict = run({"verify", "--n", "2", "--seed", "1", "--tol", "ybe=1e-30"});
    CHECK(strict.code == kExitCheckFailed);
    CHECK(run({"verify", "--tol", "ybe"}).code == kExitConfig);
}

TEST_CASE("verify JSON reports")
{
    const Run r = run({"verify", "--n", "3", "--seed", "11"});
    REQUIRE(r.code == kExitOk);
    const json reports = json::parse(r.out);
    REQUIRE(reports.is_array());
    bool saw_canary = false;
    for (const auto& rep : reports) {
        for (const char* key : {"check", "params", "sample_points", "residual", "tolerance", "passed", "runtime_ms",
                                "seed", "version"}) {
            CHECK(rep.contains(key));
        }
        CHECK(rep["seed"] == 11);
        CHECK(rep["version"] == std::string(kVersion));
        CHECK(rep["runtime_ms"].is_null());
        CHECK(rep["params"]["N"] == 3);
        CHECK(rep["params"]["q"].size() == 2);
        if (rep["canary"].get<bool>()) {
            saw_canary = true;
            CHECK(rep["residual"].get<double>() > 1e-3);
        } else {
            CHECK(rep["passed"].get<bool>());
        }
    }
    CHECK(saw_canary);

    const json timed = json::parse(run({"verify", "--n", "2", "--timing"}).out);
    CHECK(timed.front()["runtime_ms"].is_number());
}

TEST_CASE("same seed gives byte-identical output")
{
    for (const char* fmt_tag : {"json", "csv", "text"}) {
        const std::vector<std::string> args{"verify", "--n", "2", "--seed", "5", "--points", "2", "--format", fmt_tag};
        const Run a = run(args);
        const Run b = run(args);
        CHECK(a.code == kExitOk);
        CHECK(a.out == b.out);
    }
    CHECK(run({"verify", "--seed", "5"}).out != run({"verify", "--seed", "6"}).out);
}

TEST_CASE("csv and text formats")
{
    const Run csv = run({"verify", "--n", "2", "--format", "csv"});
    std::istringstream in(csv.out);
    std::string header;
    std::getline(in, header);
    CHECK(header.rfind("check,", 0) == 0);
    int rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    CHECK(rows == static_cast<int>(json::parse(run({"verify", "--n", "2"}).out).size()));

    const Run text = run({"verify", "--n", "3", "--format", "text"});
    CHECK(text.out.find("PASS") != std::string::npos);
    CHECK(text.out.find("CANARY-OK") != std::string::npos);
    CHECK(text.out.find("FAIL ") == std::string::npos);
}

TEST_CASE("matrix dump")
{
    const Run ev = run({"matrix", "--kind", "eightvertex", "--n", "2", "--seed", "3"});
    REQUIRE(ev.code == kExitOk);
    CHECK(ev.out.find("# kind: eightvertex") != std::string::npos);
    CHECK(ev.out.find("# version: ") != std::string::npos);
    CHECK(ev.out.find("# truncation: ") != std::string::npos);
    const auto rows = matrix_rows(ev.out);
    CHECK(rows.size() == 16);
    int zeros = 0;
    for (const auto& row : rows) {
        REQUIRE(row.size() == 4);
        if (row[2] == "0" && row[3] == "0") ++zeros;
    }
    CHECK(zeros == 8);
    CHECK(rows.front()[0] == "1");
    CHECK(rows.back()[1] == "4");

    const Run el = run({"matrix", "--kind", "elliptic", "--n", "3", "--seed", "3"});
    for (const auto& row : matrix_rows(el.out)) {
        const int i = std::stoi(row[0]) - 1;
        const int j = std::stoi(row[1]) - 1;
        const int a = i / 3 + 1, c = i % 3 + 1, b = j / 3 + 1, d = j % 3 + 1;
        const bool allowed = (a + c - b - d) % 3 == 0;
        CHECK(allowed == !(row[2] == "0" && row[3] == "0"));
    }

    CHECK(run({"matrix", "--kind", "elliptic", "--n", "3", "--seed", "3"}).out == el.out);
    CHECK(run({"matrix", "--kind", "homogeneous", "--z", "1"}).code == kExitNumerical);
    CHECK(run({"matrix", "--kind", "eightvertex", "--n", "3"}).code == kExitConfig);
    CHECK(run({"matrix", "--kind", "belavin"}).code == kExitConfig);
}

TEST_CASE("qdet over several points")
{
    const Run r = run({"qdet", "--n", "2", "--points", "5", "--seed", "9"});
    CHECK(r.code == kExitOk);
    const json reports = json::parse(r.out);
    CHECK(reports.size() == 5);
    for (const auto& rep : reports) {
        CHECK(std::abs(rep["details"]["m_1_re"].get<double>() - 1.0) < 1e-8);
        CHECK(std::abs(rep["details"]["m_2_re"].get<double>() - 1.0) < 1e-8);
        CHECK(rep["passed"].get<bool>());
    }
    CHECK(run({"qdet", "--n", "6"}).code == kExitConfig);
}

TEST_CASE("limits are monotone")
{
    const Run r = run({"limits", "--n", "3", "--p-seq", "1e-2,1e-4,1e-6", "--seed", "2"});
    CHECK(r.code == kExitOk);
    const json reports = json::parse(r.out);
    REQUIRE(reports.size() == 1);
    const json& d = reports[0]["details"];
    CHECK(d["monotone"] == 1.0);
    CHECK(d["residual_at_1e-06"].get<double>() < d["residual_at_1e-04"].get<double>());
    CHECK(d["residual_at_1e-04"].get<double>() < d["residual_at_1e-02"].get<double>());
    CHECK(run({"limits", "--p-seq", "1e-2,x"}).code == kExitConfig);
}

TEST_CASE("scan grid")
{
    const Run a = run({"scan", "--grid", "4x4", "--seed", "4"});
    CHECK(a.code == kExitOk);
    const json reports = json::parse(a.out);
    CHECK(reports.size() == 16);
    CHECK(run({"scan", "--grid", "4x4", "--seed", "4"}).out == a.out);
    const Run b = run({"scan", "--grid", "2x3", "--check", "unitarity", "--n", "3"});
    CHECK(b.code == kExitOk);
    CHECK(json::parse(b.out).size() == 2 * 3 * 5);
}

TEST_CASE("reports reproduce from their embedded parameters")
{
    const Run a = run({"qdet", "--n", "3", "--seed", "21"});
    const json rep = json::parse(a.out).front();
    const cplx q = from_pair(rep["params"]["q"]);
    const cplx p = from_pair(rep["params"]["p"]);
    const cplx z = from_pair(rep["sample_points"][0]);
    const Run b = run({"qdet", "--n", "3", "--q", literal(q), "--p", literal(p), "--z", literal(z)});
    const json rep2 = json::parse(b.out).front();
    CHECK(std::abs(rep2["residual"].get<double>() - rep["residual"].get<double>()) < 1e-12);
}

TEST_CASE("output files are write-once")
{
    const fs::path dir = scratch_dir();
    const std::string path = (dir / "report.json").string();
    CHECK(run({"verify", "--out", path}).code == kExitOk);
    std::ifstream in(path);
    std::stringstream content;
    content << in.rdbuf();
    CHECK(json::parse(content.str()).is_array());

    const Run again = run({"verify", "--out", path});
    CHECK(again.code == kExitConfig);
    CHECK_THROWS_AS(write_once(path, "x"), ConfigError);
    fs::remove_all(dir);
}

TEST_CASE("dump_matrix format")
{
    const TensorOperator id = TensorOperator::identity(2, 1);
    const std::vector<std::pair<std::string, std::string>> header{{"kind", "test"}};
    const std::string text = dump_matrix(id, header);
    CHECK(text.rfind("# kind: test\n", 0) == 0);
    CHECK(text.find("1, 1, 1, 0\n") != std::string::npos);
    CHECK(text.find("1, 2, 0, 0\n") != std::string::npos);
    const TensorOperator x(2, 1, Eigen::MatrixXcd::Constant(2, 2, cplx{0.1, -1.0 / 3.0}));
    CHECK(dump_matrix(x, {}).find("0.10000000000000001, -0.33333333333333331") != std::string::npos);
}
