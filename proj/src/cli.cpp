#include "ellqdet/cli.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ellqdet/qdet.hpp"
#include "ellqdet/report_io.hpp"
#include "ellqdet/suite.hpp"

namespace ellqdet {

namespace {

struct RunConfig {
    std::string command;
    int n = 2;
    std::string q = "random";
    std::string p = "random";
    std::string z = "random";
    std::string w = "random";
    std::uint64_t seed = 0;
    std::vector<std::string> tol;
    std::string out;
    std::string format = "json";
    std::string p_seq = "1e-2,1e-4,1e-6,1e-8";
    std::string grid = "4x4";
    std::string kind = "elliptic";
    std::string check = "qdet";
    int points = 1;
    bool timing = false;
};

std::optional<cplx> literal(const std::string& text)
{
    if (text == "random") return std::nullopt;
    return parse_complex(text);
}

std::vector<double> parse_list(const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const cplx v = parse_complex(item);
        if (v.imag() != 0.0) throw ConfigError(fmt::format("expected a real number, got '{}'", item));
        out.push_back(v.real());
    }
    if (out.empty()) throw ConfigError("empty list");
    return out;
}

Tolerances parse_tolerances(const std::vector<std::string>& items)
{
    Tolerances t;
    for (const auto& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError(fmt::format("--tol expects name=value, got '{}'", item));
        const cplx v = parse_complex(item.substr(eq + 1));
        if (v.imag() != 0.0 || !(v.real() >= 0.0)) throw ConfigError(fmt::format("bad tolerance in '{}'", item));
        t.overrides[item.substr(0, eq)] = v.real();
    }
    return t;
}

SuiteConfig suite_config(const RunConfig& rc)
{
    SuiteConfig c;
    c.n = rc.n;
    c.seed = rc.seed;
    c.q = literal(rc.q);
    c.p = literal(rc.p);
    c.z = literal(rc.z);
    c.w = literal(rc.w);
    c.samples = rc.points;
    c.p_sequence = parse_list(rc.p_seq);
    c.tolerances = parse_tolerances(rc.tol);
    if (c.n < 2) throw ConfigError("--n must be >= 2");
    if (c.samples < 1) throw ConfigError("--points must be >= 1");
    return c;
}

class Emitter {
public:
    Emitter(const RunConfig& rc, std::ostream& out) : rc_(rc), out_(out) {}

    void emit(const std::string& content) const
    {
        if (rc_.out.empty()) {
            out_ << content;
        } else {
            write_once(rc_.out, content);
        }
    }

    void emit_reports(const std::vector<PropertyReport>& reports) const
    {
        emit(format_reports(reports, parse_format(rc_.format), ReportContext{rc_.seed, rc_.timing}));
    }

private:
    const RunConfig& rc_;
    std::ostream& out_;
};

void print_warnings(const ModelParams& params, std::ostream& err)
{
    for (const auto& w : params.validate()) err << "warning: " << w << "\n";
}

int verdict(const std::vector<PropertyReport>& reports, std::ostream& err)
{
    int failed = 0;
    int canaries = 0;
    for (const auto& r : reports) {
        if (r.canary) {
            ++canaries;
        } else if (!r.passed) {
            ++failed;
        }
    }
    err << fmt::format("{} reports, {} failed, {} canaries\n", reports.size(), failed, canaries);
    return failed == 0 ? kExitOk : kExitCheckFailed;
}

int run_verify_cmd(const RunConfig& rc, std::ostream& out, std::ostream& err)
{
    const SuiteConfig c = suite_config(rc);
    Sampler probe(c.seed);
    print_warnings(suite_params(c, probe), err);
    const auto reports = run_verify(c);
    Emitter(rc, out).emit_reports(reports);
    return verdict(reports, err);
}

int run_matrix_cmd(const RunConfig& rc, std::ostream& out, std::ostream& err)
{
    const SuiteConfig c = suite_config(rc);
    const RKind kind = parse_kind(rc.kind);
    Sampler sampler(c.seed);
    const ModelParams params = suite_params(c, sampler);
    print_warnings(params, err);
    const LogComplex z = c.z ? LogComplex::from_value(*c.z) : sampler.spectral();
    const TensorOperator m = build_r(params, kind, z);

    const auto pair = [](cplx x) { return fmt::format("{:.17g} {:+.17g}i", x.real(), x.imag()); };
    const std::vector<std::pair<std::string, std::string>> header = {
        {"kind", std::string(to_string(kind))},
        {"N", std::to_string(params.n)},
        {"q", pair(params.q())},
        {"p", pair(params.p())},
        {"z", pair(z.value())},
        {"log_q", pair(params.log_q.log())},
        {"log_p", pair(params.log_p.log())},
        {"log_z", pair(z.log())},
        {"truncation", fmt::format("abs_floor={:.3g} max_terms={}", params.policy.abs_floor, params.policy.max_terms)},
        {"seed", std::to_string(rc.seed)},
        {"version", std::string(kVersion)},
    };
    Emitter(rc, out).emit(dump_matrix(m, header));
    return kExitOk;
}

int run_qdet_cmd(const RunConfig& rc, std::ostream& out, std::ostream& err)
{
    SuiteConfig c = suite_config(rc);
    if (c.n > 5) throw ConfigError("qdet supports N <= 5");
    Sampler sampler(c.seed);
    const ModelParams params = suite_params(c, sampler);
    print_warnings(params, err);
    const auto reports = run_check(find_check("qdet"), params, sampler, c);
    Emitter(rc, out).emit_reports(reports);
    return verdict(reports, err);
}

int run_limits_cmd(const RunConfig& rc, std::ostream& out, std::ostream& err)
{
    const SuiteConfig c = suite_config(rc);
    Sampler sampler(c.seed);
    const ModelParams params = suite_params(c, sampler);
    print_warnings(params, err);
    const auto reports = run_check(find_check("p_to_zero"), params, sampler, c);
    Emitter(rc, out).emit_reports(reports);
    return verdict(reports, err);
}

int run_scan_cmd(const RunConfig& rc, std::ostream& out, std::ostream& err)
{
    SuiteConfig c = suite_config(rc);
    const SuiteCheck& check = find_check(rc.check);
    int nq = 0;
    int np = 0;
    char x = 0;
    std::istringstream gs(rc.grid);
    if (!(gs >> nq >> x >> np) || x != 'x' || nq < 1 || np < 1 || !gs.eof()) {
        throw ConfigError(fmt::format("--grid expects AxB, got '{}'", rc.grid));
    }
    Sampler sampler(c.seed);
    // Phases come from the given q, p (or one random draw); the grid sets the moduli.
    const double q_phase = c.q ? std::arg(*c.q) : sampler.nome_q().log().imag();
    const double p_phase = c.p ? std::arg(*c.p) : sampler.nome_p().log().imag();
    const auto axis = [](double lo, double hi, int count, int k) {
        return count == 1 ? lo : lo + (hi - lo) * k / (count - 1);
    };
    std::vector<PropertyReport> reports;
    for (int i = 0; i < nq; ++i) {
        for (int j = 0; j < np; ++j) {
            ModelParams params;
            params.n = c.n;
            params.log_q = LogComplex(cplx{std::log(axis(0.3, 0.8, nq, i)), q_phase});
            params.log_p = LogComplex(cplx{std::log(axis(0.05, 0.5, np, j)), p_phase});
            try {
                print_warnings(params, err);
            } catch (const DomainError& e) {
                throw ConfigError(e.what());
            }
            for (auto& r : run_check(check, params, sampler, c)) reports.push_back(std::move(r));
        }
    }
    Emitter(rc, out).emit_reports(reports);
    return verdict(reports, err);
}

void add_common(CLI::App* cmd, RunConfig& rc)
{
    cmd->add_option("--n", rc.n, "Rank N (gl_N)")->capture_default_str();
    cmd->add_option("--q", rc.q, "q as a+bi, or 'random'")->capture_default_str();
    cmd->add_option("--p", rc.p, "Elliptic nome p as a+bi, or 'random'")->capture_default_str();
    cmd->add_option("--z", rc.z, "Spectral argument z, or 'random'")->capture_default_str();
    cmd->add_option("--w", rc.w, "Second spectral argument w, or 'random'")->capture_default_str();
    cmd->add_option("--seed", rc.seed, "Seed for all random draws")->capture_default_str();
    cmd->add_option("--tol", rc.tol, "Tolerance override name=value (repeatable)");
    cmd->add_option("--out", rc.out, "Output file (must not exist)");
    cmd->add_option("--format", rc.format, "json, csv or text")->capture_default_str();
    cmd->add_option("--points", rc.points, "Random sample points per check")->capture_default_str();
    cmd->add_flag("--timing", rc.timing, "Include wall-clock runtimes in reports");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    RunConfig rc;
    CLI::App app{"Elliptic R-matrix identities and quantum determinant checks", "ellqdet"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    auto* verify = app.add_subcommand("verify", "Run every identity check applicable to N");
    auto* matrix = app.add_subcommand("matrix", "Dump an R-matrix");
    auto* qdet = app.add_subcommand("qdet", "Quantum determinant at random or given z");
    auto* scan = app.add_subcommand("scan", "Re-run one check over a (|q|, |p|) grid");
    auto* limits = app.add_subcommand("limits", "p -> 0 limit towards the non-elliptic R-matrix");
    for (auto* cmd : {verify, matrix, qdet, scan, limits}) add_common(cmd, rc);
    matrix->add_option("--kind", rc.kind, "elliptic, elliptic-hat, eightvertex, homogeneous, principal, nonelliptic")
        ->capture_default_str();
    scan->add_option("--grid", rc.grid, "Grid size AxB over |q| in [0.3,0.8], |p| in [0.05,0.5]")->capture_default_str();
    scan->add_option("--check", rc.check, "Check to re-run at each grid point")->capture_default_str();
    limits->add_option("--p-seq", rc.p_seq, "Decreasing |p| values, comma separated")->capture_default_str();
    verify->add_option("--p-seq", rc.p_seq, "Decreasing |p| values for the p -> 0 check")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o;
        std::ostringstream e2;
        const int code = app.exit(e, o, e2);
        out << o.str();
        err << e2.str();
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (verify->parsed()) return run_verify_cmd(rc, out, err);
        if (matrix->parsed()) return run_matrix_cmd(rc, out, err);
        if (qdet->parsed()) return run_qdet_cmd(rc, out, err);
        if (scan->parsed()) return run_scan_cmd(rc, out, err);
        if (limits->parsed()) return run_limits_cmd(rc, out, err);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DomainError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const KindError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const SizeError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        err << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitConfig;
}

}  // namespace ellqdet
