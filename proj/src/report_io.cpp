#include "ellqdet/report_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

namespace ellqdet {

namespace {

nlohmann::json pair_of(cplx x) { return nlohmann::json::array({x.real(), x.imag()}); }

std::string g17(double x) { return fmt::format("{:.17g}", x); }

double parse_real(std::string_view text, std::string_view whole)
{
    if (text.empty()) throw ConfigError(fmt::format("malformed complex literal '{}'", whole));
    if (text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
        throw ConfigError(fmt::format("malformed complex literal '{}'", whole));
    }
    return value;
}

}  // namespace

ReportFormat parse_format(std::string_view tag)
{
    if (tag == "json") return ReportFormat::Json;
    if (tag == "csv") return ReportFormat::Csv;
    if (tag == "text") return ReportFormat::Text;
    throw ConfigError(fmt::format("unknown format '{}' (json, csv, text)", tag));
}

nlohmann::json to_json(const PropertyReport& r, const ReportContext& ctx)
{
    nlohmann::json j;
    j["check"] = r.name;
    j["params"] = {{"N", r.n}, {"q", pair_of(r.q)}, {"p", pair_of(r.p)}, {"c", r.central_charge}};
    j["sample_points"] = nlohmann::json::array();
    for (cplx x : r.sample_points) j["sample_points"].push_back(pair_of(x));
    j["residual"] = r.residual;
    j["tolerance"] = r.tolerance;
    j["passed"] = r.passed;
    j["runtime_ms"] = ctx.timing ? nlohmann::json(r.runtime_ms) : nlohmann::json(nullptr);
    j["seed"] = ctx.seed;
    j["version"] = std::string(kVersion);
    j["canary"] = r.canary;
    j["params_digest"] = r.params_digest;
    j["details"] = nlohmann::json::object();
    for (const auto& [k, v] : r.details) j["details"][k] = v;
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

std::string format_reports(std::span<const PropertyReport> reports, ReportFormat format, const ReportContext& ctx)
{
    std::string out;
    switch (format) {
    case ReportFormat::Json: {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : reports) arr.push_back(to_json(r, ctx));
        out = arr.dump(2) + "\n";
        break;
    }
    case ReportFormat::Csv:
        out = "check,N,q_re,q_im,p_re,p_im,c,residual,tolerance,passed,canary,runtime_ms,seed,version\n";
        for (const auto& r : reports) {
            out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", r.name, r.n, g17(r.q.real()), g17(r.q.imag()),
                               g17(r.p.real()), g17(r.p.imag()), g17(r.central_charge), g17(r.residual),
                               g17(r.tolerance), r.passed ? "true" : "false", r.canary ? "true" : "false",
                               ctx.timing ? g17(r.runtime_ms) : "", ctx.seed, kVersion);
        }
        break;
    case ReportFormat::Text:
        for (const auto& r : reports) {
            const char* verdict = r.canary ? (r.passed ? "CANARY-HELD" : "CANARY-OK") : (r.passed ? "PASS" : "FAIL");
            out += fmt::format("{:<12} {:<36} N={} residual={:.3e} tol={:.1e}", verdict, r.name, r.n, r.residual,
                               r.tolerance);
            if (ctx.timing) out += fmt::format(" {:.1f}ms", r.runtime_ms);
            for (const auto& [k, v] : r.details) out += fmt::format(" {}={:.4g}", k, v);
            out += "\n";
        }
        break;
    }
    return out;
}

std::string dump_matrix(const TensorOperator& op, std::span<const std::pair<std::string, std::string>> header)
{
    std::string out;
    for (const auto& [k, v] : header) out += fmt::format("# {}: {}\n", k, v);
    out += "# i, j, re, im\n";
    const auto& m = op.matrix();
    for (long i = 0; i < m.rows(); ++i) {
        for (long j = 0; j < m.cols(); ++j) {
            out += fmt::format("{}, {}, {}, {}\n", i + 1, j + 1, g17(m(i, j).real()), g17(m(i, j).imag()));
        }
    }
    return out;
}

void write_once(const std::filesystem::path& path, std::string_view content)
{
    if (std::filesystem::exists(path)) {
        throw ConfigError(fmt::format("refusing to overwrite existing file '{}'", path.string()));
    }
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError(fmt::format("cannot open '{}' for writing", path.string()));
    f << content;
    if (!f) throw ConfigError(fmt::format("write to '{}' failed", path.string()));
}

cplx parse_complex(std::string_view text)
{
    const std::string_view whole = text;
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    if (text.empty()) throw ConfigError("empty complex literal");
    if (text.back() != 'i' && text.back() != 'j') return {parse_real(text, whole), 0.0};

    text.remove_suffix(1);
    // Split at the last sign that is not the leading one and not part of an exponent.
    std::size_t split = std::string_view::npos;
    for (std::size_t k = text.size(); k-- > 1;) {
        if ((text[k] == '+' || text[k] == '-') && text[k - 1] != 'e' && text[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    const auto imag_part = [&](std::string_view s) {
        if (s.empty() || s == "+") return 1.0;
        if (s == "-") return -1.0;
        return parse_real(s, whole);
    };
    if (split == std::string_view::npos) return {0.0, imag_part(text)};
    return {parse_real(text.substr(0, split), whole), imag_part(text.substr(split))};
}

}  // namespace ellqdet
