#include "ellqdet/suite.hpp"

#include <algorithm>
#include <limits>

#include <fmt/format.h>

#include "ellqdet/qdet.hpp"

namespace ellqdet {

namespace {

using Reports = std::vector<PropertyReport>;

LogComplex fixed_or(const std::optional<cplx>& given, LogComplex drawn)
{
    return given ? LogComplex::from_value(*given) : drawn;
}

double tol(const SuiteConfig& c, const std::string& name, double fallback) { return c.tolerances.get(name, fallback); }

// Repeats `one` for config.samples points; random points are redrawn when they land on a pole.
template <typename F>
Reports sampled(const SuiteConfig& c, F&& one)
{
    Reports out;
    const bool fixed = c.z.has_value();
    const int samples = fixed ? 1 : c.samples;
    for (int s = 0; s < samples; ++s) out.push_back(resample_on_pole(one, fixed ? 1 : kMaxResamples));
    return out;
}

std::vector<RKind> kinds_for(int n, std::initializer_list<RKind> kinds)
{
    std::vector<RKind> out;
    for (RKind k : kinds) {
        if (k != RKind::EightVertex || n == 2) out.push_back(k);
    }
    return out;
}

Reports per_kind(const ModelParams& params, Sampler& s, const SuiteConfig& c, std::initializer_list<RKind> kinds,
                 const std::string& base, double fallback,
                 PropertyReport (*check)(const ModelParams&, RKind, LogComplex, double))
{
    Reports out;
    for (RKind k : kinds_for(params.n, kinds)) {
        const double t = tol(c, fmt::format("{}[{}]", base, to_string(k)), fallback);
        for (auto& r : sampled(c, [&] { return check(params, k, fixed_or(c.z, s.spectral()), t); })) {
            out.push_back(std::move(r));
        }
    }
    return out;
}

constexpr std::initializer_list<RKind> kAllKinds = {RKind::EllipticR,  RKind::EllipticRhat, RKind::EightVertex,
                                                    RKind::Homogeneous, RKind::Principal,   RKind::NonElliptic};

std::vector<SuiteCheck> make_checks()
{
    std::vector<SuiteCheck> v;
    v.push_back({"theta", 2, 6, [](const ModelParams& p, Sampler& s, const SuiteConfig& c) {
                     Reports out;
                     for (int k = 0; k < std::max(1, c.samples); ++k) {
                         const LogComplex a = s.nome_p();
                         const LogComplex z = s.spectral();
                         auto r = check_theta(a, z, 1 + k % 3, tol(c, "theta_identities", 1e-12), p.policy);
                         // Stamp the run's parameters; the nome is the second sample point.
                         r.params_digest = params_digest(p);
                         r.n = p.n;
                         r.q = p.q();
                         r.p = p.p();
                         out.push_back(std::move(r));
                     }
                     return out;
                 }});
    v.push_back({"eight_vertex", 2, 2, [](const ModelParams& p, Sampler& s, const SuiteConfig& c) {
                     return sampled(c, [&] {
                         return check_eight_vertex(p, fixed_or(c.z, s.spectral()), tol(c, "eight_vertex", 1e-12));
                     });
                 }});
    v.push_back({"ybe", 2, 4, [](const ModelParams& p, Sampler& s, const SuiteConfig& c) {
                     Reports out;
                     for (RKind k : kinds_for(p.n, kAllKinds)) {
                         const double t = tol(c, fmt::format("ybe[{}]", to_string(k)), 1e-8);
                         for (auto& r : sampled(c, [&] {
                                  const LogComplex z1 = fixed_or(c.z, s.spectral());
                                  const LogComplex z2 = fixed_or(c.w, s.spectral());
                                  return check_ybe(p, k, z1, z2, s.spectral(), t);
                              })) {
                             out.push_back(std::move(r));
                         }
                     }
                     return out;
                 }});
    v.push_back({"unitarity", 2, 6, [](const ModelParams& p, Sampler& s, const SuiteConfig& c) {
                     return per_kind(p, s, c, kAllKinds, "unitarity", 1e-8, check_unitarity);
                 }});
    v.push_back({"regularity", 2, 6, [](const ModelParams& p, Sampler&, const SuiteConfig& c) {
                     Reports out;
                     for (RKind k : kinds_for(p.n, {RKind::EllipticR, RKind::EightVertex})) {
                         out.push_back(check_regularity(p, k, tol(c, fmt::format("regularity[{}]", to_string(k)), 1e-8)));
                     }
                     return out;
                 }});
    v.push_back({"crossing", 2, 6, [](const ModelParams& p, Sampler& s, const SuiteConfig& c) {
                     return per_kind(p, s, c, {RKind::EllipticR, RKind::EightVertex}, "crossing", 1e-8, check_crossing);
                 }});
    v.push_back({"antisymmetry", 2, 6, [](const ModelParams& p, Sampler& s, const SuiteConfig& c) {
                     return per_kind(p, s, c, {RKind::EllipticR, RKind::EightVertex}, "antisymmetry", 1e-8,
                                     check_antisymmetry);
                 }});
    v.push_back({"quasi_periodicity", 2, 6, [](const ModelParams& p, Sampler& s, const SuiteConfig& c) {
                     return sampled(c, [&] {
                         return check_quasi_periodicity(p, fixed_or(c.z, s.spectral()),
                                                        tol(c, "quasi_periodicity", 1e-8));
                     });
                 }});
    v.push_back({"h_invariance", 2, 6, [](const ModelParams& p, Sampler& s, const SuiteConfig& c) {
                     return per_kind(p, s, c, {RKind::EllipticR, RKind::EllipticRhat, RKind::EightVertex}, "h_invariance",
                                     1e-8, check_h_invariance);
                 }});
    v.push_back({"crossing_unitarity", 2, 6, [](const ModelParams& p, Sampler& s, const SuiteConfig& c) {
                     return per_kind(p, s, c, {RKind::EllipticR, RKind::EllipticRhat}, "crossing_unitarity", 1e-8,
                                     check_crossing_unitarity);
                 }});
    v.push_back({"kernel_at_q", 2, 6, [](const ModelParams& p, Sampler&, const SuiteConfig& c) {
                     return Reports{check_kernel_at_q(p, tol(c, "kernel_at_q", 1e-9))};
                 }});
    v.push_back({"spectrum_nonelliptic", 2, 6, [](const ModelParams& p, Sampler&, const SuiteConfig& c) {
                     return Reports{check_spectrum_nonelliptic(p, tol(c, "spectrum_nonelliptic", 1e-9))};
                 }});
    v.push_back({"gauge_relation", 2, 6, [](const ModelParams& p, Sampler& s, const SuiteConfig& c) {
                     return sampled(c, [&] {
                         const LogComplex z = fixed_or(c.z, s.spectral());
                         return check_gauge_relation(p, z, fixed_or(c.w, s.spectral()), tol(c, "gauge_relation", 1e-10));
                     });
                 }});
    v.push_back({"twist_relation", 2, 6, [](const ModelParams& p, Sampler& s, const SuiteConfig& c) {
                     return sampled(c, [&] {
                         return check_twist_relation(p, fixed_or(c.z, s.spectral()), tol(c, "twist_relation", 1e-10));
                     });
                 }});
    v.push_back({"p_to_zero", 2, 6, [](const ModelParams& p, Sampler& s, const SuiteConfig& c) {
                     return sampled(c, [&] {
                         return check_p_to_zero(p, fixed_or(c.z, s.spectral()), c.p_sequence, RKind::EllipticRhat,
                                                tol(c, "p_to_zero", 0.0));
                     });
                 }});
    v.push_back({"evaluated_ll", 2, 6, [](const ModelParams& p, Sampler& s, const SuiteConfig& c) {
                     return sampled(c, [&] {
                         return check_evaluated_ll(p, fixed_or(c.z, s.spectral()), tol(c, "evaluated_ll", 1e-9));
                     });
                 }});
    v.push_back({"nsigma", 2, 6, [](const ModelParams& p, Sampler&, const SuiteConfig&) {
                     return Reports{check_nsigma(std::clamp(p.n, 2, 6))};
                 }});
    v.push_back({"qdet", 2, 5, [](const ModelParams& p, Sampler& s, const SuiteConfig& c) {
                     const double fallback = p.n == 2 ? 1e-8 : 1e-7;
                     return sampled(c, [&] { return check_qdet(p, fixed_or(c.z, s.spectral()), tol(c, "qdet", fallback)); });
                 }});
    v.push_back({"qdet_nonelliptic", 2, 6, [](const ModelParams& p, Sampler& s, const SuiteConfig& c) {
                     return sampled(c, [&] {
                         return check_qdet_nonelliptic(p, fixed_or(c.z, s.spectral()), tol(c, "qdet_nonelliptic", 1e-9));
                     });
                 }});
    v.push_back({"inverse_product", 2, 5, [](const ModelParams& p, Sampler& s, const SuiteConfig& c) {
                     return sampled(c, [&] {
                         return check_inverse_product(p, fixed_or(c.z, s.spectral()), tol(c, "inverse_product", 1e-8));
                     });
                 }});
    v.push_back({"centrality_witness", 2, 5, [](const ModelParams& p, Sampler& s, const SuiteConfig& c) {
                     return sampled(c, [&] {
                         const LogComplex z = fixed_or(c.z, s.spectral());
                         return centrality_witness(p, z, fixed_or(c.w, s.spectral()), tol(c, "centrality_witness", 1e-8));
                     });
                 }});
    v.push_back({"transpose_symmetry", 2, 6, [](const ModelParams& p, Sampler& s, const SuiteConfig& c) {
                     return sampled(c, [&] {
                         return check_transpose_symmetry(p, fixed_or(c.z, s.spectral()), tol(c, "transpose_symmetry", 1e-8));
                     });
                 }});
    return v;
}

}  // namespace

double Tolerances::get(const std::string& report_name, double fallback) const
{
    if (auto it = overrides.find(report_name); it != overrides.end()) return it->second;
    const auto bracket = report_name.find('[');
    if (bracket != std::string::npos) {
        if (auto it = overrides.find(report_name.substr(0, bracket)); it != overrides.end()) return it->second;
    }
    return fallback;
}

const std::vector<SuiteCheck>& suite_checks()
{
    static const std::vector<SuiteCheck> checks = make_checks();
    return checks;
}

const SuiteCheck& find_check(const std::string& name)
{
    for (const auto& c : suite_checks()) {
        if (c.name == name) return c;
    }
    std::string known;
    for (const auto& c : suite_checks()) known += (known.empty() ? "" : ", ") + c.name;
    throw ConfigError(fmt::format("unknown check '{}' (known: {})", name, known));
}

ModelParams suite_params(const SuiteConfig& config, Sampler& sampler)
{
    try {
        if (!config.q && !config.p) return sampler.params(config.n);
        ModelParams params;
        params.n = config.n;
        params.log_q = config.q ? LogComplex::from_value(*config.q) : sampler.nome_q();
        params.log_p = config.p ? LogComplex::from_value(*config.p) : sampler.nome_p();
        params.validate();
        return params;
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
}

std::vector<PropertyReport> run_check(const SuiteCheck& check, const ModelParams& params, Sampler& sampler,
                                      const SuiteConfig& config)
{
    try {
        return check.run(params, sampler, config);
    } catch (const Error& e) {
        PropertyReport r;
        r.name = check.name;
        r.params_digest = params_digest(params);
        r.n = params.n;
        r.q = params.q();
        r.p = params.p();
        r.central_charge = params.central_charge;
        r.residual = std::numeric_limits<double>::infinity();
        r.tolerance = config.tolerances.get(check.name, 0.0);
        r.passed = false;
        r.note = e.what();
        return {r};
    }
}

std::vector<PropertyReport> run_verify(const SuiteConfig& config)
{
    Sampler sampler(config.seed);
    const ModelParams params = suite_params(config, sampler);
    std::vector<PropertyReport> out;
    for (const auto& check : suite_checks()) {
        if (config.n < check.min_n || config.n > check.max_n) continue;
        for (auto& r : run_check(check, params, sampler, config)) out.push_back(std::move(r));
    }
    return out;
}

bool all_passed(const std::vector<PropertyReport>& reports)
{
    return std::all_of(reports.begin(), reports.end(), [](const PropertyReport& r) { return r.canary || r.passed; });
}

}  // namespace ellqdet
