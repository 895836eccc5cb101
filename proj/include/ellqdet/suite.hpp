#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ellqdet/properties.hpp"
#include "ellqdet/sampling.hpp"

namespace ellqdet {

/// Per-check tolerance overrides, keyed by full report name ("ybe[elliptic]") or base name ("ybe").
struct Tolerances {
    std::map<std::string, double> overrides;

    double get(const std::string& report_name, double fallback) const;
};

/// What a suite run draws from: fixed points where given, otherwise the seeded sampler.
struct SuiteConfig {
    int n = 2;
    std::uint64_t seed = 0;
    std::optional<cplx> q;
    std::optional<cplx> p;
    std::optional<cplx> z;
    std::optional<cplx> w;
    int samples = 1;
    std::vector<double> p_sequence{std::begin(kDefaultPSequence), std::end(kDefaultPSequence)};
    Tolerances tolerances;
};

/// One named check; run() may emit several reports (one per kind, per sample).
struct SuiteCheck {
    std::string name;
    int min_n = 2;
    int max_n = 6;
    std::function<std::vector<PropertyReport>(const ModelParams&, Sampler&, const SuiteConfig&)> run;
};

const std::vector<SuiteCheck>& suite_checks();
const SuiteCheck& find_check(const std::string& name);

/// Parameters of a run: given q/p, or drawn from the sampler. Throws ConfigError on invalid values.
ModelParams suite_params(const SuiteConfig& config, Sampler& sampler);

/// Runs one check; library errors become failed reports carrying the message.
std::vector<PropertyReport> run_check(const SuiteCheck& check, const ModelParams& params, Sampler& sampler,
                                      const SuiteConfig& config);

/// Every check applicable to config.n.
std::vector<PropertyReport> run_verify(const SuiteConfig& config);

/// True iff every non-canary report passed.
bool all_passed(const std::vector<PropertyReport>& reports);

}  // namespace ellqdet
