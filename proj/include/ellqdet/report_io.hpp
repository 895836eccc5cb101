#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ellqdet/properties.hpp"

namespace ellqdet {

inline constexpr std::string_view kVersion = ELLQDET_VERSION;

enum class ReportFormat { Json, Csv, Text };
ReportFormat parse_format(std::string_view tag);

struct ReportContext {
    std::uint64_t seed = 0;
    /// Wall-clock runtimes are emitted only when set; otherwise runtime_ms is null.
    bool timing = false;
};

nlohmann::json to_json(const PropertyReport& report, const ReportContext& ctx);

/// JSON: an array of report objects. CSV: header plus one row per report. Text: one line per report.
std::string format_reports(std::span<const PropertyReport> reports, ReportFormat format, const ReportContext& ctx);

/// "#"-prefixed header lines, then "i, j, re, im" rows (1-based, 17 significant digits).
std::string dump_matrix(const TensorOperator& op, std::span<const std::pair<std::string, std::string>> header);

/// Creates `path` with `content`; throws ConfigError if it already exists.
void write_once(const std::filesystem::path& path, std::string_view content);

/// Parses "a+bi", "a-bi", "a", "bi" (also with 'j'); throws ConfigError.
cplx parse_complex(std::string_view text);

}  // namespace ellqdet
