#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "seaport/analytic.hpp"
#include "seaport/compare.hpp"
#include "seaport/planning.hpp"
#include "seaport/simulator.hpp"

namespace seaport::io {

enum class Format { Table, Csv, Json };

std::string_view to_string(Format format) noexcept;
std::optional<Format> parse_format(std::string_view text) noexcept;

/// Provenance stamped into every report.
struct ReportMetadata {
  std::string config_digest;
  std::string config_path;
};

// CSV headers. Rows always follow flatten order.
inline constexpr std::string_view kAnalyticCsvHeader =
    "i,j,label,S,r_ij,rho_ij,EW_star,EW,En,EQ";
inline constexpr std::string_view kStabilityCsvHeader =
    "i,j,label,S,r_ij,rho_ij,stable";
inline constexpr std::string_view kSimulationCsvHeader =
    "i,j,label,S,served,r_ij,r_ij_hw,rho_ij,rho_ij_hw,EW,EW_hw,En,En_hw,EQ,"
    "EQ_hw";
inline constexpr std::string_view kComparisonCsvHeader =
    "i,j,label,S,homogeneous,EW_analytic,EW_sim,EW_hw,EW_rel_err,"
    "En_analytic,En_sim,En_hw,En_rel_err,EQ_analytic,EQ_sim,EQ_hw,EQ_rel_err,"
    "rho_analytic,rho_sim,rho_hw,rho_rel_err,EW_in_ci,within_tolerance";
inline constexpr std::string_view kPlanCsvHeader =
    "i,j,label,r_ij,berth_rate,current_S,required_S,EW_current,EW_required,"
    "meets_sla";

/// `%.17g`.
std::string format_number(double value);

/// RFC 4180 quoting: fields with a comma, quote or line break are quoted.
std::string csv_field(std::string_view text);

std::string emit_report(const analytic::SystemMetrics& metrics, Format format,
                        const ReportMetadata& meta);
std::string emit_report(const analytic::StabilityReport& stability,
                        RoutingMode routing, Format format,
                        const ReportMetadata& meta);
std::string emit_report(const sim::SimMetrics& metrics, Format format,
                        const ReportMetadata& meta);
std::string emit_report(const ComparisonReport& report, Format format,
                        const ReportMetadata& meta);
std::string emit_report(const std::vector<planning::BerthPlan>& plans,
                        double sla_wait, Format format,
                        const ReportMetadata& meta);

/// Reads back the JSON form of an analytic report. Throws SyntaxError or
/// SchemaError.
analytic::SystemMetrics parse_analytic_report(std::string_view json_text);

}  // namespace seaport::io
