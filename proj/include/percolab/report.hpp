// CSV (RFC 4180) and JSON-lines serialization of the report types. Every
// document starts with a versioned schema line and the resolved config that
// produced it.
#pragma once

#include <string>
#include <vector>

#include "percolab/domination.hpp"
#include "percolab/iic.hpp"
#include "percolab/invasion.hpp"
#include "percolab/mc_stats.hpp"
#include "percolab/near_critical.hpp"

namespace percolab {

enum class OutputFormat { csv, jsonl };

OutputFormat parse_output_format(const std::string& name);

std::string csv_quote(const std::string& field);

// One estimate as a single-row document (crossing, onearm, disconnection).
std::string format_estimate(const Estimate& est, const std::string& label,
                            OutputFormat format, const std::string& config_json);

std::string format_correlation_table(const CorrelationTable& table, OutputFormat format,
                                     const std::string& config_json);

std::string format_nu_estimate(const NuEstimate& nu, OutputFormat format,
                               const std::string& config_json);

std::string format_certificate(const CertificateOutcome& outcome, OutputFormat format,
                               const std::string& config_json);

std::string format_gap_report(const GapReport& report, OutputFormat format,
                              const std::string& config_json);

std::string format_dsv_report(const DsvReport& report, OutputFormat format,
                              const std::string& config_json);

// (step, edge endpoints, weight) records of an invasion trace.
std::string format_trace(const InvasionState& state, OutputFormat format,
                         const std::string& config_json);

// Human-readable gap summary (stderr companion to the CSV).
std::string summarize_gap_report(const GapReport& report);

}  // namespace percolab
