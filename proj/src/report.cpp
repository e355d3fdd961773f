#include "percolab/report.hpp"

#include <cmath>
#include <sstream>

#include "percolab/errors.hpp"

#include <json.hpp>

namespace percolab {

namespace {

using nlohmann::json;

std::string seed_label(const SeedSpec& seed) {
    return std::to_string(seed.master_seed) + (seed.purpose.empty() ? "" : "/" + seed.purpose);
}

void fmt(std::ostringstream& os, double v) {
    if (std::isinf(v)) {
        os << (v > 0 ? "inf" : "-inf");
    } else {
        os << v;
    }
}

struct Doc {
    std::ostringstream csv;
    std::vector<json> lines;
    OutputFormat format;
    explicit Doc(OutputFormat f, const std::string& schema, const std::string& config_json)
        : format(f) {
        if (format == OutputFormat::csv) {
            csv << "# " << schema << "\n";
            csv << "# config: " << config_json << "\n";
        } else {
            json head;
            head["schema"] = schema;
            head["config"] = json::parse(config_json);
            lines.push_back(head);
        }
        csv.precision(12);
    }
    std::string str() {
        if (format == OutputFormat::csv) return csv.str();
        std::string out;
        for (const json& l : lines) out += l.dump() + "\n";
        return out;
    }
};

json estimate_json(const Estimate& est) {
    json j;
    j["point"] = est.point;
    j["lo"] = est.lo;
    j["hi"] = est.hi;
    j["confidence"] = est.confidence;
    j["replicas"] = est.trials;
    if (est.successes >= 0) j["successes"] = est.successes;
    j["seed"] = seed_label(est.seed);
    return j;
}

}  // namespace

OutputFormat parse_output_format(const std::string& name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "jsonl") return OutputFormat::jsonl;
    throw config_error("output format must be 'csv' or 'jsonl', got '" + name + "'");
}

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (const char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

std::string format_estimate(const Estimate& est, const std::string& label,
                            OutputFormat format, const std::string& config_json) {
    Doc doc(format, "percolab estimate v1", config_json);
    if (format == OutputFormat::csv) {
        doc.csv << "label,point,ci_lo,ci_hi,confidence,replicas,successes,seed\n";
        doc.csv << csv_quote(label) << "," << est.point << "," << est.lo << "," << est.hi << ","
                << est.confidence << "," << est.trials << "," << est.successes << ","
                << csv_quote(seed_label(est.seed)) << "\n";
    } else {
        json j = estimate_json(est);
        j["label"] = label;
        doc.lines.push_back(j);
    }
    return doc.str();
}

std::string format_correlation_table(const CorrelationTable& table, OutputFormat format,
                                     const std::string& config_json) {
    Doc doc(format, "percolab corrlen v1", config_json);
    if (format == OutputFormat::csv) {
        doc.csv << "n,epsilon,p_hat,ci_lo,ci_hi,replicas,divergence_stat,seed\n";
        for (const CorrelationRow& row : table.rows) {
            doc.csv << row.n << "," << row.epsilon << "," << row.p_hat << "," << row.ci_lo << ","
                    << row.ci_hi << "," << row.replicas << "," << row.divergence_stat << ","
                    << csv_quote(seed_label(row.seed)) << "\n";
        }
    } else {
        for (const CorrelationRow& row : table.rows) {
            json j;
            j["n"] = row.n;
            j["epsilon"] = row.epsilon;
            j["p_hat"] = row.p_hat;
            j["ci_lo"] = row.ci_lo;
            j["ci_hi"] = row.ci_hi;
            j["replicas"] = row.replicas;
            j["divergence_stat"] = row.divergence_stat;
            j["crossing_at_phat"] = row.crossing_at_phat;
            j["degenerate"] = row.degenerate;
            j["seed"] = seed_label(row.seed);
            doc.lines.push_back(j);
        }
    }
    return doc.str();
}

std::string format_nu_estimate(const NuEstimate& nu, OutputFormat format,
                               const std::string& config_json) {
    Doc doc(format, "percolab iic-nu v1", config_json);
    if (format == OutputFormat::csv) {
        doc.csv << "n,N,prefactor,ratio,ci_lo,ci_hi,lower,upper,C_hat,seed\n";
        doc.csv << nu.annulus.inner << "," << nu.conditioning_radius << "," << nu.prefactor << ","
                << nu.ratio.point << "," << nu.ratio.lo << "," << nu.ratio.hi << ","
                << nu.sandwich_lower << "," << nu.sandwich_upper << "," << nu.c_hat << ","
                << csv_quote(seed_label(nu.ratio.seed)) << "\n";
    } else {
        json j;
        j["n"] = nu.annulus.inner;
        j["N"] = nu.conditioning_radius;
        j["annulus_edges"] = nu.annulus.edge_count;
        j["prefactor"] = nu.prefactor;
        j["ratio"] = estimate_json(nu.ratio);
        j["nu_point"] = nu.nu_point;
        j["nu_lo"] = nu.nu_lo;
        j["nu_hi"] = nu.nu_hi;
        j["sandwich_lower"] = nu.sandwich_lower;
        j["sandwich_upper"] = nu.sandwich_upper;
        j["C_hat"] = nu.c_hat;
        j["sandwich_flagged"] = nu.sandwich_flagged;
        doc.lines.push_back(j);
    }
    return doc.str();
}

std::string format_certificate(const CertificateOutcome& outcome, OutputFormat format,
                               const std::string& config_json) {
    Doc doc(format, "percolab certificate v1 (bounds in log10)", config_json);
    if (format == OutputFormat::csv) {
        doc.csv << "n,p,event_edges,disconnection,disc_ci_lo,disc_ci_hi,log10_prefactor,"
                   "log10_bound,cross_qualifying,cross_covered,cross_censored,cross_violations,seed\n";
        doc.csv << outcome.n << "," << outcome.p << "," << outcome.event_edges << ","
                << outcome.disconnection.point << "," << outcome.disconnection.lo << ","
                << outcome.disconnection.hi << "," << outcome.log10_prefactor << ",";
        fmt(doc.csv, outcome.log10_bound);
        const auto cc = outcome.cross_check;
        doc.csv << "," << (cc ? cc->qualifying : -1) << "," << (cc ? cc->covered : -1) << ","
                << (cc ? cc->censored_without_coverage : -1) << "," << (cc ? cc->violations : -1)
                << "," << csv_quote(seed_label(outcome.disconnection.seed)) << "\n";
    } else {
        json j;
        j["n"] = outcome.n;
        j["p"] = outcome.p;
        j["event_edges"] = outcome.event_edges;
        j["disconnection"] = estimate_json(outcome.disconnection);
        j["log10_prefactor"] = outcome.log10_prefactor;
        j["log10_bound"] = std::isinf(outcome.log10_bound) ? json("-inf") : json(outcome.log10_bound);
        if (outcome.cross_check) {
            json c;
            c["fields_examined"] = outcome.cross_check->fields_examined;
            c["qualifying"] = outcome.cross_check->qualifying;
            c["covered"] = outcome.cross_check->covered;
            c["censored_without_coverage"] = outcome.cross_check->censored_without_coverage;
            c["violations"] = outcome.cross_check->violations;
            j["cross_check"] = c;
        }
        doc.lines.push_back(j);
    }
    return doc.str();
}

std::string format_gap_report(const GapReport& report, OutputFormat format,
                              const std::string& config_json) {
    Doc doc(format, "percolab gap v1 (ipc_lower, iic_upper, ratio in log10)", config_json);
    if (format == OutputFormat::csv) {
        doc.csv << "n,p_star,ipc_lower,iic_upper,ratio,verdict,pn_hat,divergence_stat,seeds\n";
        for (const GapRow& row : report.rows) {
            doc.csv << row.n << "," << row.p_star << ",";
            fmt(doc.csv, row.log10_ipc_lower);
            doc.csv << ",";
            fmt(doc.csv, row.log10_iic_upper);
            doc.csv << ",";
            fmt(doc.csv, row.log10_ratio);
            doc.csv << "," << (row.verdict_ratio_ge_2 ? "ratio>=2" : "ratio<2") << ","
                    << row.pn_hat << "," << row.divergence_stat << ","
                    << csv_quote(seed_label(row.seed)) << "\n";
        }
    } else {
        for (const GapRow& row : report.rows) {
            json j;
            j["n"] = row.n;
            j["p_star"] = row.p_star;
            j["log10_ipc_lower"] = row.log10_ipc_lower;
            j["log10_iic_upper"] = row.log10_iic_upper;
            j["log10_ratio"] = row.log10_ratio;
            j["verdict_ratio_ge_2"] = row.verdict_ratio_ge_2;
            j["pn_hat"] = row.pn_hat;
            j["divergence_stat"] = row.divergence_stat;
            j["event_edges"] = row.event_edges;
            j["seed"] = seed_label(row.seed);
            doc.lines.push_back(j);
        }
    }
    return doc.str();
}

std::string format_dsv_report(const DsvReport& report, OutputFormat format,
                              const std::string& config_json) {
    Doc doc(format, "percolab dsv v1", config_json);
    if (format == OutputFormat::csv) {
        doc.csv << "source,window_inner,window_outer,freq,ci_lo,ci_hi,effective,censored,"
                   "censoring_rate,horizon,seed\n";
        for (const DsvWindowStat& stat : report.windows) {
            doc.csv << (report.source == ClusterSource::ipc ? "ipc" : "iic") << ","
                    << stat.window.inner << "," << stat.window.outer << ","
                    << stat.no_disconnecting_frequency.point << ","
                    << stat.no_disconnecting_frequency.lo << ","
                    << stat.no_disconnecting_frequency.hi << "," << report.effective << ","
                    << report.censored << "," << report.censoring_rate << "," << report.horizon
                    << "," << csv_quote(seed_label(report.seed)) << "\n";
        }
    } else {
        for (const DsvWindowStat& stat : report.windows) {
            json j;
            j["source"] = report.source == ClusterSource::ipc ? "ipc" : "iic";
            j["window_inner"] = stat.window.inner;
            j["window_outer"] = stat.window.outer;
            j["frequency"] = estimate_json(stat.no_disconnecting_frequency);
            j["effective"] = report.effective;
            j["censored"] = report.censored;
            j["censoring_rate"] = report.censoring_rate;
            j["horizon_too_small"] = report.horizon_too_small;
            j["horizon"] = report.horizon;
            doc.lines.push_back(j);
        }
    }
    return doc.str();
}

std::string format_trace(const InvasionState& state, OutputFormat format,
                         const std::string& config_json) {
    Doc doc(format, "percolab trace v1", config_json);
    if (format == OutputFormat::csv) {
        doc.csv << "step,ax,ay,bx,by,weight\n";
        std::int64_t step = 0;
        for (const TraceEntry& entry : state.trace()) {
            const Edge e = edge_from_key(entry.edge);
            doc.csv << step++ << "," << e.a.x << "," << e.a.y << "," << e.b.x << "," << e.b.y
                    << "," << entry.weight << "\n";
        }
    } else {
        std::int64_t step = 0;
        for (const TraceEntry& entry : state.trace()) {
            const Edge e = edge_from_key(entry.edge);
            json j;
            j["step"] = step++;
            j["a"] = {e.a.x, e.a.y};
            j["b"] = {e.b.x, e.b.y};
            j["weight"] = entry.weight;
            doc.lines.push_back(j);
        }
    }
    return doc.str();
}

std::string summarize_gap_report(const GapReport& report) {
    std::ostringstream os;
    os.precision(6);
    os << "gap summary (epsilon=" << report.epsilon << ", iic factor=" << report.iic_factor
       << ")\n";
    for (const GapRow& row : report.rows) {
        os << "  n=" << row.n << ": p*=" << row.p_star << ", log10 IPC lower=" << row.log10_ipc_lower
           << ", log10 IIC upper=" << row.log10_iic_upper << ", log10 ratio=" << row.log10_ratio
           << (row.verdict_ratio_ge_2 ? "  [ratio >= 2]" : "") << "\n";
    }
    for (const int n : report.skipped) os << "  n=" << n << ": skipped (p_n unresolved)\n";
    os << "  ratio increasing: " << (report.ratio_increasing ? "yes" : "no")
       << "; slope of log10 ratio vs (p_n-p_c)n^2: " << report.regression_slope << "\n";
    if (report.witness_n) {
        os << "  witness: ratio >= 2 first reached at n=" << *report.witness_n << "\n";
    } else {
        os << "  no ratio >= 2 witness at these scales (growth trend is the check)\n";
    }
    return os.str();
}

}  // namespace percolab
