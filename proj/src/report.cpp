#include "satsim/report.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace satsim {

namespace {

const char* service_name(ServiceClass s) {
    return s == ServiceClass::Abr ? "abr" : "ubr";
}

const char* scheme_name(Scheme s) { return s == Scheme::Erica ? "erica" : "erica+"; }

void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + p.string());
}

}  // namespace

std::string summary_text(const RunReport& rep, const ScenarioConfig& cfg) {
    std::ostringstream os;
    os << "n_sources: " << cfg.n_sources << "\n";
    os << "service: " << service_name(cfg.service) << "\n";
    os << "scheme: " << scheme_name(cfg.scheme) << "\n";
    os << "feedback_delay_ms: " << cfg.eff_feedback_delay_ms() << "\n";
    os << "rtt_ms: " << cfg.eff_rtt_ms() << "\n";
    os << "scale: " << cfg.scale << "\n";
    os << "vbr: " << (cfg.vbr_enabled ? "on" : "off") << "\n";
    os << "duration_rtts: " << cfg.duration_rtts << "\n";
    os << "rtt_in_cells: " << rep.rtt_in_cells << "\n";
    os << "max_abr_queue_cells: " << rep.max_abr_queue_cells << "\n";
    os << "max_total_queue_cells: " << rep.max_total_queue_cells << "\n";
    os << "max_queue_rtt_fraction: " << rep.max_queue_rtt_fraction << "\n";
    os << "bottleneck_utilization: " << rep.bottleneck_utilization << "\n";
    os << "bottleneck_utilization_last5rtt: " << rep.bottleneck_utilization_last5rtt << "\n";
    os << "drops: " << rep.drops << "\n";
    os << "timeouts: " << rep.timeouts << "\n";
    os << "bounded_verdict: " << to_string(rep.bounded_verdict) << "\n";
    for (std::size_t i = 0; i < rep.per_conn_goodput.size(); ++i) {
        os << "goodput_bytes_per_sec[" << i << "]: " << rep.per_conn_goodput[i] << "\n";
    }
    return os.str();
}

std::string summary_json(const RunReport& rep, const ScenarioConfig& cfg) {
    nlohmann::json j;
    j["config"] = {
        {"n_sources", cfg.n_sources},
        {"service", service_name(cfg.service)},
        {"scheme", scheme_name(cfg.scheme)},
        {"feedback_delay_ms", cfg.eff_feedback_delay_ms()},
        {"rtt_ms", cfg.eff_rtt_ms()},
        {"scale", cfg.scale},
        {"vbr", cfg.vbr_enabled},
        {"duration_rtts", cfg.duration_rtts},
        {"link_cell_rate", cfg.link_cell_rate},
        {"buffer_capacity", cfg.buffer_capacity},
        {"rcvwnd", cfg.eff_rcvwnd()},
        {"mss", cfg.mss},
        {"target_utilization", cfg.target_utilization},
    };
    j["rtt_in_cells"] = rep.rtt_in_cells;
    j["max_abr_queue_cells"] = rep.max_abr_queue_cells;
    j["max_total_queue_cells"] = rep.max_total_queue_cells;
    j["max_queue_rtt_fraction"] = rep.max_queue_rtt_fraction;
    j["per_conn_goodput_bytes_per_sec"] = rep.per_conn_goodput;
    j["bottleneck_utilization"] = rep.bottleneck_utilization;
    j["bottleneck_utilization_last5rtt"] = rep.bottleneck_utilization_last5rtt;
    j["drops"] = rep.drops;
    j["timeouts"] = rep.timeouts;
    j["discarded_segments"] = rep.discarded_segments;
    j["bounded_verdict"] = to_string(rep.bounded_verdict);
    j["rounds_to_full_window"] = rep.rounds_to_full_window;
    j["conservation_violations"] = rep.conservation_violations;
    return j.dump(2) + "\n";
}

std::string queue_csv(const RunReport& rep) {
    std::ostringstream os;
    os << "time_ms,abr_queue_cells,total_queue_cells\n";
    for (const auto& s : rep.depth_series) {
        os << s.window_ms << "," << s.abr << "," << s.total << "\n";
    }
    return os.str();
}

void emit_report(const RunReport& rep, const ScenarioConfig& cfg,
                 const std::string& out_dir) {
    std::filesystem::path dir(out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);

    write_file(dir / "summary.txt", summary_text(rep, cfg));
    write_file(dir / "summary.json", summary_json(rep, cfg));
    write_file(dir / "queue.csv", queue_csv(rep));

    if (!rep.acr_trace.empty()) {
        std::ostringstream os;
        os << "time_ms,acr_cells_per_sec\n";
        for (const auto& [t, acr] : rep.acr_trace) os << t << "," << acr << "\n";
        write_file(dir / "acr.csv", os.str());
    }
    if (!rep.cwnd_trace.empty()) {
        std::ostringstream os;
        os << "time_ms,cwnd_bytes\n";
        for (const auto& [t, w] : rep.cwnd_trace) os << t << "," << w << "\n";
        write_file(dir / "cwnd.csv", os.str());
    }
    if (!rep.erica_trace.empty()) {
        std::ostringstream os;
        os << "interval_end_time,abr_capacity,input_rate,overload,n_active,fair_share\n";
        for (const auto& r : rep.erica_trace) {
            os << r.interval_end_ms << "," << r.abr_capacity << "," << r.input_rate << ","
               << r.overload << "," << r.n_active << "," << r.fair_share << "\n";
        }
        write_file(dir / "erica.csv", os.str());
    }
}

}  // namespace satsim
