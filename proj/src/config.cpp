#include "satsim/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace satsim {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

ServiceClass parse_service(const std::string& v) {
    if (v == "abr") return ServiceClass::Abr;
    if (v == "ubr") return ServiceClass::Ubr;
    throw std::invalid_argument("service must be abr or ubr, got '" + v + "'");
}

Scheme parse_scheme(const std::string& v) {
    if (v == "erica") return Scheme::Erica;
    if (v == "erica+" || v == "erica_plus") return Scheme::EricaPlus;
    throw std::invalid_argument("scheme must be erica or erica+, got '" + v + "'");
}

bool parse_bool(const std::string& v) {
    if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
    if (v == "off" || v == "false" || v == "0" || v == "no") return false;
    throw std::invalid_argument("expected boolean, got '" + v + "'");
}

}  // namespace

void apply_setting(ScenarioConfig& cfg, const std::string& rawkey, const std::string& rawval) {
    std::string key = trim(rawkey), v = trim(rawval);
    try {
        if (key == "n_sources") cfg.n_sources = std::stoul(v);
        else if (key == "service") cfg.service = parse_service(v);
        else if (key == "scheme") cfg.scheme = parse_scheme(v);
        else if (key == "feedback_delay_ms") cfg.feedback_delay_ms = std::stod(v);
        else if (key == "rtt_ms") cfg.rtt_ms = std::stod(v);
        else if (key == "dest_leg_ms") cfg.dest_leg_ms = std::stod(v);
        else if (key == "vbr") cfg.vbr_enabled = parse_bool(v);
        else if (key == "duration_rtts") cfg.duration_rtts = std::stod(v);
        else if (key == "link_cell_rate") cfg.link_cell_rate = std::stod(v);
        else if (key == "buffer_capacity") cfg.buffer_capacity = v == "unbounded" ? 0 : std::stoull(v);
        else if (key == "scale") cfg.scale = std::stod(v);
        else if (key == "target_utilization") cfg.target_utilization = std::stod(v);
        else if (key == "interval_ms") cfg.interval_ms = std::stod(v);
        else if (key == "interval_cells") cfg.interval_cells = std::stoul(v);
        else if (key == "activity_rtts") cfg.activity_rtts = std::stod(v);
        else if (key == "min_sample_cells") cfg.min_sample_cells = std::stoi(v);
        else if (key == "rif") cfg.rif = std::stod(v);
        else if (key == "adtf_ms") cfg.adtf_ms = std::stod(v);
        else if (key == "cbr_reserved") cfg.cbr_reserved = std::stod(v);
        else if (key == "clamp_er_to_capacity") cfg.clamp_er_to_capacity = parse_bool(v);
        else if (key == "er_fair_share_cap") cfg.er_fair_share_cap = std::stod(v);
        else if (key == "overload_floor") cfg.overload_floor = std::stod(v);
        else if (key == "capacity_floor") cfg.capacity_floor = std::stod(v);
        else if (key == "erica_plus_t0_us") cfg.plus.t0_sec = std::stod(v) * 1e-6;
        else if (key == "erica_plus_b") cfg.plus.b = std::stod(v);
        else if (key == "erica_plus_qdlf") cfg.plus.qdlf = std::stod(v);
        else if (key == "nrm") cfg.nrm = std::stoul(v);
        else if (key == "icr_fraction") cfg.icr_fraction = std::stod(v);
        else if (key == "mcr_floor") cfg.mcr_floor = std::stod(v);
        else if (key == "mss") cfg.mss = std::stoul(v);
        else if (key == "rcvwnd") cfg.rcvwnd = std::stoull(v);
        else if (key == "header_overhead") cfg.header_overhead = std::stoul(v);
        else if (key == "trailer") cfg.trailer = std::stoul(v);
        else if (key == "delayed_ack") cfg.delayed_ack = parse_bool(v);
        else if (key == "rto_rtts") cfg.rto_rtts = std::stod(v);
        else if (key == "vbr_peak_fraction") cfg.vbr_peak_fraction = std::stod(v);
        else if (key == "vbr_on_ms") cfg.vbr_on_ms = std::stod(v);
        else if (key == "vbr_off_ms") cfg.vbr_off_ms = std::stod(v);
        else if (key == "vbr_start_ms") cfg.vbr_start_ms = std::stod(v);
        else if (key == "audit_conservation") cfg.audit_conservation = parse_bool(v);
        else throw std::invalid_argument("unknown config key '" + key + "'");
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception&) {
        throw std::invalid_argument("bad value '" + v + "' for key '" + key + "'");
    }
}

ScenarioConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    ScenarioConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": expected 'key = value'");
        }
        apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
    }
    return cfg;
}

}  // namespace satsim
