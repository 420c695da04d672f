#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "satsim/abr_endpoint.hpp"
#include "satsim/erica.hpp"
#include "satsim/port.hpp"
#include "satsim/time.hpp"

namespace satsim {

enum class Verdict : std::uint8_t { Bounded, Unbounded };

inline const char* to_string(Verdict v) {
    return v == Verdict::Bounded ? "BOUNDED" : "UNBOUNDED";
}

struct TraceFlags {
    bool queue = true;
    bool acr = false;
    bool cwnd = false;
    bool erica = false;
};

// Full experiment description for the n-source + VBR single-bottleneck
// topology. All values are stated at full scale; `scale` divides the RTT,
// the feedback delay, and the TCP receiver window together.
struct ScenarioConfig {
    std::uint32_t n_sources = 5;
    ServiceClass service = ServiceClass::Abr;
    Scheme scheme = Scheme::Erica;
    double feedback_delay_ms = 10.0;
    double rtt_ms = 550.0;
    double dest_leg_ms = 0.005;
    bool vbr_enabled = false;
    double duration_rtts = 20.0;
    double link_cell_rate = 365000.0;  // cells/s
    std::uint64_t buffer_capacity = 0;  // cells; 0 = unbounded
    double scale = 1.0;

    // ERICA. The averaging interval is a switch time constant and scales with
    // `scale` like every other delay in the system.
    double target_utilization = 0.9;
    double interval_ms = 1.0;
    std::uint32_t interval_cells = 100;
    double activity_rtts = 0.0;  // active-VC window in RTTs; 0 = per interval
    // ERICA minimum interval sample: -1 = half the effective cell trigger,
    // 0 = every interval updates (even empty ones), k > 0 = hold below k.
    std::int32_t min_sample_cells = 0;
    double cbr_reserved = 0.0;
    bool clamp_er_to_capacity = true;
    double er_fair_share_cap = 0.0;  // per-VC grant cap in fair shares; 0 = off
    double overload_floor = 0.05;
    double capacity_floor = 10.0;
    EricaPlusParams plus;

    // ABR source
    std::uint32_t nrm = 32;
    double icr_fraction = 1.0 / 32.0;  // ICR = icr_fraction * PCR
    double mcr_floor = 10.0;
    double rif = 0.0;  // max ACR increase per backward RM, as fraction of PCR
    double adtf_ms = 0.0;  // idle time after which ACR resets to ICR; 0 = off

    // TCP
    std::uint32_t mss = 512;
    std::uint64_t rcvwnd = 8'704'000;
    std::uint32_t header_overhead = 40;
    std::uint32_t trailer = 8;
    bool delayed_ack = false;
    double rto_rtts = 2.0;  // 0 disables the retransmission timer

    // VBR
    double vbr_peak_fraction = 0.8;
    double vbr_on_ms = 1.0;
    double vbr_off_ms = 1.0;
    double vbr_start_ms = 2.0;

    bool audit_conservation = false;
    TraceFlags trace;

    // Scaled (effective) quantities.
    double eff_rtt_ms() const { return rtt_ms / scale; }
    double eff_feedback_delay_ms() const { return feedback_delay_ms / scale; }
    std::uint64_t eff_rcvwnd() const {
        return static_cast<std::uint64_t>(static_cast<double>(rcvwnd) / scale);
    }
    double eff_interval_ms() const { return interval_ms / scale; }
    std::uint32_t eff_interval_cells() const {
        auto c = static_cast<std::uint32_t>(static_cast<double>(interval_cells) / scale);
        return std::max(c, 1u);
    }

    // Empty string when valid, otherwise a description of the problem.
    std::string validate() const;
};

struct EricaTraceRow {
    double interval_end_ms;
    double abr_capacity;
    double input_rate;
    double overload;
    std::uint32_t n_active;
    double fair_share;
};

struct RunReport {
    std::uint64_t max_abr_queue_cells = 0;
    std::uint64_t max_total_queue_cells = 0;
    double max_queue_rtt_fraction = 0.0;  // max ABR queue / rtt_in_cells
    std::uint64_t rtt_in_cells = 0;
    std::vector<double> per_conn_goodput = {};  // bytes/s
    double bottleneck_utilization = 0.0;
    double bottleneck_utilization_last5rtt = 0.0;
    std::uint64_t drops = 0;
    std::uint64_t timeouts = 0;
    std::uint64_t discarded_segments = 0;
    Verdict bounded_verdict = Verdict::Bounded;
    std::vector<std::uint32_t> rounds_to_full_window = {};
    std::uint64_t conservation_violations = 0;
    std::uint64_t events_dispatched = 0;

    std::vector<DepthSample> depth_series = {};  // bottleneck port, 1 ms windows
    std::vector<EricaTraceRow> erica_trace = {};
    std::vector<std::pair<double, double>> acr_trace = {};         // ms, cells/s (vc 0)
    std::vector<std::pair<double, std::uint64_t>> cwnd_trace = {}; // ms, bytes (vc 0)
};

RunReport run_scenario(const ScenarioConfig& cfg);

// Operational boundedness rule over the bottleneck depth series: UNBOUNDED
// iff the final round trip's max still carries at least 90% of the all-time
// max (the peak keeps renewing instead of draining) and exceeds 1.5x the max
// seen by the run's midpoint (the second half genuinely grew). Runs shorter
// than 10 RTTs are reported BOUNDED.
Verdict boundedness_verdict(const std::vector<DepthSample>& series,
                            SimTicks rtt, SimTicks duration);

// Presets named after the experiments they reproduce (full-scale values).
std::vector<std::string> preset_names();
ScenarioConfig preset(const std::string& name);

}  // namespace satsim
