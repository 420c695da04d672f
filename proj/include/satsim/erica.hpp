#pragma once

#include <cstdint>
#include <map>
#include <set>

#include "satsim/cell.hpp"
#include "satsim/time.hpp"

namespace satsim {

enum class Scheme : std::uint8_t { Erica, EricaPlus };

// Queue-control extension: available capacity is scaled by a hyperbolic
// factor of the current queue, f(q) = clamp(b*q0 / ((b-1)*q0 + q), qdlf, 1)
// with q0 = t0 * available. f(0..q0) = 1, f -> qdlf as q grows.
struct EricaPlusParams {
    double t0_sec = 500e-6;  // target queueing delay
    double b = 1.05;         // hyperbola steepness, > 1
    double qdlf = 0.5;       // queue-drain limit fraction, in (0, 1)
};

struct EricaConfig {
    double target_utilization = 0.9;
    double link_rate = 365000.0;  // cells/s
    SimTicks interval_len_time = kTicksPerMs;
    std::uint32_t interval_len_cells = 100;
    double cbr_reserved = 0.0;  // cells/s, constant reservation
    Scheme scheme = Scheme::Erica;
    bool clamp_er_to_capacity = true;
    // Spike reduction: cap each VC's grant at this multiple of the fair
    // share, so aggregate grants never exceed that multiple of the ABR
    // capacity regardless of the VC count. 0 = no per-VC cap (grants are
    // still limited to the full ABR capacity by clamp_er_to_capacity).
    double er_fair_share_cap = 0.0;
    double overload_floor = 0.05;
    double capacity_floor = 10.0;  // cells/s
    // A VC counts as active if seen within this window ending at the current
    // interval (0: the active set resets every interval). Window-limited TCP
    // sends its round as one burst per RTT; per-interval resets undercount
    // such VCs and inflate the fair share.
    SimTicks activity_timeout = 0;
    // Intervals with fewer ABR arrivals than this carry no usable rate sample
    // (e.g. the tail of a burst cut off by the time trigger); they keep the
    // previous allocation instead of updating it. 1 = only empty intervals.
    std::uint32_t min_sample_cells = 1;
    EricaPlusParams plus;
};

struct EricaIntervalStats {
    double abr_capacity = 0.0;
    double input_rate = 0.0;
    double overload = 1.0;
    double fair_share = 0.0;
    std::uint32_t n_active = 0;
};

// Per-output-port explicit-rate allocator. Measurement (observe_forward) and
// allocation (end_interval / stamp_backward_rm) are pure state transitions;
// the harness owns interval timing and feeds the current queue depth.
class EricaPort {
  public:
    explicit EricaPort(EricaConfig cfg) : cfg_(cfg) {}

    void observe_forward(const Cell& c, SimTicks now = 0);

    // Close the measurement interval that lasted `elapsed` and recompute the
    // allocation state. `abr_queue_cells` is the port's current ABR depth
    // (used by the ERICA+ queue control only).
    EricaIntervalStats end_interval(SimTicks elapsed, double abr_queue_cells);

    // Reduce the ER field of a backward RM cell to this port's allocation.
    // Before the first completed interval the cell passes untouched.
    void stamp_backward_rm(Cell& c) const;

    double target_rate() const { return cfg_.target_utilization * cfg_.link_rate; }
    double queue_control_capacity(double available, double abr_queue_cells) const;

    std::uint32_t cells_this_interval() const { return abr_input_count_; }
    bool interval_complete() const { return have_interval_; }
    const EricaConfig& config() const { return cfg_; }
    double overload() const { return overload_; }
    double fair_share() const { return fair_share_; }
    double abr_capacity() const { return abr_capacity_; }

  private:
    EricaConfig cfg_;

    std::uint32_t abr_input_count_ = 0;
    std::uint32_t vbr_cbr_count_ = 0;
    std::set<VcId> active_vcs_;
    std::map<VcId, SimTicks> last_seen_;  // only kept when activity_timeout > 0
    SimTicks now_ = 0;                    // latest observation time
    std::map<VcId, double> ccr_table_;  // persists across intervals

    bool have_interval_ = false;
    double overload_ = 1.0;
    double fair_share_ = 0.0;
    double abr_capacity_ = 0.0;
};

}  // namespace satsim
