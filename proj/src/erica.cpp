#include "satsim/erica.hpp"

#include <algorithm>

namespace satsim {

void EricaPort::observe_forward(const Cell& c, SimTicks now) {
    now_ = std::max(now_, now);
    if (c.kind == CellKind::VbrData) {
        ++vbr_cbr_count_;
        return;
    }
    ++abr_input_count_;
    active_vcs_.insert(c.vc);
    if (cfg_.activity_timeout > 0) last_seen_[c.vc] = now;
    if (c.kind == CellKind::ForwardRm) {
        ccr_table_[c.vc] = c.ccr;
    }
}

double EricaPort::queue_control_capacity(double available, double abr_queue_cells) const {
    const auto& p = cfg_.plus;
    double q0 = p.t0_sec * available;
    if (q0 <= 0.0) return p.qdlf * available;
    double f = p.b * q0 / ((p.b - 1.0) * q0 + abr_queue_cells);
    f = std::clamp(f, p.qdlf, 1.0);
    return f * available;
}

EricaIntervalStats EricaPort::end_interval(SimTicks elapsed, double abr_queue_cells) {
    if (elapsed == 0) elapsed = 1;
    double elapsed_sec = ticks_to_sec(elapsed);

    // An interval with too few ABR arrivals carries no rate information: keep
    // the previous allocation instead of deriving a degenerate overload from
    // near-zero input (which would hit the floor and inflate every VC's
    // share).
    if (abr_input_count_ < cfg_.min_sample_cells && have_interval_) {
        abr_input_count_ = 0;
        vbr_cbr_count_ = 0;
        return EricaIntervalStats{abr_capacity_, 0.0, overload_, fair_share_, 0};
    }

    double measured_vbr = vbr_cbr_count_ / elapsed_sec;
    double available = cfg_.link_rate - measured_vbr - cfg_.cbr_reserved;

    double capacity;
    if (cfg_.scheme == Scheme::EricaPlus) {
        capacity = queue_control_capacity(available, abr_queue_cells);
    } else {
        capacity = target_rate() - measured_vbr - cfg_.cbr_reserved;
    }
    abr_capacity_ = std::max(capacity, cfg_.capacity_floor);

    double input_rate = abr_input_count_ / elapsed_sec;
    overload_ = std::max(input_rate / abr_capacity_, cfg_.overload_floor);

    std::size_t n_active = active_vcs_.size();
    if (cfg_.activity_timeout > 0) {
        SimTicks horizon = now_ > cfg_.activity_timeout ? now_ - cfg_.activity_timeout : 0;
        for (auto it = last_seen_.begin(); it != last_seen_.end();) {
            it = it->second < horizon ? last_seen_.erase(it) : std::next(it);
        }
        n_active = last_seen_.size();
    }
    fair_share_ = abr_capacity_ / std::max<std::size_t>(n_active, 1);

    EricaIntervalStats stats{abr_capacity_, input_rate, overload_, fair_share_,
                             static_cast<std::uint32_t>(n_active)};

    abr_input_count_ = 0;
    vbr_cbr_count_ = 0;
    active_vcs_.clear();
    have_interval_ = true;
    return stats;
}

void EricaPort::stamp_backward_rm(Cell& c) const {
    if (!have_interval_) return;

    double ccr = 0.0;  // unknown VC: treat CCR as 0, allocation is fair share
    if (auto it = ccr_table_.find(c.vc); it != ccr_table_.end()) ccr = it->second;

    double vc_share = ccr / overload_;
    double er_for_vc = std::max(fair_share_, vc_share);
    if (cfg_.er_fair_share_cap > 0.0) {
        er_for_vc = std::min(er_for_vc, cfg_.er_fair_share_cap * fair_share_);
    }
    if (cfg_.clamp_er_to_capacity) er_for_vc = std::min(er_for_vc, abr_capacity_);
    c.er = std::min(c.er, er_for_vc);
}

}  // namespace satsim
