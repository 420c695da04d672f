#pragma once

#include <functional>

#include "satsim/cell.hpp"
#include "satsim/engine.hpp"

namespace satsim {

struct VbrParams {
    SimTicks on_time = kTicksPerMs;
    SimTicks off_time = kTicksPerMs;
    SimTicks start_at = 2 * kTicksPerMs;
    double peak_rate = 292000.0;  // cells/s, 0.8 * 365,000 by default
    VcId vc = 0;
};

// Deterministic ON-OFF background source. During ON, cells are spaced at
// 1/peak_rate; a cell is emitted only if its whole slot fits inside the ON
// window, so phase boundaries are exact multiples of on+off from start_at.
class VbrSource {
  public:
    using Sink = std::function<void(Cell&&)>;

    VbrSource(Engine& eng, VbrParams p, Sink sink)
        : eng_(eng), p_(p), gap_(ticks_per_cell(p.peak_rate)), sink_(std::move(sink)) {}

    void start() { eng_.schedule(p_.start_at, [this] { begin_on_period(p_.start_at); }); }

    std::uint64_t cells_emitted() const { return emitted_; }

  private:
    void begin_on_period(SimTicks phase_start) { emit(phase_start, 0); }

    void emit(SimTicks phase_start, std::uint64_t k) {
        Cell c;
        c.kind = CellKind::VbrData;
        c.vc = p_.vc;
        c.created_at = eng_.now();
        ++emitted_;
        sink_(std::move(c));

        SimTicks next = phase_start + (k + 1) * gap_;
        if (next + gap_ <= phase_start + p_.on_time) {
            eng_.schedule(next, [this, phase_start, k] { emit(phase_start, k + 1); });
        } else {
            SimTicks next_phase = phase_start + p_.on_time + p_.off_time;
            eng_.schedule(next_phase, [this, next_phase] { begin_on_period(next_phase); });
        }
    }

    Engine& eng_;
    VbrParams p_;
    SimTicks gap_;
    Sink sink_;
    std::uint64_t emitted_ = 0;
};

}  // namespace satsim
