#pragma once

#include <cstdint>
#include <deque>
#include <functional>

#include "satsim/cell.hpp"
#include "satsim/engine.hpp"

namespace satsim {

enum class ServiceClass : std::uint8_t { Abr, Ubr };

struct AbrParams {
    double pcr = 365000.0;       // cells/s, = link rate
    double icr = 365000.0 / 32;  // initial ACR
    double mcr_floor = 10.0;     // cells/s
    std::uint32_t nrm = 32;      // one forward RM per nrm emitted cells
    // Rate-increase damping: each backward RM may raise ACR by at most
    // rif * PCR (decreases always take effect at once). 0 = follow ER directly.
    double rif = 0.0;
    // Use-it-or-lose-it (TM 4.0 ADTF analogue): a source that sat idle for at
    // least this long restarts from ICR instead of its stale ACR. 0 = off.
    SimTicks adtf = 0;
    ServiceClass service = ServiceClass::Abr;
};

// ABR source end system: paces the cell backlog at ACR, inserts an in-rate
// forward RM (carrying CCR = ACR) every nrm-th emitted cell, and follows the
// ER returned in backward RM cells. In UBR mode ACR is pinned to PCR and no
// RM cells are generated.
class AbrSource {
  public:
    using CellOut = std::function<void(Cell&&)>;
    using AcrTracer = std::function<void(SimTicks, double)>;

    AbrSource(Engine& eng, AbrParams p, VcId vc, CellOut out);

    void submit(Cell&& c);               // from TCP segmentation
    void on_backward_rm(const Cell& c);  // ACR <- clamp(ER)

    double acr() const { return acr_; }
    std::size_t backlog() const { return backlog_.size(); }
    void set_tracer(AcrTracer t) { tracer_ = std::move(t); }

  private:
    void schedule_next();
    void emit_now();

    Engine& eng_;
    AbrParams p_;
    VcId vc_;
    CellOut out_;

    std::deque<Cell> backlog_;
    double acr_;
    std::uint32_t cells_since_rm_;
    SimTicks last_emit_ = 0;
    bool ever_emitted_ = false;
    bool pending_ = false;
    std::uint64_t gen_ = 0;
    AcrTracer tracer_;
};

// Destination end system: turns forward RM cells around onto the reverse
// path with ER seeded at PCR and CCR copied; data cells go to the receiver.
class AbrDestination {
  public:
    using CellOut = std::function<void(Cell&&)>;
    using DataSink = std::function<void(const Cell&)>;

    AbrDestination(double pcr, CellOut reverse_out, DataSink data_sink)
        : pcr_(pcr), reverse_out_(std::move(reverse_out)), data_sink_(std::move(data_sink)) {}

    void on_cell(Cell&& c, SimTicks now);

  private:
    double pcr_;
    CellOut reverse_out_;
    DataSink data_sink_;
};

}  // namespace satsim
