#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <vector>

#include "satsim/cell.hpp"
#include "satsim/engine.hpp"
#include "satsim/link.hpp"

namespace satsim {

// One sampled (or transition-maxed) queue depth per 1 ms window.
struct DepthSample {
    std::uint32_t window_ms;
    std::uint32_t abr;    // max ABR-class depth seen in this window
    std::uint32_t total;  // max total depth seen in this window
};

// Output-queued switch port feeding one link. Two class FIFOs; VBR cells are
// served with strict non-preemptive priority over ABR-class cells. Tail drop
// when a finite capacity is reached (counting both classes).
class OutputPort {
  public:
    static constexpr std::uint64_t kUnbounded = 0;

    enum class EnqueueResult { Accepted, Dropped };

    OutputPort(Engine& eng, SimTicks cell_tx_time, SimTicks prop_delay,
               Link::Sink sink, std::uint64_t capacity_cells = kUnbounded,
               Accounting* acct = nullptr)
        : eng_(eng),
          link_(eng, cell_tx_time, prop_delay, std::move(sink), acct),
          capacity_(capacity_cells), acct_(acct) {}

    EnqueueResult enqueue(Cell&& c);

    // Force a depth sample into the current 1 ms window (periodic sampler).
    void record_depth() { sample(); }

    std::size_t abr_depth() const { return abr_.size(); }
    std::size_t vbr_depth() const { return vbr_.size(); }
    std::size_t total_depth() const { return abr_.size() + vbr_.size(); }

    std::uint64_t max_abr_depth() const { return max_abr_; }
    std::uint64_t max_total_depth() const { return max_total_; }
    std::uint64_t drops() const { return drops_; }

    const std::vector<DepthSample>& depth_series() const { return series_; }
    Link& link() { return link_; }

  private:
    void service_next();
    void sample();

    Engine& eng_;
    Link link_;
    std::uint64_t capacity_;
    Accounting* acct_;

    std::deque<Cell> abr_;
    std::deque<Cell> vbr_;
    bool serving_ = false;

    std::uint64_t max_abr_ = 0;
    std::uint64_t max_total_ = 0;
    std::uint64_t drops_ = 0;
    std::vector<DepthSample> series_;
};

}  // namespace satsim
