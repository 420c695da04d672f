#pragma once

#include <cstdint>
#include <functional>
#include <utility>

#include "satsim/cell.hpp"
#include "satsim/engine.hpp"

namespace satsim {

// Shared cell-conservation counters. Links keep in_flight current; producers
// bump injected at first transmission and terminal sinks bump delivered.
struct Accounting {
    std::uint64_t injected = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;
    std::int64_t in_flight = 0;
};

// Point-to-point link: fixed cell transmission time plus propagation delay.
// A cell handed to transmit() is delivered to the sink at
// max(now, busy_until) + cell_tx_time + prop_delay; busy_until tracks the
// transmitter horizon so back-to-back cells serialize.
class Link {
  public:
    using Sink = std::function<void(Cell&&)>;

    Link(Engine& eng, SimTicks cell_tx_time, SimTicks prop_delay, Sink sink,
         Accounting* acct = nullptr)
        : eng_(eng), tx_(cell_tx_time), prop_(prop_delay), sink_(std::move(sink)),
          acct_(acct) {}

    SimTicks transmit(Cell&& c) {
        SimTicks start = std::max(eng_.now(), busy_until_);
        busy_until_ = start + tx_;
        SimTicks deliver_at = busy_until_ + prop_;
        ++carried_;
        if (acct_) ++acct_->in_flight;
        eng_.schedule(deliver_at, [this, cell = std::move(c)]() mutable {
            if (acct_) --acct_->in_flight;
            sink_(std::move(cell));
        });
        return deliver_at;
    }

    SimTicks busy_until() const { return busy_until_; }
    SimTicks cell_tx_time() const { return tx_; }
    std::uint64_t cells_carried() const { return carried_; }

  private:
    Engine& eng_;
    SimTicks tx_;
    SimTicks prop_;
    SimTicks busy_until_ = 0;
    Sink sink_;
    Accounting* acct_;
    std::uint64_t carried_ = 0;
};

}  // namespace satsim
