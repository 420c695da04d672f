#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "satsim/time.hpp"

namespace satsim {

// Thrown when a handler schedules an event in the virtual past. This is a
// programming error in the model, not a recoverable condition.
class SchedulingError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

// Deterministic discrete-event kernel. Events are dispatched in
// (fire_at, seqno) order; seqno is a monotone insertion counter, so events
// with equal timestamps run in the order they were scheduled.
class Engine {
  public:
    using Handler = std::function<void()>;

    void schedule(SimTicks fire_at, Handler fn);

    // Dispatches every event with fire_at <= t_end, then advances the clock
    // to t_end. Returns the number of events dispatched by this call.
    std::uint64_t run_until(SimTicks t_end);

    SimTicks now() const { return now_; }
    std::size_t pending() const { return heap_.size(); }

  private:
    struct Event {
        SimTicks fire_at;
        std::uint64_t seqno;
        Handler fn;
    };
    // Min-heap on (fire_at, seqno) via std::push_heap/pop_heap.
    struct Later {
        bool operator()(const Event& a, const Event& b) const {
            if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
            return a.seqno > b.seqno;
        }
    };

    std::vector<Event> heap_;
    SimTicks now_ = 0;
    std::uint64_t next_seqno_ = 0;
};

}  // namespace satsim
