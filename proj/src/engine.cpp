#include "satsim/engine.hpp"

#include <algorithm>
#include <utility>

namespace satsim {

void Engine::schedule(SimTicks fire_at, Handler fn) {
    if (fire_at < now_) {
        throw SchedulingError("event scheduled in the past: fire_at=" +
                              std::to_string(fire_at) + " now=" + std::to_string(now_));
    }
    heap_.push_back(Event{fire_at, next_seqno_++, std::move(fn)});
    std::push_heap(heap_.begin(), heap_.end(), Later{});
}

std::uint64_t Engine::run_until(SimTicks t_end) {
    std::uint64_t dispatched = 0;
    while (!heap_.empty() && heap_.front().fire_at <= t_end) {
        std::pop_heap(heap_.begin(), heap_.end(), Later{});
        Event ev = std::move(heap_.back());
        heap_.pop_back();
        now_ = ev.fire_at;
        ev.fn();
        ++dispatched;
    }
    if (t_end > now_) now_ = t_end;
    return dispatched;
}

}  // namespace satsim
