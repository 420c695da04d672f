#include "satsim/port.hpp"

namespace satsim {

OutputPort::EnqueueResult OutputPort::enqueue(Cell&& c) {
    if (capacity_ != kUnbounded && total_depth() >= capacity_) {
        ++drops_;
        if (acct_) ++acct_->dropped;
        return EnqueueResult::Dropped;
    }
    if (c.kind == CellKind::VbrData) {
        vbr_.push_back(std::move(c));
    } else {
        abr_.push_back(std::move(c));
    }
    max_abr_ = std::max<std::uint64_t>(max_abr_, abr_.size());
    max_total_ = std::max<std::uint64_t>(max_total_, total_depth());
    sample();
    if (!serving_) service_next();
    return EnqueueResult::Accepted;
}

void OutputPort::service_next() {
    // Priority decision is made per cell slot: a VBR arrival during an ABR
    // cell transmission waits one cell time, then goes first.
    Cell c;
    if (!vbr_.empty()) {
        c = std::move(vbr_.front());
        vbr_.pop_front();
    } else if (!abr_.empty()) {
        c = std::move(abr_.front());
        abr_.pop_front();
    } else {
        serving_ = false;
        return;
    }
    sample();
    serving_ = true;
    link_.transmit(std::move(c));
    eng_.schedule(link_.busy_until(), [this] {
        serving_ = false;
        if (!vbr_.empty() || !abr_.empty()) service_next();
    });
}

void OutputPort::sample() {
    auto w = static_cast<std::uint32_t>(eng_.now() / kTicksPerMs);
    auto a = static_cast<std::uint32_t>(abr_.size());
    auto t = static_cast<std::uint32_t>(total_depth());
    if (series_.empty() || series_.back().window_ms != w) {
        series_.push_back(DepthSample{w, a, t});
    } else {
        series_.back().abr = std::max(series_.back().abr, a);
        series_.back().total = std::max(series_.back().total, t);
    }
}

}  // namespace satsim
