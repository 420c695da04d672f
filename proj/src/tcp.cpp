#include "satsim/tcp.hpp"

#include <algorithm>
#include <memory>

namespace satsim {

std::uint32_t cells_for_segment(std::uint32_t len, const TcpParams& p) {
    std::uint32_t wire = len + p.header_overhead + p.trailer;
    return (wire + kCellPayloadBytes - 1) / kCellPayloadBytes;
}

std::vector<Cell> segment_to_cells(const SegmentInfo& seg, VcId vc, SimTicks now,
                                   std::uint64_t seg_id) {
    std::vector<Cell> cells;
    cells.reserve(seg.n_cells);
    for (std::uint32_t i = 0; i < seg.n_cells; ++i) {
        Cell c;
        c.kind = CellKind::Data;
        c.vc = vc;
        c.seg_id = seg_id;
        c.created_at = now;
        if (i + 1 == seg.n_cells) {
            c.last_of_segment = true;
            c.segment = std::make_shared<const SegmentInfo>(seg);
        }
        cells.push_back(std::move(c));
    }
    return cells;
}

std::optional<SegmentInfo> CellReassembler::on_cell(const Cell& c) {
    ++cells_seen_;
    if (!c.last_of_segment) return std::nullopt;
    std::uint32_t seen = cells_seen_;
    cells_seen_ = 0;
    if (c.segment && seen == c.segment->n_cells) return *c.segment;
    ++discarded_;
    return std::nullopt;
}

TcpSender::TcpSender(Engine& eng, const TcpParams& p, VcId vc, CellOut out)
    : eng_(eng), p_(p), vc_(vc), out_(std::move(out)),
      cwnd_(p.mss), ssthresh_(p.rcvwnd) {}

void TcpSender::start() {
    try_send();
    if (snd_nxt_ > 0 && stats_.rounds_completed == 0) {
        // first flight opens round 1
        stats_.rounds_completed = 0;
        round_end_ = snd_nxt_;
    }
    arm_timer();
}

void TcpSender::try_send() {
    std::uint64_t window = std::min(cwnd_, p_.rcvwnd);
    while (snd_nxt_ + p_.mss <= snd_una_ + window) {
        if (!p_.infinite_source && snd_nxt_ + p_.mss > p_.app_bytes_limit) break;
        emit_segment(snd_nxt_, p_.mss);
        snd_nxt_ += p_.mss;
    }
    if (tracer_) tracer_(eng_.now(), cwnd_, snd_una_, snd_nxt_);
}

void TcpSender::emit_segment(std::uint64_t seq, std::uint32_t len) {
    SegmentInfo seg;
    seg.seq = seq;
    seg.len = len;
    seg.n_cells = cells_for_segment(len, p_);
    ++stats_.segments_sent;
    for (auto& c : segment_to_cells(seg, vc_, eng_.now(), seg_id_++)) {
        out_(std::move(c));
    }
}

void TcpSender::on_reverse_cell(const Cell& c) {
    auto seg = ack_reasm_.on_cell(c);
    if (seg && seg->is_ack) on_ack(seg->ack_no);
}

void TcpSender::on_ack(std::uint64_t ack_no) {
    if (ack_no <= snd_una_) return;  // duplicate or old
    std::uint64_t acked = ack_no - snd_una_;
    snd_una_ = ack_no;

    if (cwnd_ < ssthresh_) {
        cwnd_ += p_.mss * (acked / p_.mss);  // slow start: +mss per acked segment
    } else {
        cwnd_ += std::max<std::uint64_t>(1, std::uint64_t(p_.mss) * p_.mss / cwnd_);
    }
    cwnd_ = std::min(cwnd_, p_.rcvwnd);

    if (round_end_ > 0 && snd_una_ >= round_end_) {
        ++stats_.rounds_completed;
        if (cwnd_ >= p_.rcvwnd && stats_.rounds_to_full_window == 0) {
            stats_.rounds_to_full_window = stats_.rounds_completed;
        }
        round_end_ = 0;  // reopened after the next flight below
    }

    arm_timer();
    try_send();
    if (round_end_ == 0 && snd_nxt_ > snd_una_) round_end_ = snd_nxt_;
}

void TcpSender::arm_timer() {
    if (p_.rto == 0) return;
    std::uint64_t gen = ++timer_gen_;
    eng_.schedule(eng_.now() + p_.rto, [this, gen] {
        if (gen == timer_gen_ && snd_nxt_ > snd_una_) on_timeout();
    });
}

void TcpSender::on_timeout() {
    ++stats_.timeouts;
    std::uint64_t outstanding = snd_nxt_ - snd_una_;
    ssthresh_ = std::max<std::uint64_t>(outstanding / 2, 2 * std::uint64_t(p_.mss));
    cwnd_ = p_.mss;
    snd_nxt_ = snd_una_;  // go-back-N
    arm_timer();
    try_send();
}

void TcpReceiver::on_data_cell(const Cell& c, SimTicks now) {
    auto seg = reasm_.on_cell(c);
    if (!seg) return;

    if (seg->seq == rcv_nxt_) {
        rcv_nxt_ += seg->len;
        // drain any buffered out-of-order segments made contiguous
        for (auto it = ooo_.begin(); it != ooo_.end() && it->first == rcv_nxt_;) {
            rcv_nxt_ += it->second;
            it = ooo_.erase(it);
        }
        ++unacked_segments_;
        if (!p_.delayed_ack || unacked_segments_ >= 2) send_ack(now);
    } else if (seg->seq > rcv_nxt_) {
        ooo_.emplace(seg->seq, seg->len);
        send_ack(now);  // duplicate ACK for rcv_nxt
    } else {
        send_ack(now);  // already-delivered segment, re-ACK
    }
}

void TcpReceiver::send_ack(SimTicks now) {
    unacked_segments_ = 0;
    SegmentInfo ack;
    ack.is_ack = true;
    ack.ack_no = rcv_nxt_;
    ack.n_cells = cells_for_segment(0, p_);
    for (auto& c : segment_to_cells(ack, vc_, now, ack_seg_id_++)) {
        ack_out_(std::move(c));
    }
}

}  // namespace satsim
