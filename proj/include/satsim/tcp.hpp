#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "satsim/cell.hpp"
#include "satsim/engine.hpp"

namespace satsim {

struct TcpParams {
    std::uint32_t mss = 512;            // bytes
    std::uint64_t rcvwnd = 8'704'000;   // bytes, 34000 * 2^8
    std::uint32_t header_overhead = 40; // TCP/IP header bytes per segment
    std::uint32_t trailer = 8;          // AAL5-style trailer bytes
    bool delayed_ack = false;
    bool infinite_source = true;
    std::uint64_t app_bytes_limit = 0;  // used when infinite_source is false
    SimTicks rto = 0;                   // 0 disables the retransmission timer
};

// Cells a segment occupies on the wire: payload + header + trailer padded to
// whole 48-byte cell payloads. 512-byte MSS with defaults -> 12 cells.
std::uint32_t cells_for_segment(std::uint32_t len, const TcpParams& p);

// Splits a segment into cells; the last cell carries the SegmentInfo.
std::vector<Cell> segment_to_cells(const SegmentInfo& seg, VcId vc, SimTicks now,
                                   std::uint64_t seg_id);

// Counts the cells of the segment currently arriving on a VC and surfaces
// the SegmentInfo once the last cell lands with the full cell count. A short
// count (cells lost to a finite buffer) discards the segment.
class CellReassembler {
  public:
    std::optional<SegmentInfo> on_cell(const Cell& c);
    std::uint64_t discarded_segments() const { return discarded_; }

  private:
    std::uint32_t cells_seen_ = 0;
    std::uint64_t discarded_ = 0;
};

// TCP sender: slow start / congestion avoidance, static receiver window,
// whole-MSS segments, cumulative ACKs, fixed-RTO go-back-N on timeout.
class TcpSender {
  public:
    struct Stats {
        std::uint64_t timeouts = 0;
        std::uint64_t segments_sent = 0;
        std::uint32_t rounds_completed = 0;
        // Round-trip count at which cwnd first reached rcvwnd (0 = never).
        std::uint32_t rounds_to_full_window = 0;
    };
    using CellOut = std::function<void(Cell&&)>;
    using Tracer = std::function<void(SimTicks, std::uint64_t cwnd, std::uint64_t una,
                                      std::uint64_t nxt)>;

    TcpSender(Engine& eng, const TcpParams& p, VcId vc, CellOut out);

    void start();
    void on_reverse_cell(const Cell& c);  // ACK cells arriving from the receiver

    std::uint64_t cwnd() const { return cwnd_; }
    std::uint64_t ssthresh() const { return ssthresh_; }
    std::uint64_t snd_una() const { return snd_una_; }
    std::uint64_t snd_nxt() const { return snd_nxt_; }
    const Stats& stats() const { return stats_; }
    void set_tracer(Tracer t) { tracer_ = std::move(t); }

  private:
    void try_send();
    void emit_segment(std::uint64_t seq, std::uint32_t len);
    void on_ack(std::uint64_t ack_no);
    void arm_timer();
    void on_timeout();

    Engine& eng_;
    TcpParams p_;
    VcId vc_;
    CellOut out_;
    CellReassembler ack_reasm_;

    std::uint64_t snd_una_ = 0;
    std::uint64_t snd_nxt_ = 0;
    std::uint64_t cwnd_;
    std::uint64_t ssthresh_;
    std::uint64_t seg_id_ = 0;
    std::uint64_t timer_gen_ = 0;

    std::uint64_t round_end_ = 0;
    Stats stats_;
    Tracer tracer_;
};

// TCP receiver: in-order delivery with out-of-order buffering, static
// advertised window, ACK-every-segment (delayed ACK behind a flag).
class TcpReceiver {
  public:
    using CellOut = std::function<void(Cell&&)>;

    TcpReceiver(const TcpParams& p, VcId vc, CellOut ack_out)
        : p_(p), vc_(vc), ack_out_(std::move(ack_out)) {}

    void on_data_cell(const Cell& c, SimTicks now);

    std::uint64_t delivered_bytes() const { return rcv_nxt_; }
    std::uint64_t discarded_segments() const { return reasm_.discarded_segments(); }

  private:
    void send_ack(SimTicks now);

    TcpParams p_;
    VcId vc_;
    CellOut ack_out_;
    CellReassembler reasm_;
    std::uint64_t rcv_nxt_ = 0;
    std::map<std::uint64_t, std::uint32_t> ooo_;  // seq -> len
    std::uint64_t ack_seg_id_ = 0;
    std::uint32_t unacked_segments_ = 0;
};

}  // namespace satsim
