#pragma once

#include <cstdint>
#include <memory>

#include "satsim/time.hpp"

namespace satsim {

using VcId = std::uint32_t;

inline constexpr std::uint32_t kCellBytes = 53;
inline constexpr std::uint32_t kCellPayloadBytes = 48;

enum class CellKind : std::uint8_t {
    Data,        // ABR-class data cell (TCP segment fragment or ACK)
    ForwardRm,   // resource management, source -> destination, carries CCR
    BackwardRm,  // resource management, destination -> source, carries ER
    VbrData,     // higher-priority background traffic
};

// Transport payload carried by the last cell of a segment. Cells of one
// segment travel contiguously on their VC; intermediate cells only count.
struct SegmentInfo {
    std::uint64_t seq = 0;      // first byte sequence number
    std::uint32_t len = 0;      // payload bytes (0 for pure ACK)
    bool is_ack = false;
    std::uint64_t ack_no = 0;
    std::uint32_t n_cells = 0;  // cells this segment was split into
};

struct Cell {
    CellKind kind = CellKind::Data;
    VcId vc = 0;
    double er = 0.0;   // cells/s, RM cells only
    double ccr = 0.0;  // cells/s, RM cells only
    std::uint64_t seg_id = 0;
    bool last_of_segment = false;
    SimTicks created_at = 0;
    std::shared_ptr<const SegmentInfo> segment;  // set on the last cell only
};

inline bool is_abr_class(const Cell& c) { return c.kind != CellKind::VbrData; }

}  // namespace satsim
