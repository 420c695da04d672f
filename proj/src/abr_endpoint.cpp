#include "satsim/abr_endpoint.hpp"

#include <algorithm>

namespace satsim {

AbrSource::AbrSource(Engine& eng, AbrParams p, VcId vc, CellOut out)
    : eng_(eng), p_(p), vc_(vc), out_(std::move(out)),
      acr_(p.service == ServiceClass::Ubr ? p.pcr : p.icr),
      cells_since_rm_(p.nrm > 0 ? p.nrm - 1 : 0) {}

void AbrSource::submit(Cell&& c) {
    if (!pending_ && p_.service == ServiceClass::Abr && p_.adtf > 0 && ever_emitted_ &&
        eng_.now() - last_emit_ >= p_.adtf && acr_ > p_.icr) {
        acr_ = p_.icr;
        // Ask for a fresh allocation right away instead of waiting out the
        // rest of the nrm count at ICR pace.
        cells_since_rm_ = p_.nrm > 0 ? p_.nrm - 1 : 0;
        if (tracer_) tracer_(eng_.now(), acr_);
    }
    backlog_.push_back(std::move(c));
    if (!pending_) schedule_next();
}

void AbrSource::on_backward_rm(const Cell& c) {
    if (p_.service == ServiceClass::Ubr) return;
    double acr = std::min(c.er, p_.pcr);
    acr = std::max(acr, p_.mcr_floor);
    if (p_.rif > 0.0 && acr > acr_) {
        acr = std::min(acr, acr_ + p_.rif * p_.pcr);
    }
    if (acr == acr_) return;
    acr_ = acr;
    if (tracer_) tracer_(eng_.now(), acr_);
    // re-time the pending emission against the new rate
    schedule_next();
}

void AbrSource::schedule_next() {
    ++gen_;  // invalidates any previously scheduled emission
    if (backlog_.empty()) {
        pending_ = false;
        return;
    }
    SimTicks earliest = ever_emitted_ ? last_emit_ + ticks_per_cell(acr_) : eng_.now();
    SimTicks at = std::max(eng_.now(), earliest);
    pending_ = true;
    eng_.schedule(at, [this, g = gen_] {
        if (g == gen_) emit_now();
    });
}

void AbrSource::emit_now() {
    bool send_rm = p_.service == ServiceClass::Abr && p_.nrm > 0 &&
                   cells_since_rm_ >= p_.nrm - 1;
    Cell c;
    if (send_rm) {
        c.kind = CellKind::ForwardRm;
        c.vc = vc_;
        c.ccr = acr_;
        c.er = p_.pcr;
        c.created_at = eng_.now();
        cells_since_rm_ = 0;
    } else {
        c = std::move(backlog_.front());
        backlog_.pop_front();
        ++cells_since_rm_;
    }
    last_emit_ = eng_.now();
    ever_emitted_ = true;
    out_(std::move(c));
    schedule_next();
}

void AbrDestination::on_cell(Cell&& c, SimTicks now) {
    if (c.kind == CellKind::ForwardRm) {
        Cell back;
        back.kind = CellKind::BackwardRm;
        back.vc = c.vc;
        back.er = pcr_;
        back.ccr = c.ccr;
        back.created_at = now;
        reverse_out_(std::move(back));
    } else {
        data_sink_(c);
    }
}

}  // namespace satsim
