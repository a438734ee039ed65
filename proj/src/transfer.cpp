#include "sharedpim/transfer.hpp"

#include <algorithm>

#include "sharedpim/errors.hpp"

namespace sharedpim {

const char* mechanism_name(Mechanism m) {
    switch (m) {
        case Mechanism::MemcpyChannel: return "memcpy";
        case Mechanism::RowcloneIntraSA: return "rc_intra";
        case Mechanism::RowcloneInterSA: return "rc_inter";
        case Mechanism::LisaRisc: return "lisa";
        case Mechanism::SharedPimBus: return "sharedpim";
    }
    return "unknown";
}

namespace {

bool bank_local(Mechanism m) {
    return m == Mechanism::RowcloneIntraSA || m == Mechanism::RowcloneInterSA ||
           m == Mechanism::LisaRisc || m == Mechanism::SharedPimBus;
}

void check_request(const CopyRequest& req, const Geometry& g) {
    if (req.dsts.empty())
        throw TransferError(TransferErrorKind::BadRequest, "copy request has no destination");
    if (req.dsts.size() > 1 && req.mechanism != Mechanism::SharedPimBus)
        throw TransferError(TransferErrorKind::BadRequest,
                            "multi-destination copy requires the bank bus");
    if (req.dsts.size() > 4)
        throw TransferError(TransferErrorKind::BroadcastLimit,
                            "broadcast limited to four destination rows");
    if (req.dsts.size() > 1 && !req.staged)
        throw TransferError(TransferErrorKind::UnstagedBroadcast,
                            "broadcast requires operands staged in shared rows");
    g.check_address(req.src);
    for (const RowAddress& d : req.dsts) {
        g.check_address(d);
        if (bank_local(req.mechanism) && d.bank != req.src.bank)
            throw TransferError(TransferErrorKind::CrossBank,
                                "mechanism cannot copy across banks");
        if (req.mechanism == Mechanism::RowcloneIntraSA && d.subarray != req.src.subarray)
            throw TransferError(TransferErrorKind::CrossSubarray,
                                "intra-subarray clone requires one subarray");
    }
}

std::vector<std::pair<int, int>> bank_segments(const Geometry& g, int bank) {
    std::vector<std::pair<int, int>> out;
    for (int s = 0; s < g.config().bus_segments_per_bank; ++s) out.emplace_back(bank, s);
    return out;
}

}  // namespace

double copy_latency(const CopyRequest& req, const Geometry& g, const TimingParams& t,
                    const MechanismParams& m) {
    check_request(req, g);
    switch (req.mechanism) {
        case Mechanism::MemcpyChannel:
            return m.memcpy_ns;
        case Mechanism::RowcloneInterSA:
            return m.rc_inter_ns;
        case Mechanism::RowcloneIntraSA:
            return aap_latency(t);
        case Mechanism::LisaRisc: {
            int d = g.subarray_distance(req.src, req.dsts.front());
            if (d == 0) return aap_latency(t);
            return m.lisa_base_ns + (d - 1) * m.lisa_extra_hop_ns;
        }
        case Mechanism::SharedPimBus:
            return req.staged ? aap_latency(t) : 3.0 * aap_latency(t);
    }
    throw TransferError(TransferErrorKind::BadRequest, "unknown mechanism");
}

ResourceClaim occupancy(const CopyRequest& req, const Geometry& g, const TimingParams& t,
                        const MechanismParams& m) {
    ResourceClaim claim;
    claim.duration_ns = copy_latency(req, g, t, m);
    const RowAddress& src = req.src;
    switch (req.mechanism) {
        case Mechanism::MemcpyChannel:
        case Mechanism::RowcloneInterSA: {
            claim.blocks_compute_at_endpoints = true;
            claim.uses_channel = true;
            claim.stalled_subarrays.emplace_back(src.bank, src.subarray);
            for (const RowAddress& d : req.dsts)
                if (d.bank != src.bank || d.subarray != src.subarray)
                    claim.stalled_subarrays.emplace_back(d.bank, d.subarray);
            break;
        }
        case Mechanism::RowcloneIntraSA: {
            claim.blocks_compute_at_endpoints = true;
            claim.stalled_subarrays.emplace_back(src.bank, src.subarray);
            break;
        }
        case Mechanism::LisaRisc: {
            claim.blocks_compute_at_endpoints = true;
            int lo = std::min(src.subarray, req.dsts.front().subarray);
            int hi = std::max(src.subarray, req.dsts.front().subarray);
            for (int s = lo; s <= hi; ++s) claim.stalled_subarrays.emplace_back(src.bank, s);
            break;
        }
        case Mechanism::SharedPimBus: {
            claim.busy_bus_segments = bank_segments(g, src.bank);
            claim.busy_shared_rows.emplace_back(src.bank, src.subarray, 0);
            for (const RowAddress& d : req.dsts)
                claim.busy_shared_rows.emplace_back(d.bank, d.subarray, 0);
            break;
        }
    }
    return claim;
}

std::pair<double, ResourceClaim> broadcast_claim(const RowAddress& src,
                                                 const std::vector<RowAddress>& dsts,
                                                 const Geometry& g, const TimingParams& t) {
    CopyRequest req{Mechanism::SharedPimBus, src, dsts, true};
    check_request(req, g);
    if (src.row < g.first_shared_row())
        throw TransferError(TransferErrorKind::BadRequest, "broadcast source must be a shared row");
    for (const RowAddress& d : dsts)
        if (d.row < g.first_shared_row())
            throw TransferError(TransferErrorKind::BadRequest,
                                "broadcast destinations must be shared rows");
    ResourceClaim claim;
    claim.duration_ns = aap_latency(t);
    claim.busy_bus_segments = bank_segments(g, src.bank);
    claim.busy_shared_rows.emplace_back(src.bank, src.subarray, g.shared_slot_of_row(src.row));
    for (const RowAddress& d : dsts)
        claim.busy_shared_rows.emplace_back(d.bank, d.subarray, g.shared_slot_of_row(d.row));
    return {claim.duration_ns, claim};
}

std::vector<Command> command_sequence(const CopyRequest& req, const Geometry& g,
                                      const TimingParams& t, const MechanismParams& m) {
    double total = copy_latency(req, g, t, m);
    const RowAddress& src = req.src;
    const RowAddress& dst = req.dsts.front();
    std::vector<Command> seq;
    auto aap = [&](CommandKind kind, double at, const RowAddress& a, const RowAddress& b,
                   bool on_bus) {
        seq.push_back({kind, at, a.bank, a.subarray, a.row, -1, on_bus});
        seq.push_back({kind, at + t.aap_offset_ns, b.bank, b.subarray, b.row, -1, on_bus});
        seq.push_back({CommandKind::Precharge, at + t.aap_offset_ns + t.t_ras_ns, a.bank,
                       a.subarray, a.row, -1, on_bus});
    };
    switch (req.mechanism) {
        case Mechanism::RowcloneIntraSA:
            aap(CommandKind::Activate, 0.0, src, dst, false);
            break;
        case Mechanism::SharedPimBus: {
            double at = 0.0;
            if (!req.staged) {
                RowAddress stage = g.shared_row(src.bank, src.subarray, 0, RowKind::SharedLocal);
                aap(CommandKind::Activate, at, src, stage, false);
                at += aap_latency(t);
            }
            // Bus transaction: overlapped global-wordline activations, one per
            // endpoint; broadcast raises every destination at the same instant.
            // On the bus domain a raised line is a subarray's GWL, so the row
            // field carries the subarray index.
            seq.push_back({CommandKind::GwlActivate, at, src.bank, src.subarray, src.subarray, -1,
                           true});
            for (const RowAddress& d : req.dsts)
                seq.push_back({CommandKind::GwlActivate, at + t.aap_offset_ns, d.bank, d.subarray,
                               d.subarray, -1, true});
            seq.push_back({CommandKind::Precharge, at + t.aap_offset_ns + t.t_ras_ns, src.bank,
                           src.subarray, src.subarray, -1, true});
            at += aap_latency(t);
            if (!req.staged) {
                RowAddress stage = g.shared_row(dst.bank, dst.subarray, 0, RowKind::SharedLocal);
                aap(CommandKind::Activate, at, stage, dst, false);
            }
            break;
        }
        case Mechanism::LisaRisc: {
            seq.push_back({CommandKind::Activate, 0.0, src.bank, src.subarray, src.row, -1, false});
            int d = g.subarray_distance(src, dst);
            int step = dst.subarray >= src.subarray ? 1 : -1;
            double hop_at = t.t_rcd_ns;
            for (int h = 0; h < d; ++h) {
                int from = src.subarray + step * h;
                seq.push_back({CommandKind::Rbm, hop_at, src.bank, from, src.row, from + step,
                               false});
                hop_at += m.lisa_extra_hop_ns;
            }
            seq.push_back({CommandKind::Precharge, total - t.t_rp_ns, src.bank, src.subarray,
                           src.row, -1, false});
            break;
        }
        case Mechanism::RowcloneInterSA:
        case Mechanism::MemcpyChannel: {
            bool channel = req.mechanism == Mechanism::MemcpyChannel;
            seq.push_back({CommandKind::Activate, 0.0, src.bank, src.subarray, src.row, -1, false});
            seq.push_back({channel ? CommandKind::Read : CommandKind::Rbm, t.t_rcd_ns, src.bank,
                           src.subarray, src.row, -1, false});
            seq.push_back({CommandKind::Activate, 0.0, dst.bank, dst.subarray, dst.row, -1,
                           false});
            seq.push_back({channel ? CommandKind::Write : CommandKind::Rbm, t.t_rcd_ns, dst.bank,
                           dst.subarray, dst.row, -1, false});
            seq.push_back({CommandKind::Precharge, total - t.t_rp_ns, src.bank, src.subarray,
                           src.row, -1, false});
            seq.push_back({CommandKind::Precharge, total - t.t_rp_ns, dst.bank, dst.subarray,
                           dst.row, -1, false});
            break;
        }
    }
    std::stable_sort(seq.begin(), seq.end(),
                     [](const Command& a, const Command& b) { return a.issue_ns < b.issue_ns; });
    return seq;
}

}  // namespace sharedpim
