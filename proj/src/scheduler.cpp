#include "sharedpim/scheduler.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <ostream>
#include <queue>

#include "sharedpim/common.hpp"
#include "sharedpim/errors.hpp"

namespace sharedpim {

const char* interval_tag_name(IntervalTag tag) {
    switch (tag) {
        case IntervalTag::Busy: return "busy";
        case IntervalTag::Stall: return "stall";
        case IntervalTag::Nop: return "nop";
        case IntervalTag::Idle: return "idle";
    }
    return "unknown";
}

namespace {

std::string sa_resource(int bank, int subarray) {
    return "sa:" + std::to_string(bank) + ":" + std::to_string(subarray);
}

/// Cost and internal transfer energy of one wide-operand Compute node,
/// obtained by simulating its own decomposition into 4-bit operations.
struct CompositeCost {
    double duration_ns = 0.0;
    double energy_uj = 0.0;
};

class CompositeCache {
  public:
    explicit CompositeCache(const Platform& base) : base_(&base) {}

    const CompositeCost& get(OpKind op, int width) {
        bool is_mul = op == OpKind::Lut4Mul;
        auto key = std::make_pair(is_mul, width);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        WorkloadDag sub = is_mul ? build_wide_mul(width) : build_wide_add(width);
        Platform p = *base_;
        p.full_parallelism = true;
        Timeline tl = simulate(sub, p);
        CompositeCost cost{tl.makespan_ns, tl.move_energy_uj + tl.composite_energy_uj};
        return cache_.emplace(key, cost).first->second;
    }

  private:
    const Platform* base_;
    std::map<std::pair<bool, int>, CompositeCost> cache_;
};

CopyRequest move_request(const DagNode& n, int src_sa, int dst_sa, const Geometry& g,
                         Mechanism mech) {
    CopyRequest req;
    req.mechanism = mech;
    req.staged = true;
    if (mech == Mechanism::SharedPimBus) {
        req.src = g.shared_row(n.bank, src_sa, 0, RowKind::SharedGlobal);
        for (int k = 0; k < n.broadcast_width; ++k)
            req.dsts.push_back(g.shared_row(n.bank, dst_sa + k, 0, RowKind::SharedGlobal));
    } else {
        req.src = RowAddress{n.bank, src_sa, 0, RowKind::Regular};
        for (int k = 0; k < n.broadcast_width; ++k)
            req.dsts.push_back(RowAddress{n.bank, dst_sa + k, 0, RowKind::Regular});
    }
    return req;
}

/// Per-subarray interval bookkeeping for the waiting-time pass.
struct SaInterval {
    double start_ns;
    double end_ns;
    int32_t node_id;
    bool compute;
};

}  // namespace

Timeline simulate(const WorkloadDag& dag, const Platform& p,
                  const std::vector<int32_t>& seed_order) {
    validate_timing(p.timing);
    const std::size_t n_nodes = dag.nodes.size();
    dag.topological_order();  // rejects cycles and bad edge ids up front

    // Assign subarrays: keep explicit placements, round-robin the rest.
    FabricConfig fc = p.fabric;
    std::vector<int32_t> placed(n_nodes, -1);
    {
        int32_t span = dag.subarray_span();
        for (std::size_t i = 0; i < n_nodes; ++i) {
            const DagNode& n = dag.nodes[i];
            if (n.kind == DagNode::Kind::Compute)
                placed[i] = n.subarray >= 0
                                ? n.subarray
                                : static_cast<int32_t>(i) %
                                      std::max<int32_t>(span, fc.subarrays_per_bank);
            else
                span = std::max(span, n.dst_subarray + n.broadcast_width);
            span = std::max(span, placed[i] + 1);
        }
        if (span > fc.subarrays_per_bank) {
            if (!p.full_parallelism)
                throw CapacityError("workload spans " + std::to_string(span) +
                                    " subarrays but the bank provides " +
                                    std::to_string(fc.subarrays_per_bank) +
                                    " (enable full parallelism to widen)");
            fc.subarrays_per_bank = span;
        }
    }
    Geometry geom = validate_config(fc);

    const double plut_ns = p.compute.resolved_plut_ns(p.timing);
    const double row_op_ns = p.compute.resolved_row_op_ns(p.timing);
    CompositeCache composites(p);

    // Dependency bookkeeping.
    std::vector<std::vector<int32_t>> succ(n_nodes), pred(n_nodes);
    std::vector<int32_t> pending(n_nodes, 0);
    for (const auto& [a, b] : dag.edges) {
        succ[static_cast<std::size_t>(a)].push_back(b);
        pred[static_cast<std::size_t>(b)].push_back(a);
        ++pending[static_cast<std::size_t>(b)];
    }

    // Ready queue ordered by (ready time, tie-break rank).
    std::vector<int32_t> rank(n_nodes), by_rank(n_nodes);
    if (seed_order.empty()) {
        for (std::size_t i = 0; i < n_nodes; ++i)
            rank[i] = by_rank[i] = static_cast<int32_t>(i);
    } else {
        if (seed_order.size() != n_nodes)
            throw ConfigError("seed order must list every node exactly once");
        std::vector<bool> seen(n_nodes, false);
        for (std::size_t r = 0; r < n_nodes; ++r) {
            int32_t id = seed_order[r];
            if (id < 0 || static_cast<std::size_t>(id) >= n_nodes ||
                seen[static_cast<std::size_t>(id)])
                throw ConfigError("seed order must be a permutation of node ids");
            seen[static_cast<std::size_t>(id)] = true;
            rank[static_cast<std::size_t>(id)] = static_cast<int32_t>(r);
            by_rank[r] = id;
        }
    }
    using QueueEntry = std::pair<double, int32_t>;  // (attempt time, rank)
    std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> queue;
    std::vector<double> ready(n_nodes, 0.0);
    for (std::size_t i = 0; i < n_nodes; ++i)
        if (pending[i] == 0) queue.emplace(0.0, rank[i]);

    FabricState fabric(geom);
    fabric.set_grant_tracking(false);

    Timeline tl;
    tl.node_spans.assign(n_nodes, NodeSpan{});
    tl.move_count = dag.move_count();
    tl.compute_count = dag.compute_count();
    // For every node: when its inputs were last computed (data_ready) and when
    // the value it carries was produced at its origin (logical; a Move only
    // forwards, so it inherits its inputs' production time).
    std::vector<double> data_ready(n_nodes, 0.0);
    std::vector<double> logical(n_nodes, 0.0);
    std::vector<bool> done(n_nodes, false);
    std::size_t finished = 0;
    std::map<std::pair<int, int>, std::vector<SaInterval>> sa_intervals;

    auto record = [&](std::string resource, double s, double e, IntervalTag tag, int32_t id) {
        tl.intervals.push_back({std::move(resource), s, e, tag, id});
    };
    auto record_sa = [&](int bank, int sa, double s, double e, IntervalTag tag, int32_t id,
                         bool compute) {
        record(sa_resource(bank, sa), s, e, tag, id);
        sa_intervals[{bank, sa}].push_back({s, e, id, compute});
    };

    while (!queue.empty()) {
        auto [t, r] = queue.top();
        queue.pop();
        const auto id = static_cast<std::size_t>(by_rank[static_cast<std::size_t>(r)]);
        const DagNode& node = dag.nodes[id];

        ResourceClaim claim;
        double move_energy = 0.0;
        if (node.kind == DagNode::Kind::Compute) {
            claim.duration_ns = node.width_bits == 4
                                    ? (node.op == OpKind::Lut4Add || node.op == OpKind::Lut4Mul
                                           ? plut_ns
                                           : row_op_ns)
                                    : composites.get(node.op, node.width_bits).duration_ns;
            claim.stalled_subarrays.emplace_back(node.bank, placed[id]);
        } else {
            CopyRequest req =
                move_request(node, node.src_subarray, node.dst_subarray, geom, p.mechanism);
            claim = occupancy(req, geom, p.timing, p.mech);
            move_energy = copy_energy(p.mechanism, claim.duration_ns, p.power);
        }

        auto outcome = fabric.reserve(claim, t, node.kind == DagNode::Kind::Compute
                                                   ? SlotAccess::Local
                                                   : SlotAccess::Global);
        if (const auto* conflict = std::get_if<Conflict>(&outcome)) {
            queue.emplace(conflict->retry_at_ns, r);
            continue;
        }

        const double start = t;
        const double end = t + claim.duration_ns;
        tl.node_spans[id] = {start, end};
        tl.makespan_ns = std::max(tl.makespan_ns, end);

        double produced = 0.0;  // latest moment any input of this node was computed
        for (int32_t pr : pred[id]) {
            const auto pi = static_cast<std::size_t>(pr);
            produced = std::max(produced, dag.nodes[pi].kind == DagNode::Kind::Compute
                                              ? tl.node_spans[pi].end_ns
                                              : logical[pi]);
        }
        data_ready[id] = produced;
        logical[id] = node.kind == DagNode::Kind::Compute ? end : produced;

        if (node.kind == DagNode::Kind::Compute) {
            record_sa(node.bank, placed[id], start, end, IntervalTag::Busy,
                      static_cast<int32_t>(id), true);
            if (node.width_bits != 4)
                tl.composite_energy_uj += composites.get(node.op, node.width_bits).energy_uj;
        } else {
            tl.move_energy_uj += move_energy;
            switch (p.mechanism) {
                case Mechanism::SharedPimBus:
                    record("bus:" + std::to_string(node.bank), start, end, IntervalTag::Busy,
                           static_cast<int32_t>(id));
                    for (const auto& [b, sa, slot] : claim.busy_shared_rows)
                        record("slot:" + std::to_string(b) + ":" + std::to_string(sa) + ":" +
                                   std::to_string(slot),
                               start, end, IntervalTag::Busy, static_cast<int32_t>(id));
                    break;
                case Mechanism::MemcpyChannel:
                case Mechanism::RowcloneInterSA:
                    record("channel", start, end, IntervalTag::Busy, static_cast<int32_t>(id));
                    [[fallthrough]];
                default:
                    for (const auto& [b, sa] : claim.stalled_subarrays)
                        record_sa(b, sa, start, end, IntervalTag::Stall,
                                  static_cast<int32_t>(id), false);
                    break;
            }
        }

        done[id] = true;
        ++finished;
        for (int32_t nx : succ[id]) {
            const auto ni = static_cast<std::size_t>(nx);
            ready[ni] = std::max(ready[ni], end);
            if (--pending[ni] == 0) queue.emplace(ready[ni], rank[ni]);
        }
    }
    if (finished != n_nodes)
        throw Error("scheduler deadlock: " + std::to_string(n_nodes - finished) +
                    " nodes never became ready");

    // Waiting-time pass: a gap on a subarray between its previous occupancy
    // and a Compute start, while the inputs were already computed elsewhere,
    // is a NOP (the subarray is free; the data is still in flight).
    int used = 0;
    for (auto& [key, ivs] : sa_intervals) {
        bool hosts_compute = false;
        std::sort(ivs.begin(), ivs.end(),
                  [](const SaInterval& a, const SaInterval& b) { return a.start_ns < b.start_ns; });
        double prev_end = 0.0;
        for (const SaInterval& iv : ivs) {
            if (iv.compute) {
                hosts_compute = true;
                double lo = std::max(prev_end, data_ready[static_cast<std::size_t>(iv.node_id)]);
                if (time_lt(lo, iv.start_ns))
                    record(sa_resource(key.first, key.second), lo, iv.start_ns, IntervalTag::Nop,
                           iv.node_id);
            }
            prev_end = std::max(prev_end, iv.end_ns);
        }
        if (hosts_compute) ++used;
    }
    tl.subarrays_used = used;
    return tl;
}

Metrics metrics(const Timeline& tl, const Platform&) {
    Metrics m;
    m.makespan_ns = tl.makespan_ns;
    m.transfer_energy_uj = tl.move_energy_uj + tl.composite_energy_uj;
    m.move_count = tl.move_count;
    m.compute_count = tl.compute_count;
    double busy = 0.0;
    for (const TimelineInterval& iv : tl.intervals) {
        double len = iv.end_ns - iv.start_ns;
        switch (iv.tag) {
            case IntervalTag::Stall: m.stall_ns += len; break;
            case IntervalTag::Nop: m.nop_ns += len; break;
            case IntervalTag::Busy:
                if (iv.resource.rfind("sa:", 0) == 0) busy += len;
                break;
            case IntervalTag::Idle: break;
        }
    }
    if (tl.subarrays_used > 0 && tl.makespan_ns > 0.0)
        m.subarray_utilization = busy / (tl.subarrays_used * tl.makespan_ns);
    return m;
}

ComparisonReport compare(const WorkloadDag& dag, const std::vector<Platform>& platforms) {
    if (platforms.size() < 2)
        throw ConfigError("comparison needs at least two platforms");
    for (const Platform& p : platforms)
        if (!(p.fabric == platforms.front().fabric))
            throw IncomparablePlatformsError(
                "platforms must share one fabric shape to be compared");
    ComparisonReport report;
    report.label = dag.label;
    for (const Platform& p : platforms) {
        Timeline tl = simulate(dag, p);
        PlatformResult row;
        row.mechanism = p.mechanism;
        row.metrics = metrics(tl, p);
        report.rows.push_back(row);
    }
    const Metrics& base = report.rows.front().metrics;
    for (PlatformResult& row : report.rows) {
        if (base.makespan_ns > 0.0)
            row.speedup_pct = (1.0 - row.metrics.makespan_ns / base.makespan_ns) * 100.0;
        if (base.transfer_energy_uj > 0.0)
            row.energy_saving_pct =
                (1.0 - row.metrics.transfer_energy_uj / base.transfer_energy_uj) * 100.0;
    }
    return report;
}

double calibrate_plut_op(const Platform& base, double target_speedup_pct) {
    WorkloadDag dag = build_wide_add(32);
    auto speedup_at = [&](double plut) {
        Platform lisa = base;
        lisa.mechanism = Mechanism::LisaRisc;
        lisa.full_parallelism = true;
        lisa.compute.plut_op_4bit_ns = plut;
        Platform bus = lisa;
        bus.mechanism = Mechanism::SharedPimBus;
        double t_lisa = simulate(dag, lisa).makespan_ns;
        double t_bus = simulate(dag, bus).makespan_ns;
        return (1.0 - t_bus / t_lisa) * 100.0;
    };
    double lo = 1.0, hi = 1e6;
    if (speedup_at(lo) < target_speedup_pct || speedup_at(hi) > target_speedup_pct)
        throw CalibrationError("target speedup is outside the reachable range");
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (speedup_at(mid) > target_speedup_pct)
            lo = mid;  // op still cheap enough that transfers dominate
        else
            hi = mid;
        if (hi - lo < 1e-9) break;
    }
    return 0.5 * (lo + hi);
}

void timeline_to_csv(const Timeline& tl, std::ostream& out) {
    std::vector<std::size_t> order(tl.intervals.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const TimelineInterval& x = tl.intervals[a];
        const TimelineInterval& y = tl.intervals[b];
        if (x.resource != y.resource) return x.resource < y.resource;
        if (x.start_ns != y.start_ns) return x.start_ns < y.start_ns;
        return x.node_id < y.node_id;
    });
    out << "resource,start_ns,end_ns,tag,node_id\n";
    char line[160];
    for (std::size_t i : order) {
        const TimelineInterval& iv = tl.intervals[i];
        std::snprintf(line, sizeof line, ",%.10g,%.10g,%s,%d\n", iv.start_ns, iv.end_ns,
                      interval_tag_name(iv.tag), iv.node_id);
        out << iv.resource << line;
    }
}

std::vector<AuditInterval> audit_view(const Timeline& tl) {
    std::vector<AuditInterval> out;
    out.reserve(tl.intervals.size());
    for (const TimelineInterval& iv : tl.intervals)
        out.push_back({iv.resource, iv.start_ns, iv.end_ns});
    return out;
}

}  // namespace sharedpim
