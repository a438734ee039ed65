#include "sharedpim/workload.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "sharedpim/errors.hpp"

namespace sharedpim {

const char* op_name(OpKind op) {
    switch (op) {
        case OpKind::Lut4Add: return "lut4add";
        case OpKind::Lut4Mul: return "lut4mul";
        case OpKind::LutShift: return "lutshift";
        case OpKind::Aggregate: return "aggregate";
    }
    return "unknown";
}

int32_t WorkloadDag::add_compute(OpKind op, uint16_t width_bits, int32_t subarray, int32_t bank) {
    DagNode n;
    n.kind = DagNode::Kind::Compute;
    n.op = op;
    n.width_bits = width_bits;
    n.subarray = subarray;
    n.bank = bank;
    nodes.push_back(n);
    return static_cast<int32_t>(nodes.size() - 1);
}

int32_t WorkloadDag::add_move(int32_t src_subarray, int32_t dst_subarray, int32_t bank,
                              int16_t broadcast_width) {
    DagNode n;
    n.kind = DagNode::Kind::Move;
    n.bank = bank;
    n.src_subarray = src_subarray;
    n.dst_subarray = dst_subarray;
    n.broadcast_width = broadcast_width;
    nodes.push_back(n);
    return static_cast<int32_t>(nodes.size() - 1);
}

void WorkloadDag::add_edge(int32_t src, int32_t dst) { edges.emplace_back(src, dst); }

std::size_t WorkloadDag::compute_count() const {
    return static_cast<std::size_t>(
        std::count_if(nodes.begin(), nodes.end(),
                      [](const DagNode& n) { return n.kind == DagNode::Kind::Compute; }));
}

std::size_t WorkloadDag::move_count() const { return nodes.size() - compute_count(); }

int32_t WorkloadDag::subarray_span() const {
    int32_t hi = -1;
    for (const DagNode& n : nodes) {
        hi = std::max(hi, n.subarray);
        hi = std::max(hi, n.src_subarray);
        hi = std::max(hi, n.dst_subarray);
    }
    return hi + 1;
}

std::vector<int32_t> WorkloadDag::topological_order() const {
    std::vector<int32_t> indegree(nodes.size(), 0);
    std::vector<std::vector<int32_t>> succ(nodes.size());
    for (const auto& [a, b] : edges) {
        succ[static_cast<std::size_t>(a)].push_back(b);
        ++indegree[static_cast<std::size_t>(b)];
    }
    std::vector<int32_t> order;
    order.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (indegree[i] == 0) order.push_back(static_cast<int32_t>(i));
    for (std::size_t head = 0; head < order.size(); ++head)
        for (int32_t next : succ[static_cast<std::size_t>(order[head])])
            if (--indegree[static_cast<std::size_t>(next)] == 0) order.push_back(next);
    if (order.size() != nodes.size()) throw ConfigError("workload graph has a cycle");
    return order;
}

namespace {

void require_width(int bits) {
    if (bits < 4 || bits % 4 != 0)
        throw UnsupportedWidthError("operand width must be a positive multiple of 4 bits");
}

/// Moves data one subarray at a time from `from` to `to`; every hop also
/// depends on the producing compute so the data origin is explicit. Returns
/// the node the consumer should depend on.
int32_t relay(WorkloadDag& dag, int32_t producer, int32_t from, int32_t to) {
    int32_t dep = producer;
    int step = to >= from ? 1 : -1;
    for (int32_t sa = from; sa != to; sa += step) {
        int32_t mv = dag.add_move(sa, sa + step);
        dag.add_edge(dep, mv);
        if (dep != producer) dag.add_edge(producer, mv);
        dep = mv;
    }
    return dep;
}

/// Serializes the compute nodes mapped to one subarray in issue order so the
/// ready queue never floods one resource.
class WorkerChains {
  public:
    void chain(WorkloadDag& dag, int32_t subarray, int32_t node) {
        auto [it, inserted] = last_.try_emplace(subarray, node);
        if (!inserted) {
            dag.add_edge(it->second, node);
            it->second = node;
        }
    }

  private:
    std::unordered_map<int32_t, int32_t> last_;
};

int next_pow2(int v) {
    int n = 1;
    while (n < v) n *= 2;
    return n;
}

/// Chain length for the partial-product reduction; grows superlinearly in the
/// digit count so the serial ripple share rises with the operand width.
int mul_chain_length(int k) {
    int total = k * k;
    int len = static_cast<int>(std::lround(0.494 * std::pow(k, 1.9057)));
    return std::clamp(len, std::min(k, total), total);
}

/// Pairwise aggregation tree over `producers` (value p living on
/// `workers[p]`), with operands relayed between workers. Returns the root.
int32_t aggregation_tree(WorkloadDag& dag, WorkerChains& chains,
                         std::vector<int32_t> producers, std::vector<int32_t> workers,
                         uint16_t width) {
    while (producers.size() > 1) {
        std::vector<int32_t> next_nodes;
        std::vector<int32_t> next_workers;
        for (std::size_t i = 0; i + 1 < producers.size(); i += 2) {
            int32_t left = producers[i], right = producers[i + 1];
            int32_t wl = workers[i], wr = workers[i + 1];
            int32_t arrived = relay(dag, right, wr, wl);
            int32_t add = dag.add_compute(OpKind::Aggregate, width, wl);
            dag.add_edge(left, add);
            dag.add_edge(arrived, add);
            chains.chain(dag, wl, add);
            next_nodes.push_back(add);
            next_workers.push_back(wl);
        }
        if (producers.size() % 2 == 1) {
            next_nodes.push_back(producers.back());
            next_workers.push_back(workers.back());
        }
        producers = std::move(next_nodes);
        workers = std::move(next_workers);
    }
    return producers.front();
}

}  // namespace

WorkloadDag build_wide_add(int bits) {
    require_width(bits);
    int k = bits / 4;
    WorkloadDag dag;
    dag.label = "wide_add" + std::to_string(bits);
    std::vector<int32_t> adds;
    adds.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) adds.push_back(dag.add_compute(OpKind::Lut4Add, 4, i));
    if (k == 1) return dag;
    int32_t carry = adds[0];
    for (int i = 1; i < k; ++i) {
        int32_t mv = dag.add_move(i - 1, i);
        dag.add_edge(carry, mv);
        int32_t agg = dag.add_compute(OpKind::Aggregate, 4, i);
        dag.add_edge(mv, agg);
        dag.add_edge(adds[static_cast<std::size_t>(i)], agg);
        carry = agg;
    }
    int32_t out = dag.add_move(k - 1, k);
    dag.add_edge(carry, out);
    return dag;
}

WorkloadDag build_wide_mul(int bits) {
    require_width(bits);
    int k = bits / 4;
    WorkloadDag dag;
    dag.label = "wide_mul" + std::to_string(bits);
    if (k == 1) {
        dag.add_compute(OpKind::Lut4Mul, 4, 0);
        return dag;
    }
    int total = k * k;
    // Partial products in anti-diagonal order: products feeding the same
    // result digits sit on neighboring subarrays.
    std::vector<int32_t> shifts;
    shifts.reserve(static_cast<std::size_t>(total));
    for (int c = 0; c <= 2 * (k - 1); ++c) {
        for (int i = std::max(0, c - k + 1); i <= std::min(c, k - 1); ++i) {
            int32_t pos = static_cast<int32_t>(shifts.size());
            int32_t mul = dag.add_compute(OpKind::Lut4Mul, 4, pos);
            int32_t shift = dag.add_compute(OpKind::LutShift, 4, pos);
            dag.add_edge(mul, shift);
            shifts.push_back(shift);
        }
    }
    int chain_len = mul_chain_length(k);
    std::vector<std::pair<int32_t, int32_t>> chain_results;  // (node, position)
    for (int c0 = 0; c0 < total; c0 += chain_len) {
        int end = std::min(c0 + chain_len, total);
        int32_t acc = shifts[static_cast<std::size_t>(c0)];
        for (int p = c0 + 1; p < end; ++p) {
            int32_t mv = dag.add_move(p - 1, p);
            dag.add_edge(acc, mv);
            int32_t agg = dag.add_compute(OpKind::Aggregate, 4, p);
            dag.add_edge(mv, agg);
            dag.add_edge(shifts[static_cast<std::size_t>(p)], agg);
            acc = agg;
        }
        chain_results.emplace_back(acc, end - 1);
    }
    auto [result, rpos] = chain_results.front();
    for (std::size_t c = 1; c < chain_results.size(); ++c) {
        auto [acc, pos] = chain_results[c];
        int32_t mv = dag.add_move(rpos, pos);
        dag.add_edge(result, mv);
        int32_t agg = dag.add_compute(OpKind::Aggregate, 4, pos);
        dag.add_edge(mv, agg);
        dag.add_edge(acc, agg);
        result = agg;
        rpos = pos;
    }
    int32_t out = dag.add_move(rpos, rpos + 1);
    dag.add_edge(result, out);
    return dag;
}

WorkloadDag build_ntt(int degree) {
    if (degree < 2) throw ConfigError("transform needs at least two points");
    int n = next_pow2(degree);
    // Odd packing spreads the stage-boundary crossings across subarrays
    // instead of aligning them all on the same pair every stage.
    const int values_per_subarray = 3;
    WorkloadDag dag;
    dag.label = "ntt" + std::to_string(degree);
    auto loc = [&](int v) { return v / values_per_subarray; };
    std::vector<int32_t> prev(static_cast<std::size_t>(n), -1);
    WorkerChains chains;
    for (int stride = 1; stride < n; stride *= 2) {
        for (int a = 0; a < n; ++a) {
            if ((a & stride) != 0) continue;
            int b = a + stride;
            int32_t la = loc(a), lb = loc(b);
            int32_t mul_a = dag.add_compute(OpKind::Lut4Mul, 32, la);
            int32_t mul_b = dag.add_compute(OpKind::Lut4Mul, 32, lb);
            if (prev[static_cast<std::size_t>(a)] >= 0)
                dag.add_edge(prev[static_cast<std::size_t>(a)], mul_a);
            if (prev[static_cast<std::size_t>(b)] >= 0)
                dag.add_edge(prev[static_cast<std::size_t>(b)], mul_b);
            chains.chain(dag, la, mul_a);
            chains.chain(dag, lb, mul_b);
            int32_t b_arrived = relay(dag, mul_b, lb, la);
            int32_t a_arrived = relay(dag, mul_a, la, lb);
            int32_t add = dag.add_compute(OpKind::Aggregate, 32, la);
            dag.add_edge(mul_a, add);
            dag.add_edge(b_arrived, add);
            chains.chain(dag, la, add);
            int32_t sub = dag.add_compute(OpKind::Aggregate, 32, lb);
            dag.add_edge(mul_b, sub);
            dag.add_edge(a_arrived, sub);
            chains.chain(dag, lb, sub);
            prev[static_cast<std::size_t>(a)] = add;
            prev[static_cast<std::size_t>(b)] = sub;
        }
    }
    return dag;
}

namespace {

/// Product placement across the worker strip: consecutive operands land a
/// fixed stride apart so aggregation operands travel a controlled distance.
struct StripPlacement {
    int workers;
    int stride;
    int32_t place(int group, int item) const {
        return (group + item * stride) % workers;
    }
};

WorkloadDag build_product_aggregation(const std::string& label, int groups,
                                      const std::vector<int>& group_sizes,
                                      const StripPlacement& strip) {
    WorkloadDag dag;
    dag.label = label;
    WorkerChains chains;
    for (int g = 0; g < groups; ++g) {
        int size = group_sizes[static_cast<std::size_t>(g)];
        std::vector<int32_t> producers;
        std::vector<int32_t> workers;
        producers.reserve(static_cast<std::size_t>(size));
        for (int p = 0; p < size; ++p) {
            int32_t w = strip.place(g, p);
            int32_t mul = dag.add_compute(OpKind::Lut4Mul, 32, w);
            chains.chain(dag, w, mul);
            producers.push_back(mul);
            workers.push_back(w);
        }
        aggregation_tree(dag, chains, std::move(producers), std::move(workers), 32);
    }
    return dag;
}

}  // namespace

WorkloadDag build_mm(int n) {
    if (n < 1) throw ConfigError("matrix size must be at least 1");
    StripPlacement strip{n <= 4 ? std::max(2 * n, 2) : 140, 1};
    std::vector<int> sizes(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), n);
    return build_product_aggregation("mm" + std::to_string(n),
                                     n * n, sizes, strip);
}

WorkloadDag build_pmm(int degree) {
    if (degree < 0) throw ConfigError("polynomial degree must be non-negative");
    int d = degree;
    std::vector<int> sizes;
    sizes.reserve(static_cast<std::size_t>(2 * d + 1));
    for (int c = 0; c <= 2 * d; ++c)
        sizes.push_back(std::min(c, d) - std::max(0, c - d) + 1);
    StripPlacement strip{d <= 4 ? std::max(d + 1, 2) : 128, d <= 4 ? 1 : 2};
    return build_product_aggregation("pmm" + std::to_string(degree),
                                     2 * d + 1, sizes, strip);
}

WorkloadDag build_graph_search(int nodes, GraphSearchKind kind) {
    if (nodes < 1) throw ConfigError("graph needs at least one node");
    WorkloadDag dag;
    dag.label = (kind == GraphSearchKind::Bfs ? "bfs" : "dfs") + std::to_string(nodes);
    if (nodes == 1) {
        dag.add_compute(OpKind::Aggregate, 4, 0);
        return dag;
    }
    int neighbors = nodes - 1;
    int workers = std::clamp(neighbors, 1, 3);
    std::vector<int32_t> last_compare(static_cast<std::size_t>(workers), -1);
    int32_t frontier_move = -1;      // previous frontier update arriving at worker 0
    int32_t frontier_producer = -1;  // compute that selected that frontier
    for (int v = 0; v < nodes; ++v) {
        // Relay the frontier across the whole worker strip before any compare
        // of this visit is issued, so the relay pipelines ahead of the compare
        // batches instead of queueing behind them. The very first frontier is
        // part of the pre-staged input set, so visit 0 starts without a relay.
        std::vector<int32_t> arrival(static_cast<std::size_t>(workers), -1);
        arrival[0] = frontier_move;
        if (v > 0) {
            int32_t hop_dep = frontier_move;
            for (int w = 1; w < workers; ++w) {
                int32_t mv = dag.add_move(w - 1, w);
                if (hop_dep >= 0) dag.add_edge(hop_dep, mv);
                dag.add_edge(frontier_producer, mv);
                hop_dep = mv;
                arrival[static_cast<std::size_t>(w)] = mv;
            }
        }
        // Each worker compares its share of the neighbor list against the
        // frontier value.
        std::vector<int32_t> finals;
        for (int w = 0; w < workers; ++w) {
            int share = neighbors / workers + (w < neighbors % workers ? 1 : 0);
            int32_t prev = arrival[static_cast<std::size_t>(w)];
            for (int c = 0; c < share; ++c) {
                int32_t cmp = dag.add_compute(OpKind::Aggregate, 4, w);
                if (prev >= 0) dag.add_edge(prev, cmp);
                if (c == 0 && last_compare[static_cast<std::size_t>(w)] >= 0)
                    dag.add_edge(last_compare[static_cast<std::size_t>(w)], cmp);
                prev = cmp;
            }
            if (share > 0) {
                last_compare[static_cast<std::size_t>(w)] = prev;
                finals.push_back(prev);
            }
        }
        // The selected next frontier returns to the strip head hop by hop.
        frontier_producer = finals.back();
        if (workers > 1) {
            int32_t back = dag.add_move(workers - 1, workers - 2);
            for (int32_t f : finals) dag.add_edge(f, back);
            for (int w = workers - 2; w > 0; --w) {
                int32_t mv = dag.add_move(w, w - 1);
                dag.add_edge(back, mv);
                dag.add_edge(frontier_producer, mv);
                back = mv;
            }
            frontier_move = back;
        }
    }
    return dag;
}

void save_dag(const WorkloadDag& dag, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw FileParseError(0, "cannot open '" + path + "' for writing");
    out << "dag " << dag.label << "\n";
    for (std::size_t i = 0; i < dag.nodes.size(); ++i) {
        const DagNode& n = dag.nodes[i];
        if (n.kind == DagNode::Kind::Compute) {
            out << "node " << i << " " << op_name(n.op);
            if (n.width_bits != 4) out << "@" << n.width_bits;
            out << " " << n.subarray << "\n";
        } else {
            out << "node " << i << " move " << n.src_subarray << " " << n.dst_subarray << "\n";
        }
    }
    for (const auto& [a, b] : dag.edges) out << "edge " << a << " " << b << "\n";
}

WorkloadDag load_dag(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileParseError(0, "cannot open '" + path + "'");
    WorkloadDag dag;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string word;
        ss >> word;
        if (word == "dag") {
            ss >> dag.label;
        } else if (word == "node") {
            long id = 0;
            std::string kind;
            ss >> id >> kind;
            if (id != static_cast<long>(dag.nodes.size()))
                throw FileParseError(lineno, "node ids must be dense and ordered");
            if (kind == "move") {
                int src = 0, dst = 0;
                if (!(ss >> src >> dst)) throw FileParseError(lineno, "move needs src and dst");
                dag.add_move(src, dst);
            } else {
                uint16_t width = 4;
                auto at = kind.find('@');
                if (at != std::string::npos) {
                    width = static_cast<uint16_t>(std::stoi(kind.substr(at + 1)));
                    kind = kind.substr(0, at);
                }
                bool found = false;
                for (OpKind op : {OpKind::Lut4Add, OpKind::Lut4Mul, OpKind::LutShift,
                                  OpKind::Aggregate}) {
                    if (kind == op_name(op)) {
                        int sa = -1;
                        ss >> sa;
                        dag.add_compute(op, width, sa);
                        found = true;
                        break;
                    }
                }
                if (!found) throw FileParseError(lineno, "unknown node kind '" + kind + "'");
            }
        } else if (word == "edge") {
            int32_t a = 0, b = 0;
            if (!(ss >> a >> b)) throw FileParseError(lineno, "edge needs two node ids");
            dag.add_edge(a, b);
        } else {
            throw FileParseError(lineno, "unknown directive '" + word + "'");
        }
    }
    dag.topological_order();  // validates ids and acyclicity
    return dag;
}

}  // namespace sharedpim
