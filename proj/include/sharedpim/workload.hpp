#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace sharedpim {

/// In-subarray compute primitives. Lut4Add/Lut4Mul are LUT queries; LutShift
/// and Aggregate are row-buffer level operations.
enum class OpKind : uint8_t { Lut4Add, Lut4Mul, LutShift, Aggregate };

const char* op_name(OpKind op);

/// One scheduled unit: a compute step pinned to a subarray, or a row move
/// between two subarrays of one bank.
struct DagNode {
    enum class Kind : uint8_t { Compute, Move };
    Kind kind = Kind::Compute;
    OpKind op = OpKind::Lut4Add; ///< compute nodes only
    uint16_t width_bits = 4;     ///< widths above 4 price as wide-op composites
    int32_t bank = 0;
    int32_t subarray = -1;       ///< compute placement; -1 lets the scheduler pick
    int32_t src_subarray = -1;   ///< move endpoints, bank-local
    int32_t dst_subarray = -1;
    int16_t size_rows = 1;
    int16_t broadcast_width = 1; ///< 1..4 destination rows per bus transaction
};

/// Acyclic dependency graph of compute and move nodes. Node ids are the
/// indices into `nodes`.
struct WorkloadDag {
    std::string label;
    std::vector<DagNode> nodes;
    std::vector<std::pair<int32_t, int32_t>> edges;

    int32_t add_compute(OpKind op, uint16_t width_bits, int32_t subarray, int32_t bank = 0);
    int32_t add_move(int32_t src_subarray, int32_t dst_subarray, int32_t bank = 0,
                     int16_t broadcast_width = 1);
    void add_edge(int32_t src, int32_t dst);

    std::size_t compute_count() const;
    std::size_t move_count() const;
    /// Highest subarray index any node touches, plus one.
    int32_t subarray_span() const;
    /// Topological order; throws ConfigError when the graph has a cycle.
    std::vector<int32_t> topological_order() const;
};

/// Parallel 4-bit adds followed by a nearest-neighbor carry ripple and a
/// result forwarding move.
WorkloadDag build_wide_add(int bits);

/// Schoolbook 4-bit partial-product grid in anti-diagonal order, reduced by
/// a small number of parallel ripple chains, then combined.
WorkloadDag build_wide_mul(int bits);

/// Butterfly network on the next power of two of `degree` points; values are
/// 32-bit composites and stage partners exchange rows over relay moves.
WorkloadDag build_ntt(int degree);

/// Dense n x n matrix product: n^3 32-bit multiplies, pairwise aggregation
/// trees per output element, operands relayed across the worker strip.
WorkloadDag build_mm(int n);

/// Naive polynomial product of two degree-d inputs: (d+1)^2 coefficient
/// multiplies aggregated per convolution bucket.
WorkloadDag build_pmm(int degree);

enum class GraphSearchKind { Bfs, Dfs };

/// Worst-case traversal of a complete graph: every node visited in sequence,
/// every neighbor compared; the frontier value relays across the workers.
/// Both orders emit structurally identical graphs.
WorkloadDag build_graph_search(int nodes, GraphSearchKind kind);

/// Writes the DAG in the line-oriented `node`/`edge` text format.
void save_dag(const WorkloadDag& dag, const std::string& path);
/// Reads a DAG written by save_dag. Throws FileParseError on malformed input.
WorkloadDag load_dag(const std::string& path);

}  // namespace sharedpim
