#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sharedpim/config.hpp"
#include "sharedpim/controller.hpp"
#include "sharedpim/energy_area.hpp"
#include "sharedpim/scheduler.hpp"
#include "sharedpim/workload.hpp"

namespace py = pybind11;
using namespace sharedpim;

namespace {

py::dict metrics_dict(const Metrics& m) {
    py::dict d;
    d["makespan_ns"] = m.makespan_ns;
    d["transfer_energy_uj"] = m.transfer_energy_uj;
    d["stall_ns"] = m.stall_ns;
    d["nop_ns"] = m.nop_ns;
    d["subarray_utilization"] = m.subarray_utilization;
    d["move_count"] = m.move_count;
    d["compute_count"] = m.compute_count;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "Shared-PIM in-DRAM data movement and compute simulator";

    py::enum_<Mechanism>(mod, "Mechanism")
        .value("MemcpyChannel", Mechanism::MemcpyChannel)
        .value("RowcloneIntraSA", Mechanism::RowcloneIntraSA)
        .value("RowcloneInterSA", Mechanism::RowcloneInterSA)
        .value("LisaRisc", Mechanism::LisaRisc)
        .value("SharedPimBus", Mechanism::SharedPimBus);

    py::class_<FabricConfig>(mod, "FabricConfig")
        .def(py::init<>())
        .def_readwrite("channels", &FabricConfig::channels)
        .def_readwrite("ranks", &FabricConfig::ranks)
        .def_readwrite("chips_per_rank", &FabricConfig::chips_per_rank)
        .def_readwrite("banks_per_chip", &FabricConfig::banks_per_chip)
        .def_readwrite("subarrays_per_bank", &FabricConfig::subarrays_per_bank)
        .def_readwrite("rows_per_subarray", &FabricConfig::rows_per_subarray)
        .def_readwrite("row_size_bytes", &FabricConfig::row_size_bytes)
        .def_readwrite("shared_rows_per_subarray", &FabricConfig::shared_rows_per_subarray)
        .def_readwrite("bus_segments_per_bank", &FabricConfig::bus_segments_per_bank);

    py::class_<TimingParams>(mod, "TimingParams")
        .def(py::init<>())
        .def_readwrite("t_ck_ns", &TimingParams::t_ck_ns)
        .def_readwrite("t_rcd_ns", &TimingParams::t_rcd_ns)
        .def_readwrite("t_rp_ns", &TimingParams::t_rp_ns)
        .def_readwrite("t_ras_ns", &TimingParams::t_ras_ns)
        .def_readwrite("t_rc_ns", &TimingParams::t_rc_ns)
        .def_readwrite("aap_offset_ns", &TimingParams::aap_offset_ns);
    mod.def("ddr3_1600_11", &timing_presets::ddr3_1600_11);
    mod.def("ddr4_2400t_17", &timing_presets::ddr4_2400t_17);
    mod.def("aap_latency", &aap_latency, py::arg("timing"));

    py::class_<MechanismParams>(mod, "MechanismParams")
        .def(py::init<>())
        .def_readwrite("memcpy_ns", &MechanismParams::memcpy_ns)
        .def_readwrite("rc_inter_ns", &MechanismParams::rc_inter_ns)
        .def_readwrite("lisa_base_ns", &MechanismParams::lisa_base_ns)
        .def_readwrite("lisa_extra_hop_ns", &MechanismParams::lisa_extra_hop_ns);

    py::class_<PowerModel>(mod, "PowerModel")
        .def(py::init<>())
        .def_readwrite("p_local_copy_w", &PowerModel::p_local_copy_w)
        .def_readwrite("p_bus_copy_w", &PowerModel::p_bus_copy_w)
        .def_readwrite("p_memcpy_w", &PowerModel::p_memcpy_w)
        .def_readwrite("p_rc_inter_w", &PowerModel::p_rc_inter_w)
        .def("bus_to_local_ratio", &PowerModel::bus_to_local_ratio);
    py::class_<CopyTargets>(mod, "CopyTargets").def(py::init<>());
    mod.def("calibrate_power", &calibrate_power, py::arg("targets") = CopyTargets{});

    py::class_<ComputeParams>(mod, "ComputeParams")
        .def(py::init<>())
        .def_readwrite("plut_op_4bit_ns", &ComputeParams::plut_op_4bit_ns)
        .def_readwrite("row_op_ns", &ComputeParams::row_op_ns);

    py::class_<Platform>(mod, "Platform")
        .def(py::init<>())
        .def_readwrite("fabric", &Platform::fabric)
        .def_readwrite("timing", &Platform::timing)
        .def_readwrite("mech", &Platform::mech)
        .def_readwrite("power", &Platform::power)
        .def_readwrite("compute", &Platform::compute)
        .def_readwrite("mechanism", &Platform::mechanism)
        .def_readwrite("full_parallelism", &Platform::full_parallelism);

    py::class_<WorkloadDag>(mod, "WorkloadDag")
        .def_readonly("label", &WorkloadDag::label)
        .def("compute_count", &WorkloadDag::compute_count)
        .def("move_count", &WorkloadDag::move_count)
        .def("subarray_span", &WorkloadDag::subarray_span)
        .def("__len__", [](const WorkloadDag& d) { return d.nodes.size(); });

    mod.def("build_wide_add", &build_wide_add, py::arg("bits"));
    mod.def("build_wide_mul", &build_wide_mul, py::arg("bits"));
    mod.def("build_ntt", &build_ntt, py::arg("degree"));
    mod.def("build_mm", &build_mm, py::arg("n"));
    mod.def("build_pmm", &build_pmm, py::arg("degree"));
    mod.def("build_bfs",
            [](int nodes) { return build_graph_search(nodes, GraphSearchKind::Bfs); },
            py::arg("nodes"));
    mod.def("build_dfs",
            [](int nodes) { return build_graph_search(nodes, GraphSearchKind::Dfs); },
            py::arg("nodes"));
    mod.def("save_dag", &save_dag, py::arg("dag"), py::arg("path"));
    mod.def("load_dag", &load_dag, py::arg("path"));

    mod.def(
        "run_metrics",
        [](const WorkloadDag& dag, const Platform& p) {
            Timeline tl = simulate(dag, p);
            return metrics_dict(metrics(tl, p));
        },
        py::arg("dag"), py::arg("platform"),
        "Simulate the workload on one platform and return its metrics");
    mod.def(
        "compare",
        [](const WorkloadDag& dag, const std::vector<Platform>& platforms) {
            ComparisonReport report = compare(dag, platforms);
            py::list rows;
            for (const PlatformResult& row : report.rows) {
                py::dict d = metrics_dict(row.metrics);
                d["mechanism"] = mechanism_name(row.mechanism);
                d["speedup_pct"] = row.speedup_pct;
                d["energy_saving_pct"] = row.energy_saving_pct;
                rows.append(d);
            }
            return rows;
        },
        py::arg("dag"), py::arg("platforms"),
        "Run on every platform; speedup and saving are relative to the first");
    mod.def("calibrate_plut_op", &calibrate_plut_op, py::arg("base"),
            py::arg("target_speedup_pct") = 18.0);

    mod.def(
        "tracking_storage",
        [](const FabricConfig& fc) {
            TrackingStorage ts = tracking_storage(validate_config(fc));
            return py::make_tuple(ts.bits, ts.bytes);
        },
        py::arg("fabric") = FabricConfig{},
        "Controller tracking footprint as (bits, bytes)");

    mod.def(
        "area_overhead_percent",
        [](const std::string& csv_path) {
            AreaTable tbl = AreaTable::load_csv(csv_path);
            return area_report(tbl).overhead_percent;
        },
        py::arg("csv_path"));

    py::register_exception<Error>(mod, "SimError");
}
