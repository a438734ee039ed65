#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "sharedpim/config.hpp"
#include "sharedpim/errors.hpp"
#include "sharedpim/scheduler.hpp"
#include "sharedpim/workload.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace sharedpim;

namespace {

std::optional<Mechanism> mechanism_from_name(const std::string& name) {
    for (Mechanism m : {Mechanism::MemcpyChannel, Mechanism::RowcloneInterSA,
                        Mechanism::LisaRisc, Mechanism::SharedPimBus})
        if (name == mechanism_name(m)) return m;
    return std::nullopt;
}

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : csv) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

Platform make_platform(const SimConfig& cfg, Mechanism mech, bool full_parallelism) {
    Platform p;
    p.fabric = cfg.fabric;
    p.timing = cfg.timing;
    p.mech = cfg.mech;
    p.power = cfg.power;
    p.compute = cfg.compute;
    p.mechanism = mech;
    p.full_parallelism = full_parallelism;
    return p;
}

WorkloadDag build_benchmark(const std::string& name, int size, int bits) {
    if (name == "wide_add") return build_wide_add(bits);
    if (name == "wide_mul") return build_wide_mul(bits);
    if (name == "ntt") return build_ntt(size);
    if (name == "mm") return build_mm(size);
    if (name == "pmm") return build_pmm(size);
    if (name == "bfs") return build_graph_search(size, GraphSearchKind::Bfs);
    if (name == "dfs") return build_graph_search(size, GraphSearchKind::Dfs);
    if (name == "copy_microbench") {
        WorkloadDag dag;
        dag.label = "copy_microbench";
        dag.add_move(0, 1);
        return dag;
    }
    throw ConfigError("unknown benchmark '" + name + "'");
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void write_comparison_csv(const ComparisonReport& report, const fs::path& path) {
    std::ofstream out(path);
    out << "mechanism,makespan_ns,transfer_energy_uj,speedup_pct,energy_saving_pct\n";
    for (const PlatformResult& row : report.rows)
        out << mechanism_name(row.mechanism) << "," << format_double(row.metrics.makespan_ns)
            << "," << format_double(row.metrics.transfer_energy_uj) << ","
            << format_double(row.speedup_pct) << "," << format_double(row.energy_saving_pct)
            << "\n";
}

void write_summary_json(const ComparisonReport& report, const std::string& benchmark, int size,
                        const fs::path& path) {
    ordered_json doc;
    doc["benchmark"] = benchmark;
    doc["size"] = size;
    doc["label"] = report.label;
    doc["platforms"] = ordered_json::array();
    for (const PlatformResult& row : report.rows) {
        ordered_json j;
        j["mechanism"] = mechanism_name(row.mechanism);
        j["makespan_ns"] = row.metrics.makespan_ns;
        j["transfer_energy_uj"] = row.metrics.transfer_energy_uj;
        j["stall_ns"] = row.metrics.stall_ns;
        j["nop_ns"] = row.metrics.nop_ns;
        j["subarray_utilization"] = row.metrics.subarray_utilization;
        j["move_count"] = row.metrics.move_count;
        j["compute_count"] = row.metrics.compute_count;
        j["speedup_pct"] = row.speedup_pct;
        j["energy_saving_pct"] = row.energy_saving_pct;
        doc["platforms"].push_back(j);
    }
    std::ofstream out(path);
    out << doc.dump(2) << "\n";
}

void write_plot_csv(const std::string& benchmark, const std::vector<Platform>& platforms,
                    const std::vector<std::pair<int, ComparisonReport>>& points,
                    const fs::path& path) {
    std::ofstream out(path);
    out << "size";
    for (const Platform& p : platforms) out << "," << mechanism_name(p.mechanism) << "_makespan_ns";
    out << "\n";
    (void)benchmark;
    for (const auto& [size, report] : points) {
        out << size;
        for (const PlatformResult& row : report.rows)
            out << "," << format_double(row.metrics.makespan_ns);
        out << "\n";
    }
}

/// One benchmark run: compare across platforms and drop all report files.
ComparisonReport run_and_report(const std::string& benchmark, int size, int bits,
                                const std::vector<Platform>& platforms, const fs::path& out_dir) {
    WorkloadDag dag = build_benchmark(benchmark, size, bits);
    ComparisonReport report = compare(dag, platforms);
    fs::create_directories(out_dir);
    write_comparison_csv(report, out_dir / "comparison.csv");
    write_summary_json(report, benchmark, benchmark.rfind("wide_", 0) == 0 ? bits : size,
                       out_dir / "summary.json");
    {
        Timeline tl = simulate(dag, platforms.back());
        std::ofstream out(out_dir / "timeline.csv");
        timeline_to_csv(tl, out);
    }
    std::vector<std::pair<int, ComparisonReport>> points;
    if (benchmark == "wide_add" || benchmark == "wide_mul") {
        for (int b : {16, 32, 64, 128}) {
            if (b == bits) {
                points.emplace_back(b, report);
            } else {
                try {
                    points.emplace_back(b, compare(build_benchmark(benchmark, size, b),
                                                   platforms));
                } catch (const CapacityError&) {
                    // widths the configured bank cannot hold are left out of the plot
                }
            }
        }
    } else {
        points.emplace_back(size, report);
    }
    write_plot_csv(benchmark, platforms, points, out_dir / ("plot_" + benchmark + ".csv"));
    return report;
}

int thread_budget() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("PIMSIM_THREADS")) {
        try {
            int n = std::stoi(env);
            if (n >= 1) return std::min<int>(n, static_cast<int>(hw));
        } catch (const std::exception&) {
        }
    }
    return static_cast<int>(hw);
}

struct ReproJob {
    std::string benchmark;
    int size;        // bits for the wide ops
    double target_speedup_pct;
};

int run_repro_suite(const SimConfig& cfg, const fs::path& out_root) {
    // Calibrate the LUT op cost once against the 32-bit add target, then
    // freeze it for every other experiment.
    Platform base = make_platform(cfg, Mechanism::LisaRisc, true);
    double plut = cfg.compute.plut_op_4bit_ns > 0.0 ? cfg.compute.plut_op_4bit_ns
                                                    : calibrate_plut_op(base, 18.0);
    SimConfig tuned = cfg;
    tuned.compute.plut_op_4bit_ns = plut;
    std::vector<Platform> platforms = {make_platform(tuned, Mechanism::LisaRisc, true),
                                       make_platform(tuned, Mechanism::SharedPimBus, true)};

    const std::vector<ReproJob> jobs = {
        {"wide_add", 32, 18.0}, {"wide_mul", 32, 31.0},  {"wide_add", 128, 40.0},
        {"wide_mul", 128, 40.0}, {"mm", 20, 40.0},       {"pmm", 30, 44.0},
        {"ntt", 64, 31.0},       {"bfs", 100, 29.0},     {"dfs", 100, 29.0},
    };
    std::vector<ComparisonReport> reports(jobs.size());
    std::vector<std::string> errors(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < jobs.size(); i = next.fetch_add(1)) {
            const ReproJob& job = jobs[i];
            std::string dir = job.benchmark + "_" + std::to_string(job.size);
            try {
                reports[i] = run_and_report(job.benchmark, job.size, job.size, platforms,
                                            out_root / dir);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    int n_threads = std::min<int>(thread_budget(), static_cast<int>(jobs.size()));
    std::vector<std::thread> pool;
    for (int i = 1; i < n_threads; ++i) pool.emplace_back(worker);
    worker();
    for (std::thread& th : pool) th.join();

    std::printf("calibrated plut_op_4bit_ns = %.6f\n\n", plut);
    std::printf("%-14s %8s %10s %10s  %s\n", "benchmark", "target", "speedup", "energy", "status");
    bool all_ok = true;
    double energy_sum = 0.0;
    int energy_n = 0;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const ReproJob& job = jobs[i];
        std::string name = job.benchmark + "(" + std::to_string(job.size) + ")";
        if (!errors[i].empty()) {
            std::printf("%-14s %8.1f %10s %10s  FAIL (%s)\n", name.c_str(),
                        job.target_speedup_pct, "-", "-", errors[i].c_str());
            all_ok = false;
            continue;
        }
        const PlatformResult& row = reports[i].rows.back();
        bool ok = std::abs(row.speedup_pct - job.target_speedup_pct) <= 5.0;
        all_ok = all_ok && ok;
        energy_sum += row.energy_saving_pct;
        ++energy_n;
        std::printf("%-14s %8.1f %10.2f %10.2f  %s\n", name.c_str(), job.target_speedup_pct,
                    row.speedup_pct, row.energy_saving_pct, ok ? "ok" : "FAIL");
    }
    if (energy_n > 0) {
        double avg = energy_sum / energy_n;
        bool ok = std::abs(avg - 18.0) <= 3.0;
        all_ok = all_ok && ok;
        std::printf("%-14s %8.1f %10s %10.2f  %s\n", "energy(avg)", 18.0, "-", avg,
                    ok ? "ok" : "FAIL");
    }
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shared-PIM in-DRAM data movement and compute simulator"};
    std::string benchmark = "copy_microbench";
    int size = -1;
    int bits = 32;
    std::string mechanisms;
    std::string config_path;
    std::string out_dir = "out";
    bool repro = false;
    bool full_parallelism = false;
    app.add_option("--benchmark", benchmark,
                   "wide_add, wide_mul, ntt, mm, pmm, bfs, dfs, copy_microbench");
    app.add_option("--size", size, "problem size (matrix n, polynomial degree, points, nodes)");
    app.add_option("--bits", bits, "operand width for wide_add / wide_mul");
    app.add_option("--mechanisms", mechanisms,
                   "comma list of memcpy, rc_inter, lisa, sharedpim (first is the baseline)");
    app.add_option("--config", config_path, "key = value config file");
    app.add_option("--out", out_dir, "output directory");
    app.add_flag("--repro", repro, "run the published-results reproduction suite");
    app.add_flag("--full-parallelism", full_parallelism,
                 "widen the bank to the workload's span instead of failing");
    CLI11_PARSE(app, argc, argv);

    try {
        SimConfig cfg = config_path.empty() ? SimConfig{} : parse_config(config_path);
        if (repro) return run_repro_suite(cfg, out_dir);

        if (size < 0) {
            if (benchmark == "ntt") size = 64;
            else if (benchmark == "mm") size = 20;
            else if (benchmark == "pmm") size = 30;
            else if (benchmark == "bfs" || benchmark == "dfs") size = 100;
            else size = bits;  // wide ops and the copy microbenchmark
        }
        if (benchmark.rfind("wide_", 0) == 0 && app.count("--size") && !app.count("--bits"))
            bits = size;

        std::string mech_csv = mechanisms;
        if (mech_csv.empty())
            mech_csv = benchmark == "copy_microbench" ? "memcpy,rc_inter,lisa,sharedpim"
                                                      : "lisa,sharedpim";
        std::vector<Platform> platforms;
        for (const std::string& name : split_list(mech_csv)) {
            auto mech = mechanism_from_name(name);
            if (!mech) throw ConfigError("unknown mechanism '" + name + "'");
            platforms.push_back(make_platform(cfg, *mech, full_parallelism));
        }
        if (platforms.size() < 2)
            throw ConfigError("need at least two mechanisms to compare");

        ComparisonReport report = run_and_report(benchmark, size, bits, platforms, out_dir);
        std::printf("%-12s %16s %18s %10s %10s\n", "mechanism", "makespan_ns", "energy_uj",
                    "speedup%", "saving%");
        for (const PlatformResult& row : report.rows)
            std::printf("%-12s %16.3f %18.4f %10.2f %10.2f\n", mechanism_name(row.mechanism),
                        row.metrics.makespan_ns, row.metrics.transfer_energy_uj, row.speedup_pct,
                        row.energy_saving_pct);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
