#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include "CLI11.hpp"

#include "cahcbf/suite.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitScenarioError = 3;

struct RunOptions {
    std::string scenario_path;
    int random_n = 0;
    uint64_t seed = 1;
    std::string method = "cahcbf";
    std::string alloc = "full";
    double w = -1.0;
    int trials = 1;
    int steps = 0;
    std::string out_dir = "out";
    std::string log_level = "metrics";
    double region = 5.5;
    double neighbor_radius = 0.0;
    int threads = 0;
    std::string engine = "phased";
    std::string save_scenario;
};

int do_run(const RunOptions& opt) {
    cahcbf::SimConfig cfg;
    cfg.seed = opt.seed;
    cfg.method = cahcbf::method_from_name(opt.method);
    cfg.alloc.strategy = cahcbf::strategy_from_name(opt.alloc);
    cfg.region_half_width = opt.region;
    cfg.threads = opt.threads;
    if (opt.engine == "reference") {
        cfg.engine = cahcbf::EngineMode::Reference;
    } else if (opt.engine != "phased") {
        throw std::invalid_argument("--engine must be phased or reference");
    }
    if (opt.steps > 0) {
        cfg.max_steps = opt.steps;
    }
    if (opt.neighbor_radius > 0.0) {
        cfg.neighbor_radius = opt.neighbor_radius;
    }

    std::optional<cahcbf::Scenario> fixed;
    if (!opt.scenario_path.empty()) {
        fixed = cahcbf::load_scenario_file(opt.scenario_path, cfg);
    } else {
        if (opt.random_n <= 0) {
            throw std::invalid_argument("one of --scenario or --random is required");
        }
        cfg.n_agents = opt.random_n;
    }
    if (opt.w >= 0.0) {
        cfg.nominal.w = opt.w;  // CLI overrides any scenario-file value
    }

    std::filesystem::create_directories(opt.out_dir);
    if (!opt.save_scenario.empty()) {
        const cahcbf::Scenario sc =
            fixed ? *fixed
                  : cahcbf::generate_scenario(cfg.n_agents, cfg.seed, cfg.region_half_width);
        cahcbf::save_scenario_file(opt.save_scenario, sc, cfg);
    }

    std::ofstream traj;
    std::ofstream pairs;
    std::unique_ptr<cahcbf::CsvTrajectoryWriter> writer;
    if (opt.log_level == "traj" || opt.log_level == "pairs") {
        traj.open(opt.out_dir + "/trajectory.csv");
        if (opt.log_level == "pairs") {
            pairs.open(opt.out_dir + "/pairs.csv");
            writer = std::make_unique<cahcbf::CsvTrajectoryWriter>(traj, &pairs);
        } else {
            writer = std::make_unique<cahcbf::CsvTrajectoryWriter>(traj, nullptr);
        }
    } else if (opt.log_level != "metrics") {
        throw std::invalid_argument("--log-level must be metrics, traj, or pairs");
    }

    const std::vector<cahcbf::TrialMetrics> trials =
        cahcbf::run_trials(cfg, opt.trials, fixed ? &*fixed : nullptr, writer.get());

    const nlohmann::ordered_json report = cahcbf::metrics_json(cfg, trials);
    std::ofstream mj(opt.out_dir + "/metrics.json");
    mj << report.dump(2) << "\n";

    double wall = 0.0;
    for (const cahcbf::TrialMetrics& t : trials) {
        wall += t.wall_time_s;
    }
    const auto& agg = report["aggregate"];
    std::cout << "method=" << opt.method << " alloc=" << opt.alloc << " N=" << cfg.n_agents
              << " trials=" << opt.trials << "\n"
              << "  arrival_rate        " << agg["arrival_rate"]["mean"] << " (std "
              << agg["arrival_rate"]["std"] << ")\n"
              << "  violation_events    " << agg["violation_events"]["mean"] << " (std "
              << agg["violation_events"]["std"] << ")\n"
              << "  mean_violation_depth " << agg["mean_violation_depth"]["mean"] << "\n"
              << "  qp_infeasible_events " << agg["qp_infeasible_events"]["mean"] << "\n"
              << "  wall time           " << wall << " s\n"
              << "metrics written to " << opt.out_dir << "/metrics.json\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CA-HCBF heterogeneous multi-robot collision-avoidance benchmark"};
    app.require_subcommand(1);

    RunOptions opt;
    CLI::App* run = app.add_subcommand("run", "run simulation trials");
    run->add_option("--scenario", opt.scenario_path, "scenario JSON file");
    run->add_option("--random", opt.random_n, "sample a random scenario with N agents");
    run->add_option("--seed", opt.seed, "base RNG seed (trial k uses seed XOR k)");
    run->add_option("--method", opt.method, "cahcbf | apf | hocbf");
    run->add_option("--alloc", opt.alloc, "equal | cap | full");
    run->add_option("--w", opt.w, "APF attraction weight in [0,1]");
    run->add_option("--trials", opt.trials, "number of independent trials");
    run->add_option("--steps", opt.steps, "maximum steps per trial");
    run->add_option("--out", opt.out_dir, "output directory");
    run->add_option("--log-level", opt.log_level, "metrics | traj | pairs");
    run->add_option("--region", opt.region, "sampling region half-width [m]");
    run->add_option("--neighbor-radius", opt.neighbor_radius,
                    "constraint-generation cutoff radius [m] (default: unlimited)");
    run->add_option("--threads", opt.threads, "OpenMP thread count (0 = default)");
    run->add_option("--engine", opt.engine, "phased | reference");
    run->add_option("--save-scenario", opt.save_scenario, "write the sampled scenario to a file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfigError;
    }

    try {
        return do_run(opt);
    } catch (const cahcbf::ScenarioError& e) {
        std::cerr << "scenario error: " << e.what() << "\n";
        return kExitScenarioError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
}
