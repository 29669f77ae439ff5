#include "cahcbf/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace cahcbf {

using nlohmann::json;
using nlohmann::ordered_json;

KinematicSpec spec_from_json(const json& j) {
    KinematicSpec s = KinematicSpec::defaults(class_from_name(j.at("class").get<std::string>()));
    auto get = [&](const char* key, double& field) {
        if (j.contains(key)) {
            field = j.at(key).get<double>();
        }
    };
    get("x_r", s.x_r);
    get("v_max", s.v_max);
    get("omega_max", s.omega_max);
    get("a_max", s.a_max);
    get("omega_dot_max", s.omega_dot_max);
    get("wheelbase", s.wheelbase);
    get("psi_max", s.psi_max);
    get("r_phys", s.r_phys);
    get("steer_floor", s.steer_floor);
    s.validate();
    return s;
}

ordered_json spec_to_json(const KinematicSpec& s) {
    ordered_json j;
    j["class"] = class_name(s.cls);
    j["x_r"] = s.x_r;
    j["v_max"] = s.v_max;
    j["omega_max"] = s.omega_max;
    j["a_max"] = s.a_max;
    j["omega_dot_max"] = s.omega_dot_max;
    j["wheelbase"] = s.wheelbase;
    j["psi_max"] = s.psi_max;
    j["r_phys"] = s.r_phys;
    j["steer_floor"] = s.steer_floor;
    return j;
}

Scenario scenario_from_json(const json& j) {
    Scenario sc;
    for (const json& a : j.at("agents")) {
        AgentInit agent;
        agent.spec = spec_from_json(a.at("spec"));
        const json& start = a.at("start");
        if (!start.is_array() || start.size() != 3) {
            throw std::invalid_argument("scenario: start must be [phi, x, y]");
        }
        agent.phi = start[0].get<double>();
        agent.pos = {start[1].get<double>(), start[2].get<double>()};
        const json& goal = a.at("goal");
        if (!goal.is_array() || goal.size() != 2) {
            throw std::invalid_argument("scenario: goal must be [x, y]");
        }
        agent.goal = {goal[0].get<double>(), goal[1].get<double>()};
        sc.agents.push_back(agent);
    }
    if (sc.agents.empty()) {
        throw std::invalid_argument("scenario: no agents");
    }
    return sc;
}

ordered_json scenario_to_json(const Scenario& sc) {
    ordered_json agents = ordered_json::array();
    for (const AgentInit& a : sc.agents) {
        ordered_json ja;
        ja["spec"] = spec_to_json(a.spec);
        ja["start"] = {a.phi, a.pos.x, a.pos.y};
        ja["goal"] = {a.goal.x, a.goal.y};
        agents.push_back(ja);
    }
    ordered_json j;
    j["agents"] = agents;
    return j;
}

void apply_config_json(const json& j, SimConfig& cfg) {
    if (j.contains("nominal")) {
        const json& n = j.at("nominal");
        auto get = [&](const char* key, double& field) {
            if (n.contains(key)) {
                field = n.at(key).get<double>();
            }
        };
        get("w", cfg.nominal.w);
        get("k_att", cfg.nominal.k_att);
        get("k_rep", cfg.nominal.k_rep);
        get("d_cut", cfg.nominal.d_cut);
        get("k_p", cfg.nominal.k_p);
        get("k_v", cfg.nominal.k_v);
        get("k_phi", cfg.nominal.k_phi);
    }
    if (!j.contains("sim")) {
        return;
    }
    const json& s = j.at("sim");
    if (s.contains("dt")) cfg.dt = s.at("dt").get<double>();
    if (s.contains("max_steps")) cfg.max_steps = s.at("max_steps").get<int>();
    if (s.contains("goal_tol")) cfg.goal_tol = s.at("goal_tol").get<double>();
    if (s.contains("method")) cfg.method = method_from_name(s.at("method").get<std::string>());
    if (s.contains("seed")) cfg.seed = s.at("seed").get<uint64_t>();
    if (s.contains("N")) cfg.n_agents = s.at("N").get<int>();
    if (s.contains("w")) cfg.nominal.w = s.at("w").get<double>();
    if (s.contains("region_half_width")) {
        cfg.region_half_width = s.at("region_half_width").get<double>();
    }
    if (s.contains("neighbor_radius")) {
        cfg.neighbor_radius = s.at("neighbor_radius").get<double>();
    }
    if (s.contains("gains")) {
        const json& g = s.at("gains");
        if (g.contains("lambda1")) cfg.gains.lambda1 = g.at("lambda1").get<double>();
        if (g.contains("lambda2")) cfg.gains.lambda2 = g.at("lambda2").get<double>();
    }
    if (s.contains("alloc")) {
        const json& a = s.at("alloc");
        if (a.contains("epsilon")) cfg.alloc.epsilon = a.at("epsilon").get<double>();
        if (a.contains("strategy")) {
            cfg.alloc.strategy = strategy_from_name(a.at("strategy").get<std::string>());
        }
    }
    if (cfg.dt <= 0.0 || cfg.max_steps <= 0 || cfg.goal_tol <= 0.0 || cfg.n_agents <= 0) {
        throw std::invalid_argument("sim config: nonpositive dt/max_steps/goal_tol/N");
    }
}

Scenario load_scenario_file(const std::string& path, SimConfig& cfg) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open scenario file: " + path);
    }
    json j = json::parse(in);
    apply_config_json(j, cfg);
    Scenario sc = scenario_from_json(j);
    cfg.n_agents = static_cast<int>(sc.agents.size());
    return sc;
}

void save_scenario_file(const std::string& path, const Scenario& sc, const SimConfig& cfg) {
    ordered_json j = scenario_to_json(sc);
    ordered_json sim;
    sim["dt"] = cfg.dt;
    sim["max_steps"] = cfg.max_steps;
    sim["goal_tol"] = cfg.goal_tol;
    sim["method"] = method_name(cfg.method);
    sim["seed"] = cfg.seed;
    sim["N"] = cfg.n_agents;
    sim["gains"] = {{"lambda1", cfg.gains.lambda1}, {"lambda2", cfg.gains.lambda2}};
    sim["alloc"] = {{"epsilon", cfg.alloc.epsilon},
                    {"strategy", strategy_name(cfg.alloc.strategy)}};
    j["sim"] = sim;
    j["nominal"] = {{"w", cfg.nominal.w},       {"k_att", cfg.nominal.k_att},
                    {"k_rep", cfg.nominal.k_rep}, {"d_cut", cfg.nominal.d_cut},
                    {"k_p", cfg.nominal.k_p},   {"k_v", cfg.nominal.k_v},
                    {"k_phi", cfg.nominal.k_phi}};
    std::ofstream out(path);
    if (!out) {
        throw std::invalid_argument("cannot write scenario file: " + path);
    }
    out << j.dump(2) << "\n";
}

namespace {

struct Stats {
    double mean = 0.0;
    double stddev = 0.0;
};

template <typename Get>
Stats stats_over(const std::vector<TrialMetrics>& trials, Get get) {
    Stats st;
    if (trials.empty()) {
        return st;
    }
    double sum = 0.0;
    for (const TrialMetrics& t : trials) {
        sum += get(t);
    }
    st.mean = sum / trials.size();
    if (trials.size() > 1) {
        double sq = 0.0;
        for (const TrialMetrics& t : trials) {
            const double d = get(t) - st.mean;
            sq += d * d;
        }
        st.stddev = std::sqrt(sq / (trials.size() - 1));
    }
    return st;
}

}  // namespace

ordered_json metrics_json(const SimConfig& cfg, const std::vector<TrialMetrics>& trials) {
    ordered_json j;
    j["schema"] = 1;
    ordered_json config;
    config["method"] = method_name(cfg.method);
    config["alloc"] = strategy_name(cfg.alloc.strategy);
    config["N"] = cfg.n_agents;
    config["seed"] = cfg.seed;
    config["trials"] = trials.size();
    config["dt"] = cfg.dt;
    config["max_steps"] = cfg.max_steps;
    config["goal_tol"] = cfg.goal_tol;
    config["w"] = cfg.nominal.w;
    config["lambda1"] = cfg.gains.lambda1;
    config["lambda2"] = cfg.gains.lambda2;
    j["config"] = config;

    ordered_json rows = ordered_json::array();
    for (const TrialMetrics& t : trials) {
        ordered_json r;
        r["arrival_rate"] = t.arrival_rate;
        r["violation_events"] = t.violation_events;
        r["mean_violation_depth"] = t.mean_violation_depth;
        r["qp_infeasible_events"] = t.qp_infeasible_events;
        r["steps_run"] = t.steps_run;
        rows.push_back(r);
    }
    j["trials"] = rows;

    ordered_json agg;
    auto put = [&](const char* name, auto get) {
        const Stats st = stats_over(trials, get);
        agg[name] = {{"mean", st.mean}, {"std", st.stddev}};
    };
    put("arrival_rate", [](const TrialMetrics& t) { return t.arrival_rate; });
    put("violation_events",
        [](const TrialMetrics& t) { return static_cast<double>(t.violation_events); });
    put("mean_violation_depth", [](const TrialMetrics& t) { return t.mean_violation_depth; });
    put("qp_infeasible_events",
        [](const TrialMetrics& t) { return static_cast<double>(t.qp_infeasible_events); });
    put("steps_run", [](const TrialMetrics& t) { return static_cast<double>(t.steps_run); });
    j["aggregate"] = agg;
    return j;
}

CsvTrajectoryWriter::CsvTrajectoryWriter(std::ostream& traj, std::ostream* pairs)
    : traj_(traj), pairs_(pairs) {
    traj_ << "trial,step,agent,class,phi,x,y,v,omega,u1,u2,qp_status\n";
    if (pairs_ != nullptr) {
        *pairs_ << "trial,step,i,j,dist,h,h_dot,psi,upsilon,alpha\n";
    }
}

void CsvTrajectoryWriter::on_frame(int step, int agent, const AgentState& s,
                                   const KinematicSpec& spec, const Vec2& u, StepStatus status) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%d,%d,%d,%s,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%s\n", trial_,
                  step, agent, class_name(spec.cls), s.phi, s.pos.x, s.pos.y, s.nu.v, s.nu.omega,
                  u.x, u.y, status_name(status));
    traj_ << buf;
}

void CsvTrajectoryWriter::on_pair(int step, int i, int j, const PairDiag& d) {
    if (pairs_ == nullptr) {
        return;
    }
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%d,%d,%d,%d,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n", trial_, step, i,
                  j, d.dist, d.h, d.h_dot, d.psi, d.upsilon, d.alpha);
    *pairs_ << buf;
}

}  // namespace cahcbf
