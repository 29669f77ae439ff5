// Timing comparison between the phased OpenMP step kernels and the serial
// reference implementation, plus a parity check that both produce identical
// trajectories.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstring>

#include "cahcbf/suite.hpp"

namespace {

// FNV-1a over the raw bytes of every logged frame
struct ChecksumObserver : cahcbf::TrialObserver {
    uint64_t hash = 1469598103934665603ULL;

    void absorb(double v) {
        unsigned char bytes[sizeof(double)];
        std::memcpy(bytes, &v, sizeof(double));
        for (unsigned char b : bytes) {
            hash = (hash ^ b) * 1099511628211ULL;
        }
    }
    void on_frame(int step, int agent, const cahcbf::AgentState& s, const cahcbf::KinematicSpec&,
                  const cahcbf::Vec2& u, cahcbf::StepStatus status) override {
        absorb(step);
        absorb(agent);
        absorb(s.phi);
        absorb(s.pos.x);
        absorb(s.pos.y);
        absorb(s.nu.v);
        absorb(s.nu.omega);
        absorb(u.x);
        absorb(u.y);
        absorb(static_cast<double>(status));
    }
};

double run_timed(const cahcbf::Scenario& sc, cahcbf::SimConfig cfg, cahcbf::EngineMode mode,
                 uint64_t* hash_out, int* steps_out) {
    cfg.engine = mode;
    ChecksumObserver obs;
    const auto t0 = std::chrono::steady_clock::now();
    const cahcbf::TrialMetrics m = cahcbf::run_trial(sc, cfg, &obs);
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    *hash_out = obs.hash;
    *steps_out = m.steps_run;
    return dt;
}

}  // namespace

int main() {
    cahcbf::SimConfig cfg;
    cfg.n_agents = 30;
    cfg.seed = 7;
    cfg.max_steps = 400;
    const cahcbf::Scenario sc = cahcbf::generate_scenario(cfg.n_agents, cfg.seed);

    uint64_t h_ref = 0;
    uint64_t h_omp = 0;
    int steps_ref = 0;
    int steps_omp = 0;
    const double t_ref = run_timed(sc, cfg, cahcbf::EngineMode::Reference, &h_ref, &steps_ref);
    const double t_omp = run_timed(sc, cfg, cahcbf::EngineMode::Phased, &h_omp, &steps_omp);

    std::printf("N=%d, %d steps\n", cfg.n_agents, steps_ref);
    std::printf("reference (serial): %8.3f ms  (%.1f steps/s)\n", 1e3 * t_ref,
                steps_ref / t_ref);
    std::printf("phased (OpenMP):    %8.3f ms  (%.1f steps/s)\n", 1e3 * t_omp,
                steps_omp / t_omp);
    std::printf("speedup: %.2fx\n", t_ref / t_omp);
    if (h_ref != h_omp || steps_ref != steps_omp) {
        std::printf("PARITY FAILURE: trajectories differ (ref %016llx vs omp %016llx)\n",
                    static_cast<unsigned long long>(h_ref), static_cast<unsigned long long>(h_omp));
        return 1;
    }
    std::printf("parity: trajectories identical (checksum %016llx)\n",
                static_cast<unsigned long long>(h_ref));
    return 0;
}
