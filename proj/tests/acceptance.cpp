// Acceptance suite: one pass/fail line per criterion, nonzero exit when
// any criterion fails. An optional argv[1] names the CLI binary, which is
// then included in the determinism check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hcd.h"
#include "hcd/detector.hpp"
#include "hcd/eval.hpp"
#include "hcd/io.hpp"
#include "hcd/nml.hpp"
#include "hcd/rng.hpp"
#include "hcd/sbm.hpp"
#include "hcd/stream_gen.hpp"

using namespace hcd;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what) {
    std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, what.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

double brute_force_complexity(int n, int k) {
    std::vector<int> counts(k, 0);
    double total = 0.0;
    auto rec = [&](auto&& self, int cat, int remaining) -> void {
        if (cat == k - 1) {
            counts[cat] = remaining;
            double logp = std::lgamma(n + 1.0);
            for (int c : counts) {
                logp -= std::lgamma(c + 1.0);
                if (c > 0) logp += c * std::log(static_cast<double>(c) / n);
            }
            total += std::exp(logp);
            return;
        }
        for (int c = 0; c <= remaining; ++c) {
            counts[cat] = c;
            self(self, cat + 1, remaining - c);
        }
    };
    if (n == 0) return 1.0;
    rec(rec, 0, n);
    return total;
}

void criterion_1() {
    const auto start = Clock::now();
    double worst = 0.0;
    for (int n = 0; n <= 12; ++n)
        for (int k = 1; k <= 5; ++k) {
            const double expected = std::log(brute_force_complexity(n, k));
            worst = std::max(worst, std::abs(log_multinomial_complexity(n, k) - expected));
        }
    const double elapsed = seconds_since(start);
    std::ostringstream msg;
    msg << "normalizer matches brute force for n<=12, K<=5 (max |err| = " << worst
        << " nats, " << elapsed << " s)";
    report(1, worst < 1e-9 && elapsed < 1.0, msg.str());
}

void criterion_2() {
    ComplexityCache cache;
    GraphSnapshot g;
    g.n_nodes = 4;
    g.edges = {{0, 1}, {2, 3}};
    g.canonicalize();
    BlockAssignment z;
    z.k = 2;
    z.labels = {1, 1, 2, 2};
    const auto parts = dnml_code_length(pool_stats(std::vector{g}, std::vector{z}, 2), cache);
    std::ostringstream msg;
    msg << "two-block hand check: total = " << parts.total() << " nats (expected 6.4968)";
    report(2, std::abs(parts.total() - 6.4968) < 1e-3, msg.str());
}

void criterion_3() {
    Rng rng(123);
    ComplexityCache cache;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double worst = 0.0;
    for (int rep = 0; rep < 1000; ++rep) {
        const int n = 6 + static_cast<int>(unif(rng) * 10);
        const int h = 1 + (rep % 2);
        ThetaMatrix theta{{unif(rng), unif(rng)}, {unif(rng), unif(rng)}};
        theta[1][0] = theta[0][1];
        std::vector<GraphSnapshot> window;
        for (int s = 0; s < 2 * h; ++s)
            window.push_back(sample_sbm({0.5, 0.5}, theta, n, rng).first);
        DetectorConfig config;
        config.h = h;
        config.k_max = 3;
        config.restarts = 2;
        config.seed = rep;
        config.window_mode = rep % 3 == 0 ? WindowMode::per_snapshot : WindowMode::pooled;
        const auto r = mdl_change_statistic(std::span(window).subspan(0, h),
                                            std::span(window).subspan(h, h), config,
                                            rep % 5, 10 + rep % 7, cache);
        worst = std::max(worst, std::abs(r.phi - (r.phi_xz + r.phi_z + r.delta_l)));
    }
    std::ostringstream msg;
    msg << "decomposition identity over 1000 random windows (max |gap| = " << worst << ")";
    report(3, worst < 1e-9, msg.str());
}

void criterion_4() {
    const auto start = Clock::now();
    int hits = 0;
    const std::vector<double> pi{1.0 / 3, 1.0 / 3, 1.0 / 3};
    const ThetaMatrix theta{{0.8, 0.05, 0.05}, {0.05, 0.8, 0.05}, {0.05, 0.05, 0.8}};
    for (int seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        // static window: fixed planted memberships, links redrawn per snapshot
        auto [first, z] = sample_sbm(pi, theta, 100, rng);
        std::vector<GraphSnapshot> window{first};
        for (int s = 1; s < 4; ++s) window.push_back(link_trans(first, z, theta, 1.0, rng));
        ComplexityCache cache;
        const auto fit = select_model(window, 10, 10, seed, WindowMode::pooled, cache);
        if (fit.k_hat == 3) ++hits;
    }
    const double elapsed = seconds_since(start);
    std::ostringstream msg;
    msg << "planted 3-block selection: K=3 in " << hits << "/20 seeds (" << elapsed << " s)";
    report(4, hits >= 16 && elapsed < 120.0, msg.str());
}

struct LevelMetrics {
    double benefit_mean = -1.0, far_mean = -1.0;
};

LevelMetrics find_row(const ExperimentResult& result, const std::string& method, int level) {
    for (const auto& row : result.rows)
        if (row.method == method && row.level == level)
            return {row.benefit_mean, row.far_mean};
    return {};
}

void criteria_5_and_7() {
    const auto start = Clock::now();
    ExperimentConfig config;
    config.n_nodes = 100;
    config.detector.seed = 20260810;
    const int h_values[] = {2};
    const auto result = run_experiment(Scenario::abrupt, 20, h_values, config);
    const double elapsed = seconds_since(start);

    bool pass5 = elapsed < 900.0;
    std::ostringstream msg5;
    msg5 << "abrupt reproduction (h=2, 20 trials, " << elapsed << " s):";
    for (int level = 3; level >= 1; --level) {
        const auto m = find_row(result, "hcdl", level);
        msg5 << " L" << level << " benefit=" << m.benefit_mean << " far=" << m.far_mean;
        pass5 = pass5 && m.benefit_mean >= 0.9 && m.far_mean <= 0.05;
    }
    report(5, pass5, msg5.str());

    const auto hcdl3 = find_row(result, "hcdl", 3);
    const auto tbe3 = find_row(result, "tbe", 3);
    const auto tbe2 = find_row(result, "tbe", 2);
    const auto tbe1 = find_row(result, "tbe", 1);
    std::ostringstream msg7;
    msg7 << "baseline ordering: tbe L3 benefit=" << tbe3.benefit_mean << " vs hcdl "
         << hcdl3.benefit_mean << ", tbe L2=" << tbe2.benefit_mean
         << ", tbe L1=" << tbe1.benefit_mean;
    report(7,
           tbe3.benefit_mean < hcdl3.benefit_mean && tbe2.benefit_mean <= 0.1 &&
               tbe1.benefit_mean <= 0.1,
           msg7.str());
}

void criterion_6() {
    const auto start = Clock::now();
    ExperimentConfig config;
    config.n_nodes = 100;
    config.detector.seed = 20260811;
    const int h_values[] = {3};
    const auto result = run_experiment(Scenario::gradual, 20, h_values, config);
    const double elapsed = seconds_since(start);
    const auto m = find_row(result, "hcdl", 3);
    std::ostringstream msg;
    msg << "gradual reproduction (h=3, 20 trials, " << elapsed
        << " s): L3 benefit=" << m.benefit_mean << " far=" << m.far_mean;
    report(6, m.benefit_mean >= 0.85 && m.far_mean <= 0.05, msg.str());
}

void criterion_8() {
    const auto gen = gen_abrupt(60, 4242);
    std::vector<int> alarm_counts;
    std::vector<double> eps_at_mid;
    for (double delta : {0.01, 0.05, 0.2}) {
        DetectorConfig config;
        config.h = 2;
        config.k_max = 6;
        config.restarts = 5;
        config.seed = 11;
        config.delta = delta;
        const auto reports = run_hcdl(gen.snapshots, config);
        int alarms = 0;
        for (const auto& r : reports) alarms += r.alarm_level3 ? 1 : 0;
        alarm_counts.push_back(alarms);
        eps_at_mid.push_back(reports[reports.size() / 2].eps);
    }
    const bool monotone_alarms =
        alarm_counts[0] <= alarm_counts[1] && alarm_counts[1] <= alarm_counts[2];
    const bool thresholds_decrease = eps_at_mid[0] > eps_at_mid[1] && eps_at_mid[1] > eps_at_mid[2];
    std::ostringstream msg;
    msg << "delta sweep alarms: " << alarm_counts[0] << " <= " << alarm_counts[1]
        << " <= " << alarm_counts[2] << ", thresholds strictly decreasing";
    report(8, monotone_alarms && thresholds_decrease, msg.str());
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void criterion_9(const char* cli_path) {
    hcd_stream* stream = nullptr;
    bool pass = hcd_stream_generate("abrupt", 40, 99, &stream) == HCD_OK;
    pass = pass && hcd_stream_save(stream, "acc_stream.txt") == HCD_OK;

    hcd_config config;
    hcd_config_default(&config);
    config.h = 2;
    config.k_max = 5;
    config.restarts = 4;
    config.seed = 12345;

    for (int run = 0; run < 2 && pass; ++run) {
        hcd_stream* loaded = nullptr;
        hcd_result* result = nullptr;
        pass = hcd_stream_load("acc_stream.txt", &loaded) == HCD_OK;
        pass = pass && hcd_detect(loaded, &config, &result) == HCD_OK;
        const std::string csv = run == 0 ? "acc_run1.csv" : "acc_run2.csv";
        const std::string json = run == 0 ? "acc_run1.json" : "acc_run2.json";
        pass = pass && hcd_result_write_csv(result, csv.c_str()) == HCD_OK;
        pass = pass &&
               hcd_result_write_json(result, &config, "acc_stream.txt", json.c_str()) == HCD_OK;
        hcd_result_free(result);
        hcd_stream_free(loaded);
    }
    pass = pass && slurp("acc_run1.csv") == slurp("acc_run2.csv");
    pass = pass && !slurp("acc_run1.csv").empty();
    pass = pass && slurp("acc_run1.json") == slurp("acc_run2.json");

    std::string detail = "library outputs byte-identical across runs";
    if (cli_path != nullptr) {
        const std::string base = std::string(cli_path) +
                                 " detect --input acc_stream.txt --h 2 --kmax 5 --restarts 4"
                                 " --seed 12345 --output ";
        const int rc1 = std::system(("HCD_LOG=quiet " + base + "acc_cli1.csv").c_str());
        const int rc2 = std::system(("HCD_LOG=quiet " + base + "acc_cli2.csv").c_str());
        pass = pass && rc1 == 0 && rc2 == 0;
        pass = pass && slurp("acc_cli1.csv") == slurp("acc_cli2.csv");
        pass = pass && !slurp("acc_cli1.csv").empty();
        pass = pass && slurp("acc_cli1.json") == slurp("acc_cli2.json");
        detail += "; CLI outputs byte-identical across runs";
    }
    hcd_stream_free(stream);
    report(9, pass, detail);
}

}  // namespace

int main(int argc, char** argv) {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criteria_5_and_7();
    criterion_6();
    criterion_8();
    criterion_9(argc > 1 ? argv[1] : nullptr);
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
