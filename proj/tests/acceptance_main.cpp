// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "concbound/concbound.hpp"

using namespace concbound;

namespace {

struct Criterion {
    std::string name;
    std::function<bool(std::string&)> body;
};

bool expect(bool ok, const std::string& what, std::string& log) {
    if (!ok) log += "    failed: " + what + "\n";
    return ok;
}

double rel_err(double got, double want) { return std::fabs(got / want - 1.0); }

// ---- criterion 1: first-order constants ------------------------------------

bool constants_criterion(std::string& log) {
    const MomentEnvelopeSpec env_only{4.0, 1.0};
    const MomentEnvelopeSpec sigma_only{4.0, 0.0};
    const ProcessScale unit{1, 1, 0.0, {}};
    const ProcessScale unit_sigma{1, 1, 1.0, {}};

    bool ok = true;
    const double c72 =
        eval_main_moment_bound(Direction::Upper, 1.0, 1.0, env_only, unit).value;
    const double c4 =
        eval_main_moment_bound(Direction::Upper, 1.0, 1.0, sigma_only, unit_sigma).value;
    const double c1793 =
        eval_main_moment_bound(Direction::Lower, 1.0, 0.5, env_only, unit).value;
    const double c47 =
        eval_main_moment_bound(Direction::Lower, 1.0, 0.5, sigma_only, unit_sigma).value;
    ok &= expect(rel_err(c72, 72.0) <= 1e-12, "envelope coefficient 72", log);
    ok &= expect(rel_err(c4, 4.0) <= 1e-12, "sigma coefficient 4", log);
    ok &= expect(rel_err(c1793, 179.3) <= 1e-12, "lower envelope coefficient 179.3", log);
    ok &= expect(rel_err(c47, 4.7) <= 1e-12, "lower sigma coefficient 4.7", log);
    return ok;
}

// ---- criterion 2: counting lemma -------------------------------------------

bool combinatorics_criterion(std::string& log) {
    bool ok = true;
    for (int m = 1; m <= 6; ++m) {
        for (int n = 1; n <= 6; ++n) {
            const auto exact = c_exact(m, n);
            const double bound = c_bound(m, n);
            ok &= expect(static_cast<double>(exact) <= bound,
                         "C(" + std::to_string(m) + "," + std::to_string(n) + ") <= bound", log);
        }
    }
    for (int n = 1; n <= 6; ++n) {
        ok &= expect(c_exact(1, n) == 0, "C_1^n = 0", log);
        ok &= expect(c_exact(2, n) == static_cast<std::uint64_t>(n), "C_2^n = n", log);
    }
    ok &= expect(c_exact(3, 2) == 2, "C_3^2 = 2", log);
    for (int m = 2; m <= 6; ++m) ok &= expect(c_exact(m, 1) == 1, "C_m^1 = 1", log);
    return ok;
}

// ---- criterion 3: Monte Carlo dominance ------------------------------------

bool dominance_criterion(std::string& log) {
    struct Case {
        EnsembleConfig config;
        std::vector<PlusMomentTarget> targets;
    };
    const std::vector<PlusMomentTarget> first_order = {{1.0, 1.0, Direction::Upper},
                                                       {1.0, 0.5, Direction::Lower}};
    std::vector<Case> cases;

    EnsembleConfig rademacher;
    rademacher.family = Family::Rademacher;
    rademacher.n = 100;
    rademacher.N = 50;
    rademacher.seed = 1001;
    cases.push_back({rademacher, first_order});

    EnsembleConfig uniform;
    uniform.family = Family::BoundedUniform;
    uniform.lo = -1.0;
    uniform.hi = 1.0;
    uniform.n = 100;
    uniform.N = 50;
    uniform.seed = 1002;
    cases.push_back({uniform, first_order});

    EnsembleConfig pareto;
    pareto.family = Family::SymmetricPareto;
    pareto.alpha = 4.5;
    pareto.scale = 1.0;
    pareto.n = 100;
    pareto.N = 50;
    pareto.seed = 1003;
    pareto.dependence = Dependence::SharedEnvelopeRows;  // makes M analytic and exact
    cases.push_back({pareto,
                     {{1.0, 1.0, Direction::Upper},
                      {1.0, 0.5, Direction::Lower},
                      {2.0, 1.0, Direction::Upper},
                      {2.0, 0.5, Direction::Lower}}});

    const double p = 4.0;
    bool ok = true;
    for (const auto& c : cases) {
        const auto moments = analytic_ensemble_moments(c.config, p);
        const MomentEnvelopeSpec spec{p, moments.M};
        const ProcessScale scale{c.config.n, c.config.N, moments.sigma, {}};
        const auto summary = estimate(c.config, 100000, c.targets);
        for (const auto& pm : summary.plus_moments) {
            const double bound =
                eval_main_moment_bound(pm.direction, pm.l, pm.eps, spec, scale).value;
            const bool holds = pm.estimate - 3.0 * pm.se <= bound;
            std::ostringstream what;
            what << std::string(to_string(c.config.family)) << " l=" << pm.l
                 << " dir=" << std::string(to_string(pm.direction)) << ": " << pm.estimate
                 << " - 3*" << pm.se << " <= " << bound;
            ok &= expect(holds, what.str(), log);
        }
    }
    return ok;
}

// ---- criterion 4: truncation-bias lemma ------------------------------------

bool truncation_criterion(std::string& log) {
    const double p = 4.0;
    bool ok = true;
    std::uint64_t seed = 2001;
    for (double l : {1.0, 2.0}) {
        for (std::int64_t n : {std::int64_t{50}, std::int64_t{200}}) {
            EnsembleConfig config;
            config.family = Family::SymmetricPareto;
            config.alpha = 4.5;
            config.scale = 1.0;
            config.n = n;
            config.N = 50;
            config.seed = seed++;
            config.dependence = Dependence::SharedEnvelopeRows;

            const auto moments = analytic_ensemble_moments(config, p);
            const double K = std::pow(static_cast<double>(n), l / p) * moments.M;
            const double bound = moments.M / std::pow(static_cast<double>(n), 1.0 - l / p);

            const auto batch = run_replications(config, 20000, K);
            double mean = 0.0;
            for (const auto& s : batch.stats) mean += s.sup_bounded - s.sup;
            mean /= static_cast<double>(batch.stats.size());
            double var = 0.0;
            for (const auto& s : batch.stats) {
                const double d = (s.sup_bounded - s.sup) - mean;
                var += d * d;
            }
            const double se = std::sqrt(var / static_cast<double>(batch.stats.size() - 1)) /
                              std::sqrt(static_cast<double>(batch.stats.size()));

            std::ostringstream what;
            what << "l=" << l << " n=" << n << ": |" << mean << "| - 3*" << se
                 << " <= " << bound;
            ok &= expect(std::fabs(mean) - 3.0 * se <= bound, what.str(), log);
        }
    }
    return ok;
}

// ---- criterion 5: gamma accuracy -------------------------------------------

bool gamma_criterion(std::string& log) {
    const double sqrt_pi = 1.7724538509055160273;
    const struct {
        double x, reference;
    } table[] = {{0.5, sqrt_pi}, {1.0, 1.0},  {1.5, sqrt_pi / 2.0},
                 {2.0, 1.0},     {5.0, 24.0}, {10.0, 362880.0}};
    bool ok = true;
    for (const auto& row : table) {
        ok &= expect(rel_err(concbound::gamma(row.x), row.reference) <= 1e-12,
                     "Gamma(" + std::to_string(row.x) + ")", log);
    }
    return ok;
}

// ---- criterion 6: MGF lemma ------------------------------------------------

bool mgf_criterion(std::string& log) {
    const FiniteSupportDistribution two_point{{-1.0, 1.0}, {0.5, 0.5}};
    bool ok = true;
    for (double a : {1.0, 2.0, 4.0}) {
        const auto v = check_mgf_lemma(two_point, a);
        ok &= expect(v.passed && v.empirical_se == 0.0,
                     "E e^(W/A) <= 1 + 1/A^2 at A=" + std::to_string(a), log);
    }
    return ok;
}

// ---- criterion 7: optimizer soundness --------------------------------------

bool optimizer_criterion(std::string& log) {
    CounterRng rng(777, 99);
    bool ok = true;
    for (int trial = 0; trial < 20; ++trial) {
        const double p = 1.5 + 4.5 * rng.next_unit();
        const double m = 0.2 + 1.8 * rng.next_unit();
        const double sigma = 2.0 * rng.next_unit();
        const auto n = static_cast<std::int64_t>(20 + rng.next_below(2000));
        const double eps = 0.3 + 1.7 * rng.next_unit();
        const double x = 0.5 + 29.5 * rng.next_unit();
        const MomentEnvelopeSpec spec{p, m};
        const ProcessScale scale{n, 1, sigma, {}};

        const auto result = eval_tail_bound_chebyshev(Direction::Upper, x, eps, spec, scale);

        // independent dense-grid brute force, step 1e-4
        double best_log = std::numeric_limits<double>::infinity();
        const auto steps = static_cast<long>(std::ceil((p - 1.0) / 1e-4));
        for (long k = 0; k <= steps; ++k) {
            const double l = std::min(1.0 + static_cast<double>(k) * 1e-4, p);
            const double inner =
                (64.0 / eps + 7.0 + eps) * l * m /
                    std::pow(static_cast<double>(n), 1.0 - l / p) +
                4.0 * std::sqrt(l) * sigma / std::sqrt(static_cast<double>(n));
            best_log = std::min(best_log, l * (std::log(inner) - std::log(x)));
        }
        const double oracle = std::min(std::exp(best_log), 1.0);

        std::ostringstream what;
        what << "trial " << trial << ": optimizer " << result.bound.value << " vs oracle "
             << oracle;
        ok &= expect(std::fabs(result.bound.value - oracle) <= 1e-9, what.str(), log);

        const auto endpoint = [&](double l) {
            return std::min(
                eval_main_moment_bound(Direction::Upper, l, eps, spec, scale).value /
                    std::pow(x, l),
                1.0);
        };
        ok &= expect(result.bound.value <= endpoint(1.0) + 1e-12, "minimum <= value at l=1", log);
        ok &= expect(result.bound.value <= endpoint(p) + 1e-12, "minimum <= value at l=p", log);
    }
    return ok;
}

// ---- criterion 8: determinism and the failure path -------------------------

bool determinism_criterion(std::string& log) {
    const std::string fixture =
        "command = verify\n"
        "seed = 7\n"
        "replications = 2000\n"
        "ensemble.family = rademacher\n"
        "ensemble.n = 20\n"
        "ensemble.N = 5\n"
        "process.p = 4\n";

    const auto dir = std::filesystem::temp_directory_path();
    const auto out1 = dir / "concbound_acceptance_run1.jsonl";
    const auto out2 = dir / "concbound_acceptance_run2.jsonl";
    const auto out3 = dir / "concbound_acceptance_corrupt.jsonl";

    auto cfg = parse_config(fixture);
    cfg.output_path = out1.string();
    const int status1 = run(cfg);
    cfg.output_path = out2.string();
    const int status2 = run(cfg);

    auto corrupted = parse_config(fixture + "verify.bound_scale = 0.001\n");
    corrupted.output_path = out3.string();
    const int status3 = run(corrupted);

    const auto read = [](const std::filesystem::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    };
    bool ok = true;
    ok &= expect(status1 == 0 && status2 == 0, "clean verify runs exit 0", log);
    const auto bytes1 = read(out1);
    ok &= expect(!bytes1.empty() && bytes1 == read(out2), "byte-identical verify outputs", log);
    ok &= expect(status3 == 1, "corrupted-bound fixture exits 1", log);

    std::filesystem::remove(out1);
    std::filesystem::remove(out2);
    std::filesystem::remove(out3);
    return ok;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"constant reproduction (first-order coefficients 72, 4, 179.3, 4.7)",
         constants_criterion},
        {"counting lemma on the grid m,n <= 6 with exact anchors", combinatorics_criterion},
        {"Monte Carlo dominance for the main concentration bound", dominance_criterion},
        {"truncation-bias lemma at K = n^(l/p) M", truncation_criterion},
        {"gamma accuracy at reference points (rel. error <= 1e-12)", gamma_criterion},
        {"MGF lemma exact checks at A in {1, 2, 4}", mgf_criterion},
        {"tail-bound optimizer vs dense-grid brute force (1e-9)", optimizer_criterion},
        {"byte-identical verify runs and failure-path exit status", determinism_criterion},
    };

    int passed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        std::string log;
        bool ok = false;
        try {
            ok = criteria[i].body(log);
        } catch (const std::exception& e) {
            log += std::string("    exception: ") + e.what() + "\n";
        }
        const auto seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%zu/%zu] %s %s (%.2fs)\n", i + 1, criteria.size(), ok ? "PASS" : "FAIL",
                    criteria[i].name.c_str(), seconds);
        if (!log.empty()) std::fputs(log.c_str(), stdout);
        passed += ok ? 1 : 0;
    }
    std::printf("acceptance: %d/%zu criteria passed\n", passed, criteria.size());
    return passed == static_cast<int>(criteria.size()) ? 0 : 1;
}
