// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion
// numbers on the command line to run a subset.

#include "scelab/equivalence.hpp"
#include "scelab/experiment.hpp"
#include "scelab/measurements.hpp"
#include "scelab/metrics.hpp"
#include "scelab/oracles.hpp"
#include "scelab/payments.hpp"
#include "scelab/reproduce.hpp"
#include "scelab/sampling.hpp"
#include "scelab/stats.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace scelab;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x, int digits = 4)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

// ---------------------------------------------------------------------------

Outcome c1_example1()
{
    const auto t0 = Clock::now();
    double worst = 0.0;
    std::string where;
    for (double xi : {0.4, 0.6, 0.8})
        for (double sigma : {0.0, 1.0, 2.0}) {
            const double exact = example1_payoff(xi, sigma);
            const auto sim = example1_simulate(xi, sigma, 100000, Seed(2024).child("c1"));
            const double rel = std::abs(sim.total_payment - exact) / exact;
            if (rel >= worst) worst = rel, where = "xi=" + fmt(xi) + " sigma=" + fmt(sigma);
        }
    const double secs = seconds_since(t0);
    return {worst < 0.05 && secs < 30.0,
            "max rel err " + fmt(worst) + " at " + where + ", " + fmt(secs, 3) + " s (limits 0.05, 30 s)"};
}

Outcome c2_surrogate()
{
    const auto t0 = Clock::now();
    double worst = 0.0;
    std::string where;
    for (double beta : {0.5, 1.0, 2.0})
        for (double noise : {0.5, 1.0, 2.0}) {
            const auto t = theorem1_check({1.0, noise, beta}, 0.6, 1000, 1000, Seed(2024).child("c2"));
            if (t.residual >= worst) worst = t.residual, where = "beta=" + fmt(beta) + " noise=" + fmt(noise);
        }
    const double secs = seconds_since(t0);
    return {worst < 0.02 && secs < 60.0,
            "max |MI - delta*sigma_q| " + fmt(worst) + " at " + where + ", " + fmt(secs, 3) + " s (limits 0.02, 60 s)"};
}

Outcome c3_self_consistency()
{
    const auto t0 = Clock::now();
    const auto cfg = paper_base();
    const double xi = 0.6;
    SceOptions o;
    o.replicates = 2000;
    o.sensitivity.iterations = 2000;
    o.search.step = 5.0;
    o.independent_target = true;
    const Seed seed = Seed(2024).child("c3");
    CurveCache mi(mi_curve(cfg, xi, o.replicates, seed));
    CurveCache sens(sensitivity_curve(cfg, xi, o.sensitivity, seed));
    bool ok = true;
    std::string detail;
    for (double x0 : {20.0, 40.0, 60.0, 80.0}) {
        const auto m = Measurement::spot_check(x0);
        const double a = sce_mi(cfg, m, xi, o, seed, &mi).sce_percent;
        const double b = sce_sensitivity(cfg, m, xi, o, seed, &sens).sce_percent;
        ok = ok && std::abs(a - x0) <= o.search.step && std::abs(b - x0) <= o.search.step;
        detail += "SC(" + fmt(x0) + ")->" + fmt(a, 3) + "/" + fmt(b, 3) + " ";
    }
    const double secs = seconds_since(t0);
    return {ok && secs < 600.0, detail + "(mi/sensitivity), " + fmt(secs, 3) + " s (limits +-5, 600 s)"};
}

// Non-decreasing with at most one inversion, and that one within 2 stderr.
bool nearly_monotone(const std::vector<MetricEstimate>& v, double sign, std::string& note)
{
    int inversions = 0;
    bool ok = true;
    for (std::size_t i = 1; i < v.size(); ++i) {
        const double step = sign * (v[i].value - v[i - 1].value);
        if (step < 0.0) {
            ++inversions;
            const double se = std::hypot(v[i].stderr_value, v[i - 1].stderr_value);
            if (-step > 2.0 * se) ok = false;
        }
    }
    note += std::to_string(inversions) + " inv";
    return ok && inversions <= 1;
}

Outcome c4_monotonicity()
{
    const auto cfg = paper_base();
    const double xi = 0.6;
    const Seed seed = Seed(2024).child("c4");
    std::vector<MetricEstimate> mi, sens, pay;
    SensitivityOptions so;
    so.iterations = 1000;
    CalibrationOptions co;
    co.replicates = 1000;
    for (double x = 20.0; x <= 100.0; x += 10.0) {
        const auto m = Measurement::spot_check(x);
        mi.push_back(measurement_integrity(cfg, m, xi, 1000, seed.child("mi")));
        sens.push_back(sensitivity_proxy(cfg, m, xi, so, seed.child("sensitivity")));
        pay.push_back(total_payment(cfg, m, xi, co, seed.child("payment")));
    }
    std::string note = "MI ";
    bool ok = nearly_monotone(mi, 1.0, note);
    note += ", sensitivity ";
    ok = nearly_monotone(sens, 1.0, note) && ok;
    note += ", -payment ";
    ok = nearly_monotone(pay, -1.0, note) && ok;
    note += " over SC(20..100 by 10); payment " + fmt(pay.front().value) + " -> " + fmt(pay.back().value);
    return {ok, note};
}

Outcome c5_anticorrelation()
{
    ReproduceOptions o;
    o.scale = Scale::desk;
    o.seed = 2024;
    const auto panels = figure_data(Figure::mi_vs_payment, o);
    bool ok = true;
    std::string detail = "spearman";
    for (const auto& panel : panels) {
        std::vector<double> x, y;
        for (const auto& p : panel.points) {
            if (p.series == "dmi") continue;
            if (!p.error.empty()) {
                ok = false;
                detail += " [" + p.series + " failed: " + p.error + "]";
                continue;
            }
            x.push_back(p.x);
            y.push_back(p.y);
        }
        const double rho = spearman(x, y);
        ok = ok && rho <= -0.8;
        detail += " xi=" + fmt(panel.effort) + ":" + fmt(rho, 3);
    }
    return {ok, detail + " (limit <= -0.8)"};
}

// Mean SCE-MI over seeds for several mechanisms sharing one SC curve per seed.
std::map<std::string, double> mean_sce(const IecConfig& cfg, double xi, const std::vector<std::string>& ids,
                                       std::size_t seeds, std::size_t reps, Seed base, bool sensitivity,
                                       std::map<std::string, std::vector<double>>* per_seed = nullptr)
{
    SceOptions o;
    o.replicates = reps;
    o.sensitivity.iterations = reps;
    o.independent_target = true;
    std::map<std::string, double> mean;
    for (std::size_t s = 0; s < seeds; ++s) {
        const Seed seed = base.child(s);
        CurveCache curve(sensitivity ? sensitivity_curve(cfg, xi, o.sensitivity, seed)
                                     : mi_curve(cfg, xi, reps, seed));
        for (const auto& id : ids) {
            const auto m = Measurement::parse(id);
            const double v = sensitivity ? sce_sensitivity(cfg, m, xi, o, seed, &curve).sce_percent
                                         : sce_mi(cfg, m, xi, o, seed, &curve).sce_percent;
            mean[id] += v / static_cast<double>(seeds);
            if (per_seed) (*per_seed)[id].push_back(v);
        }
    }
    return mean;
}

Outcome c6_effort_trend()
{
    const auto cfg = paper_base();
    const std::vector<std::string> ids{"oa", "pts", "ca", "fmi:kl", "fmi:h2", "dmi"};
    std::map<double, std::map<std::string, double>> by_xi;
    for (double xi : {0.5, 0.6, 0.7, 0.8}) by_xi[xi] = mean_sce(cfg, xi, ids, 2, 500, Seed(2024).child("c6"), false);
    bool ok = true;
    std::string detail = "gain 0.5->0.8:";
    for (const auto& id : {"oa", "pts", "ca", "fmi:kl"}) {
        const double gain = by_xi[0.8][id] - by_xi[0.5][id];
        ok = ok && gain >= 10.0;
        detail += std::string(" ") + id + " " + fmt(by_xi[0.5][id], 3) + "->" + fmt(by_xi[0.8][id], 3);
    }
    detail += "; dmi lowest:";
    for (auto& [xi, sce] : by_xi) {
        bool lowest = true;
        for (const auto& [id, v] : sce)
            if (id != "dmi" && !(sce["dmi"] < v)) lowest = false;
        ok = ok && lowest;
        detail += " " + fmt(xi) + (lowest ? " yes" : " NO") + "(" + fmt(sce["dmi"], 3) + ")";
    }
    return {ok, detail};
}

Outcome c7_tasks_trend()
{
    const double xi = 0.7;
    const std::vector<std::string> ids{"oa", "pts", "ca", "fmi:kl"};
    const std::vector<std::size_t> ks{3, 5, 7, 10};
    const std::size_t seeds = 5;
    std::map<std::string, std::vector<double>> mean;              // per K
    std::map<std::string, std::vector<double>> xs, ys;            // (K, seed) points
    for (std::size_t k : ks) {
        std::map<std::string, std::vector<double>> per_seed;
        const auto m = mean_sce(paper_base(k), xi, ids, seeds, 500, Seed(2024).child("c7").child(k), false, &per_seed);
        for (const auto& id : ids) {
            mean[id].push_back(m.at(id));
            for (double v : per_seed[id]) xs[id].push_back(static_cast<double>(k)), ys[id].push_back(v);
        }
    }
    const std::vector<double> kd(ks.begin(), ks.end());
    bool ok = true;
    std::string detail;
    for (const auto& id : {"ca", "fmi:kl"}) {
        const double rho = spearman(kd, mean[id]);
        ok = ok && rho > 0.9;
        detail += std::string(id) + " spearman " + fmt(rho, 3) + " [";
        for (double v : mean[id]) detail += fmt(v, 3) + " ";
        detail.back() = ']';
        detail += "; ";
    }
    for (const auto& id : {"oa", "pts"}) {
        const auto fit = linear_fit(xs[id], ys[id]);
        const bool flat = std::abs(fit.slope) <= 2.0 * fit.slope_stderr;
        ok = ok && flat;
        detail += std::string(id) + " slope " + fmt(fit.slope, 3) + "+-" + fmt(fit.slope_stderr, 3) + "; ";
    }
    return {ok, detail};
}

Outcome c8_cross_agreement()
{
    const auto cfg = paper_base();
    const double xi = 0.7;
    const std::vector<std::string> ids{"oa", "pts", "ca", "fmi:kl"};
    const auto by_mi = mean_sce(cfg, xi, ids, 5, 500, Seed(2024).child("c8"), false);
    const auto by_sens = mean_sce(cfg, xi, ids, 5, 500, Seed(2024).child("c8"), true);
    auto order = [&](const std::map<std::string, double>& v) {
        auto o = ids;
        std::stable_sort(o.begin(), o.end(), [&](const auto& a, const auto& b) { return v.at(a) > v.at(b); });
        return o;
    };
    const auto a = order(by_mi);
    const auto b = order(by_sens);
    bool ok = a == b;
    for (std::size_t i = 0; !ok && i + 1 < a.size(); ++i) {
        auto t = a;
        std::swap(t[i], t[i + 1]);
        ok = t == b;
    }
    std::string detail = "mi:";
    for (const auto& id : a) detail += " " + id + "(" + fmt(by_mi.at(id), 3) + ")";
    detail += " sensitivity:";
    for (const auto& id : b) detail += " " + id + "(" + fmt(by_sens.at(id), 3) + ")";
    return {ok, detail};
}

Outcome c9_exact_invariants()
{
    std::vector<std::string> failed;
    auto check = [&](bool cond, const char* name) {
        if (!cond) failed.push_back(name);
    };
    Rng rng(Seed(2024).child("c9"));

    bool borda = true, ranks = true;
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 2 + rng.below(60);
        std::vector<double> s(n), t(n);
        for (auto& v : s) v = static_cast<double>(rng.below(8)) * 0.125;
        for (std::size_t i = 0; i < n; ++i) t[i] = std::pow(s[i] + 1.0, 3.0) - 2.0;
        const double scale = static_cast<double>(1 + rng.below(16)) * 0.25;  // dyadic: sums exact
        const auto p = borda_payoffs(s, scale);
        borda = borda && p.total == scale * static_cast<double>(n * (n - 1) / 2);
        ranks = ranks && p.values == borda_payoffs(t, scale).values;
        Rng w1{Seed(trial)}, w2{Seed(trial)};
        ranks = ranks && winner_take_all(s, 3.0, w1).values == winner_take_all(t, 3.0, w2).values;
    }
    check(borda, "borda conservation");
    check(ranks, "rank invariance");

    const auto cfg = paper_base();
    const ReplicateSampler sampler(cfg, Seed(2024).child("c9-inst"));
    bool sc = true, tvd = true, dmi = true;
    for (std::size_t r = 0; r < 20; ++r) {
        const auto inst = sampler.instance(r, EffortProfile::symmetric(50, 0.2 + 0.04 * static_cast<double>(r)));
        Rng r1 = sampler.rng(r, "measurement");
        sc = sc && spot_check(inst, Measurement::spot_check(100), r1).values == quality_vector(inst).values;
        const auto& g = inst.g();
        for (AgentId a = 0; a + 1 < 50; a += 5) {
            const auto shared = g.shared_edges(a, a + 1);
            std::vector<Label> x, y;
            for (auto [ea, eb] : shared) x.push_back(inst.report(ea)), y.push_back(inst.report(eb));
            const auto c = count_joint(x, y, 4);
            tvd = tvd && f_mutual_information(c, Divergence::tvd) == 2.0 * ca_pair_score(c);
        }
        auto perm = inst;
        const std::array<Label, 4> pi{3, 1, 0, 2};
        for (auto& v : perm.reports) v = pi[v];
        for (auto& v : perm.ground_truths) v = pi[v];
        Rng d1{Seed(r)}, d2{Seed(r)};
        dmi = dmi && evaluate(Measurement::determinant_mi(), inst, d1).values ==
                         evaluate(Measurement::determinant_mi(), perm, d2).values;
    }
    check(sc, "SC(100) = quality");
    check(tvd, "TVD f-MI = 2 CA");
    check(dmi, "DMI label permutation");

    // Affine maps with exactly representable coefficients; compared to 1 ulp-scale rounding.
    bool affine = true;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> x(40), y(40), ax(40);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.normal(), y[i] = x[i] + rng.normal();
        const double a = (rng.bernoulli(0.5) ? 1.0 : -1.0) * static_cast<double>(1 + rng.below(8)) * 0.5;
        const double b = static_cast<double>(rng.below(64)) - 32.0;
        for (std::size_t i = 0; i < x.size(); ++i) ax[i] = a * x[i] + b;
        affine = affine && std::abs(pearson(ax, y) - (a > 0 ? 1 : -1) * pearson(x, y)) <= 1e-12;
    }
    check(affine, "pearson affine invariance");

    ExperimentConfig ec;
    ec.mechanisms = {Measurement::spot_check(50), Measurement::output_agreement(),
                     Measurement::correlated_agreement(), Measurement::determinant_mi()};
    ec.efforts = {0.6};
    ec.replicates = ec.iterations = 16;
    ec.sce_step = 25;
    std::ostringstream first, second, serial;
    write_csv(first, run(ec));
    write_csv(second, run(ec));
    ec.execution = Execution::serial;
    write_csv(serial, run(ec));
    check(first.str() == second.str() && first.str() == serial.str(), "determinism");

    std::string detail = "7 invariants";
    if (!failed.empty()) {
        detail = "failed:";
        for (const auto& f : failed) detail += " [" + f + "]";
    }
    return {failed.empty(), detail};
}

}  // namespace

int main(int argc, char** argv)
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"example-1 oracle equivalence", c1_example1},
        {"surrogate bijection", c2_surrogate},
        {"SCE self-consistency", c3_self_consistency},
        {"monotonicity suite", c4_monotonicity},
        {"MI-payment anticorrelation", c5_anticorrelation},
        {"SCE vs effort trend", c6_effort_trend},
        {"tasks-per-agent trend", c7_tasks_trend},
        {"cross-algorithm SCE agreement", c8_cross_agreement},
        {"exact invariants", c9_exact_invariants},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::stoi(argv[i]));

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i + 1);
        if (!selected.empty() && !selected.count(id)) continue;
        const auto t0 = Clock::now();
        Outcome out;
        try {
            out = criteria[i].second();
        } catch (const std::exception& e) {
            out = {false, std::string("threw: ") + e.what()};
        }
        if (!out.pass) ++failures;
        std::cout << (out.pass ? "PASS" : "FAIL") << " C" << id << " " << criteria[i].first << ": " << out.detail
                  << " [" << fmt(seconds_since(t0), 3) << " s]" << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
