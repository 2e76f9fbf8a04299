#include <doctest.h>

#include "scelab/error.hpp"
#include "scelab/iec.hpp"
#include "scelab/matrix.hpp"
#include "scelab/parallel.hpp"
#include "scelab/rng.hpp"
#include "scelab/sampling.hpp"
#include "scelab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

using namespace scelab;

TEST_CASE("seed children are order independent and distinct")
{
    const Seed s(42);
    CHECK(s.child(3) == Seed(42).child(3));
    CHECK_FALSE(s.child(3) == s.child(4));
    CHECK_FALSE(s.child("graph") == s.child("instance"));
    Rng a(s.child(7)), b(s.child(7));
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
}

TEST_CASE("rng draws stay in range")
{
    Rng rng(Seed(1));
    double sum = 0.0;
    for (int i = 0; i < 20000; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
        REQUIRE(rng.below(7) < 7);
    }
    CHECK(sum / 20000 == doctest::Approx(0.5).epsilon(0.02));
    std::vector<double> z(20000);
    for (auto& x : z) x = rng.normal();
    const auto s = summarize(z);
    CHECK(std::abs(s.mean) < 0.03);
    CHECK(s.sd == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("serial and parallel loops agree bitwise")
{
    auto fn = [](std::size_t i) {
        Rng rng(Seed(9).child(i));
        double acc = 0.0;
        for (int k = 0; k < 50; ++k) acc += rng.normal();
        return acc;
    };
    const auto s = map_indices<double>(1000, Execution::serial, fn);
    const auto p = map_indices<double>(1000, Execution::parallel, fn);
    CHECK(s == p);
}

TEST_CASE("parallel loop rethrows the lowest failing index")
{
    auto fn = [](std::size_t i) {
        if (i == 17 || i == 400) throw Error("index " + std::to_string(i));
    };
    for (auto exec : {Execution::serial, Execution::parallel}) {
        try {
            for_each_index(500, exec, fn);
            FAIL("expected a throw");
        } catch (const Error& e) {
            CHECK(std::string(e.what()) == "index 17");
        }
    }
}

TEST_CASE("pearson examples")
{
    const std::vector<double> x{1, 2, 3, 4, 5};
    CHECK(pearson(x, x) == doctest::Approx(1.0));
    std::vector<double> y;
    for (double v : x) y.push_back(-2 * v + 3);
    CHECK(pearson(x, y) == doctest::Approx(-1.0));
    CHECK(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{2, 2, 4}) == doctest::Approx(0.866).epsilon(1e-3));
    CHECK_THROWS_AS(pearson(x, std::vector<double>(5, 2.0)), UndefinedCorrelation);
    CHECK_THROWS_AS(pearson(x, std::vector<double>{1, 2}), DomainError);
}

TEST_CASE("pearson affine invariance")
{
    Rng rng(Seed(3));
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x(30), y(30);
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = rng.uniform();
            y[i] = x[i] + rng.normal();
        }
        const double a = rng.uniform() * 4 - 2, b = rng.normal() * 10;
        if (std::abs(a) < 0.01) continue;
        std::vector<double> ax(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) ax[i] = a * x[i] + b;
        CHECK(pearson(ax, y) == doctest::Approx((a > 0 ? 1 : -1) * pearson(x, y)).epsilon(1e-12));
    }
}

TEST_CASE("ranks, spearman, fits")
{
    CHECK(average_ranks(std::vector<double>{10, 20, 20, 5}) == std::vector<double>{2, 3.5, 3.5, 1});
    CHECK(spearman(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 4, 9, 16}) == doctest::Approx(1.0));
    const auto fit = linear_fit(std::vector<double>{0, 1, 2, 3}, std::vector<double>{1, 3, 5, 7});
    CHECK(fit.slope == doctest::Approx(2.0));
    CHECK(fit.intercept == doctest::Approx(1.0));
    CHECK(fit.slope_stderr == doctest::Approx(0.0));
    CHECK(isotonic_fit(std::vector<double>{1, 3, 2, 4}) == std::vector<double>{1, 2.5, 2.5, 4});
    CHECK(count_inversions(std::vector<double>{1, 3, 2, 4, 0}) == 2);
}

TEST_CASE("block assignment of the base setup")
{
    const auto cfg = paper_base();
    Rng rng(Seed(1));
    const auto g = sample_assignment(cfg, rng);
    CHECK(g.num_edges() == 2500);
    for (AgentId a = 0; a < 50; ++a) {
        CHECK(g.agent_degree(a) == 50);
        for (AgentId b = 0; b < 50; ++b) {
            if (a == b) continue;
            CHECK(g.shared_count(a, b) == (a / 5 == b / 5 ? 50u : 0u));
        }
    }
    for (TaskId t = 0; t < 500; ++t) CHECK(g.task_degree(t) == 5);
}

TEST_CASE("degenerate single edge graph")
{
    IecConfig c = paper_base();
    c.num_agents = c.num_tasks = c.tasks_per_agent = c.agents_per_task = 1;
    Rng rng(Seed(1));
    const auto g = sample_assignment(c, rng);
    CHECK(g.num_edges() == 1);
    CHECK(g.find_edge(0, 0) == 0);
}

TEST_CASE("random regular degrees are exact")
{
    IecConfig c = paper_base();
    c.num_agents = c.num_tasks = 4;
    c.tasks_per_agent = c.agents_per_task = 2;
    c.assignment = AssignmentMode::random_regular;
    for (std::uint64_t s = 0; s < 1000; ++s) {
        Rng rng{Seed(s)};
        const auto g = sample_assignment(c, rng);
        REQUIRE(g.num_edges() == 8);
        for (AgentId a = 0; a < 4; ++a) REQUIRE(g.agent_degree(a) == 2);
        for (TaskId t = 0; t < 4; ++t) REQUIRE(g.task_degree(t) == 2);
    }
    auto big = paper_base();
    big.assignment = AssignmentMode::random_regular;
    for (std::uint64_t s = 0; s < 100; ++s) {
        Rng rng{Seed(s)};
        const auto g = sample_assignment(big, rng);
        for (AgentId a = 0; a < 50; ++a) REQUIRE(g.agent_degree(a) == 50);
        for (TaskId t = 0; t < 500; ++t) REQUIRE(g.task_degree(t) == 5);
    }
}

TEST_CASE("inconsistent counts are rejected")
{
    auto c = paper_base();
    c.num_tasks = 499;
    Rng rng(Seed(1));
    CHECK_THROWS_AS(sample_assignment(c, rng), ConfigError);
    CHECK_THROWS_AS(AssignmentGraph::from_edges(2, 2, {{0, 0}, {0, 0}}), ConfigError);
    CHECK_THROWS_AS(AssignmentGraph::from_edges(2, 2, {{0, 5}}), ConfigError);
}

TEST_CASE("effort confusion endpoints and midpoint")
{
    const auto cfg = paper_base();
    CHECK(effort_confusion(cfg, 1.0) == cfg.gamma_work);
    CHECK(effort_confusion(cfg, 0.0) == cfg.gamma_shirk);
    auto raw = cfg;
    raw.gamma_work = Matrix{{0.771, 0.122, 0.084, 0.024},
                            {0.091, 0.735, 0.130, 0.044},
                            {0.033, 0.062, 0.866, 0.039},
                            {0.068, 0.164, 0.099, 0.669}};
    const auto half = effort_confusion(raw, 0.5);
    const double expected[] = {0.5105, 0.186, 0.167, 0.137};
    for (int k = 0; k < 4; ++k) CHECK(half(0, k) == doctest::Approx(expected[k]).epsilon(1e-12));
    CHECK_THROWS_AS(effort_confusion(cfg, 1.5), DomainError);
    CHECK_THROWS_AS(effort_confusion(cfg, -0.1), DomainError);
    CHECK(is_row_stochastic(cfg.gamma_work));
}

TEST_CASE("cost and its derivative")
{
    auto cfg = paper_base();
    CHECK(cost(cfg, 0.0) == 0.0);
    CHECK(cost(cfg, 0.6) == doctest::Approx(0.36));
    CHECK(cost_derivative(cfg, 0.6) == doctest::Approx(1.2));
    const double h = 1e-5;
    CHECK((cost(cfg, 0.6 + h) - cost(cfg, 0.6 - h)) / (2 * h) == doctest::Approx(cost_derivative(cfg, 0.6)));
}

namespace {

IecConfig single_group(std::size_t tasks)
{
    IecConfig c = paper_base();
    c.num_agents = 5;
    c.num_tasks = tasks;
    c.tasks_per_agent = tasks;
    c.agents_per_task = 5;
    return c;
}

}  // namespace

TEST_CASE("noiseless channel and degenerate prior")
{
    auto c = single_group(20);
    c.gamma_work = Matrix::identity(4);
    Rng g(Seed(1));
    auto graph = std::make_shared<const AssignmentGraph>(sample_assignment(c, g));
    Rng rng(Seed(2));
    const auto inst = sample_instance(c, EffortProfile::symmetric(5, 1.0), graph, rng);
    for (EdgeId e = 0; e < inst.g().num_edges(); ++e) CHECK(inst.report(e) == inst.truth_of_edge(e));
    for (double q : quality_vector(inst).values) CHECK(q == 1.0);

    c.prior = {1, 0, 0, 0};
    Rng rng2(Seed(3));
    const auto inst2 = sample_instance(c, EffortProfile::symmetric(5, 0.3), graph, rng2);
    for (Label t : inst2.ground_truths) CHECK(t == 0);
}

TEST_CASE("quality is the mean accuracy")
{
    std::vector<Edge> edges;
    for (TaskId t = 0; t < 50; ++t) edges.push_back({0, t});
    auto graph = std::make_shared<const AssignmentGraph>(AssignmentGraph::from_edges(1, 50, edges));
    Instance inst{graph, std::vector<Label>(50, 1), std::vector<Label>(50, 0), 4};
    for (int e = 0; e < 30; ++e) inst.reports[e] = 1;
    CHECK(quality_vector(inst).values.at(0) == doctest::Approx(0.6));

    auto lonely = std::make_shared<const AssignmentGraph>(AssignmentGraph::from_edges(2, 1, {{0, 0}}));
    Instance bad{lonely, {0}, {0}, 4};
    CHECK_THROWS_AS(quality_vector(bad), Error);
}

TEST_CASE("distributional sanity of the generator")
{
    auto c = single_group(100000);
    c.agents_per_task = 1;
    c.num_agents = 1;
    Rng g(Seed(1));
    auto graph = std::make_shared<const AssignmentGraph>(sample_assignment(c, g));
    Rng rng(Seed(5));
    const double e = 0.7;
    const auto inst = sample_instance(c, EffortProfile::symmetric(1, e), graph, rng);
    std::vector<double> truth(4), report(4);
    for (Label t : inst.ground_truths) truth[t] += 1.0 / 100000;
    for (Label r : inst.reports) report[r] += 1.0 / 100000;
    const auto mix = effort_confusion(c, e);
    double tv_truth = 0.0, tv_report = 0.0;
    for (int k = 0; k < 4; ++k) {
        CHECK(std::abs(truth[k] - c.prior[k]) < 0.01);
        double expected = 0.0;
        for (int gt = 0; gt < 4; ++gt) expected += c.prior[gt] * mix(gt, k);
        tv_truth += 0.5 * std::abs(truth[k] - c.prior[k]);
        tv_report += 0.5 * std::abs(report[k] - expected);
    }
    CHECK(tv_truth < 0.01);
    CHECK(tv_report < 0.01);
}

TEST_CASE("mean quality is linear in effort with the expected slope")
{
    auto c = single_group(20000);
    c.num_agents = 1;
    c.agents_per_task = 1;
    Rng g(Seed(1));
    auto graph = std::make_shared<const AssignmentGraph>(sample_assignment(c, g));
    std::vector<double> es, qs;
    for (double e = 0.0; e <= 1.0001; e += 0.1) {
        Rng rng(Seed(11));
        const auto inst = sample_instance(c, EffortProfile::symmetric(1, e), graph, rng);
        es.push_back(e);
        qs.push_back(quality_vector(inst).values[0]);
    }
    double slope = 0.0;
    for (int k = 0; k < 4; ++k) slope += c.prior[k] * (c.gamma_work(k, k) - 0.25);
    CHECK(linear_fit(es, qs).slope == doctest::Approx(slope).epsilon(0.05));
}

TEST_CASE("instance sampling is deterministic")
{
    const ReplicateSampler a(paper_base(), Seed(77)), b(paper_base(), Seed(77));
    const auto p = EffortProfile::symmetric(50, 0.6);
    CHECK(a.instance(3, p) == b.instance(3, p));
    CHECK_FALSE(a.instance(3, p) == a.instance(4, p));
    // Equal seeds share ground truths across effort profiles.
    CHECK(a.instance(3, p).ground_truths == a.instance(3, EffortProfile::symmetric(50, 0.2)).ground_truths);
}
