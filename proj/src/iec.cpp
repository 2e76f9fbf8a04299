#include "scelab/iec.hpp"

#include "scelab/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace scelab {

std::string to_string(AssignmentMode mode)
{
    return mode == AssignmentMode::block ? "block" : "random_regular";
}

AssignmentMode parse_assignment_mode(const std::string& text)
{
    if (text == "block") return AssignmentMode::block;
    if (text == "random_regular" || text == "random-regular") return AssignmentMode::random_regular;
    throw ConfigError("unknown assignment mode '" + text + "'");
}

void IecConfig::validate() const
{
    if (num_agents == 0 || num_tasks == 0 || tasks_per_agent == 0 || agents_per_task == 0)
        throw ConfigError("agent, task and degree counts must be positive");
    if (num_agents * tasks_per_agent != num_tasks * agents_per_task)
        throw ConfigError("edge counts disagree: num_agents*tasks_per_agent=" +
                          std::to_string(num_agents * tasks_per_agent) +
                          " but num_tasks*agents_per_task=" + std::to_string(num_tasks * agents_per_task));
    if (tasks_per_agent > num_tasks) throw ConfigError("tasks_per_agent exceeds num_tasks");
    if (agents_per_task > num_agents) throw ConfigError("agents_per_task exceeds num_agents");
    if (prior.empty()) throw ConfigError("prior is empty");
    double total = 0.0;
    for (double p : prior) {
        if (!(p >= 0.0)) throw ConfigError("prior has a negative entry");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) throw ConfigError("prior does not sum to 1");
    const std::size_t k = prior.size();
    if (gamma_work.rows() != k || gamma_work.cols() != k)
        throw ConfigError("gamma_work must be square with side equal to the prior length");
    if (gamma_shirk.rows() != k || gamma_shirk.cols() != k)
        throw ConfigError("gamma_shirk must be square with side equal to the prior length");
    if (!is_row_stochastic(gamma_work)) throw ConfigError("gamma_work is not row-stochastic");
    if (!is_row_stochastic(gamma_shirk)) throw ConfigError("gamma_shirk is not row-stochastic");
    if (!(cost_coefficient >= 0.0)) throw ConfigError("cost_coefficient must be nonnegative");
    if (k > 0xffff) throw ConfigError("too many labels");
}

std::vector<double> paper_prior()
{
    return {0.196, 0.241, 0.247, 0.316};
}

Matrix paper_gamma_work()
{
    // Rows as published; the first row sums to 1.001 and is renormalized.
    Matrix m{{0.771, 0.122, 0.084, 0.024},
             {0.091, 0.735, 0.130, 0.044},
             {0.033, 0.062, 0.866, 0.039},
             {0.068, 0.164, 0.099, 0.669}};
    for (std::size_t r = 0; r < m.rows(); ++r) {
        double total = 0.0;
        for (double v : m.row(r)) total += v;
        for (double& v : m.row(r)) v /= total;
    }
    return m;
}

IecConfig paper_base(std::size_t k)
{
    IecConfig c;
    c.num_agents = 50;
    c.num_tasks = 50 * k;
    c.tasks_per_agent = 5 * k;
    c.agents_per_task = 5;
    c.prior = paper_prior();
    c.gamma_work = paper_gamma_work();
    c.gamma_shirk = Matrix::uniform_rows(4);
    c.cost_coefficient = 1.0;
    c.assignment = AssignmentMode::block;
    return c;
}

EffortProfile EffortProfile::symmetric(std::size_t num_agents, double effort)
{
    return EffortProfile{std::vector<double>(num_agents, effort)};
}

EffortProfile EffortProfile::deviation(std::size_t num_agents, double effort, AgentId agent, double deviated)
{
    auto p = symmetric(num_agents, effort);
    p.efforts.at(agent) = deviated;
    return p;
}

void EffortProfile::validate(std::size_t num_agents) const
{
    if (efforts.size() != num_agents)
        throw ConfigError("effort profile has " + std::to_string(efforts.size()) + " entries, expected " +
                          std::to_string(num_agents));
    for (double e : efforts)
        if (!(e >= 0.0 && e <= 1.0)) throw DomainError("effort outside [0,1]");
}

// ---------------------------------------------------------------------------
// AssignmentGraph

AssignmentGraph AssignmentGraph::from_edges(std::size_t num_agents, std::size_t num_tasks, std::vector<Edge> edges)
{
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
        throw ConfigError("duplicate edge in assignment graph");
    AssignmentGraph g;
    g.agent_offsets_.assign(num_agents + 1, 0);
    g.task_offsets_.assign(num_tasks + 1, 0);
    for (const auto& e : edges) {
        if (e.agent >= num_agents || e.task >= num_tasks) throw ConfigError("edge endpoint out of range");
        ++g.agent_offsets_[e.agent + 1];
        ++g.task_offsets_[e.task + 1];
    }
    std::partial_sum(g.agent_offsets_.begin(), g.agent_offsets_.end(), g.agent_offsets_.begin());
    std::partial_sum(g.task_offsets_.begin(), g.task_offsets_.end(), g.task_offsets_.begin());
    g.task_edge_ids_.resize(edges.size());
    std::vector<std::uint32_t> fill(g.task_offsets_.begin(), g.task_offsets_.end() - 1);
    for (EdgeId id = 0; id < edges.size(); ++id) g.task_edge_ids_[fill[edges[id].task]++] = id;
    g.edges_ = std::move(edges);
    return g;
}

EdgeId AssignmentGraph::find_edge(AgentId a, TaskId t) const
{
    auto first = edges_.begin() + edge_begin(a);
    auto last = edges_.begin() + edge_end(a);
    auto it = std::lower_bound(first, last, Edge{a, t});
    if (it == last || it->task != t) return kNone;
    return static_cast<EdgeId>(it - edges_.begin());
}

std::vector<std::pair<EdgeId, EdgeId>> AssignmentGraph::shared_edges(AgentId a, AgentId b) const
{
    std::vector<std::pair<EdgeId, EdgeId>> out;
    EdgeId i = edge_begin(a), ie = edge_end(a);
    EdgeId j = edge_begin(b), je = edge_end(b);
    while (i < ie && j < je) {
        if (edges_[i].task < edges_[j].task) {
            ++i;
        } else if (edges_[j].task < edges_[i].task) {
            ++j;
        } else {
            out.emplace_back(i++, j++);
        }
    }
    return out;
}

std::size_t AssignmentGraph::shared_count(AgentId a, AgentId b) const
{
    std::size_t n = 0;
    EdgeId i = edge_begin(a), ie = edge_end(a);
    EdgeId j = edge_begin(b), je = edge_end(b);
    while (i < ie && j < je) {
        if (edges_[i].task < edges_[j].task) {
            ++i;
        } else if (edges_[j].task < edges_[i].task) {
            ++j;
        } else {
            ++n, ++i, ++j;
        }
    }
    return n;
}

namespace {

AssignmentGraph block_assignment(const IecConfig& c)
{
    if (c.num_agents % c.agents_per_task != 0)
        throw ConfigError("block assignment needs num_agents divisible by agents_per_task");
    const std::size_t groups = c.num_agents / c.agents_per_task;
    if (groups * c.tasks_per_agent != c.num_tasks)
        throw ConfigError("block assignment needs num_tasks = groups * tasks_per_agent");
    std::vector<Edge> edges;
    edges.reserve(c.num_agents * c.tasks_per_agent);
    for (std::size_t a = 0; a < c.num_agents; ++a) {
        const std::size_t group = a / c.agents_per_task;
        for (std::size_t k = 0; k < c.tasks_per_agent; ++k)
            edges.push_back({static_cast<AgentId>(a), static_cast<TaskId>(group * c.tasks_per_agent + k)});
    }
    return AssignmentGraph::from_edges(c.num_agents, c.num_tasks, std::move(edges));
}

// Configuration model: shuffle task stubs against agent stubs, then repair
// duplicate edges by swapping task stubs with random other positions.
AssignmentGraph random_regular_assignment(const IecConfig& c, Rng& rng)
{
    constexpr int kMaxRetries = 20;
    const std::size_t n_edges = c.num_agents * c.tasks_per_agent;
    std::vector<AgentId> agent_stub(n_edges);
    for (std::size_t p = 0; p < n_edges; ++p) agent_stub[p] = static_cast<AgentId>(p / c.tasks_per_agent);

    for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
        std::vector<TaskId> task_stub(n_edges);
        for (std::size_t p = 0; p < n_edges; ++p) task_stub[p] = static_cast<TaskId>(p / c.agents_per_task);
        rng.shuffle(task_stub.begin(), task_stub.end());

        auto key = [&](std::size_t p) {
            return static_cast<std::uint64_t>(agent_stub[p]) * c.num_tasks + task_stub[p];
        };
        std::unordered_map<std::uint64_t, int> multiplicity;
        multiplicity.reserve(n_edges * 2);
        for (std::size_t p = 0; p < n_edges; ++p) ++multiplicity[key(p)];

        std::vector<std::size_t> bad;
        {
            std::unordered_map<std::uint64_t, int> seen;
            for (std::size_t p = 0; p < n_edges; ++p)
                if (++seen[key(p)] > 1) bad.push_back(p);
        }

        bool ok = true;
        for (std::size_t p : bad) {
            if (multiplicity[key(p)] <= 1) continue;
            bool fixed = false;
            for (std::size_t tries = 0; tries < 100 * n_edges && !fixed; ++tries) {
                const std::size_t q = rng.below(n_edges);
                if (agent_stub[q] == agent_stub[p] || task_stub[q] == task_stub[p]) continue;
                const std::uint64_t new_p = static_cast<std::uint64_t>(agent_stub[p]) * c.num_tasks + task_stub[q];
                const std::uint64_t new_q = static_cast<std::uint64_t>(agent_stub[q]) * c.num_tasks + task_stub[p];
                if (multiplicity.count(new_p) && multiplicity[new_p] > 0) continue;
                if (multiplicity.count(new_q) && multiplicity[new_q] > 0) continue;
                --multiplicity[key(p)];
                --multiplicity[key(q)];
                std::swap(task_stub[p], task_stub[q]);
                ++multiplicity[key(p)];
                ++multiplicity[key(q)];
                fixed = true;
            }
            if (!fixed) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;

        std::vector<Edge> edges(n_edges);
        for (std::size_t p = 0; p < n_edges; ++p) edges[p] = {agent_stub[p], task_stub[p]};
        return AssignmentGraph::from_edges(c.num_agents, c.num_tasks, std::move(edges));
    }
    throw GenerationError("random_regular assignment could not remove duplicate edges", kMaxRetries);
}

}  // namespace

AssignmentGraph sample_assignment(const IecConfig& config, Rng& rng)
{
    config.validate();
    return config.assignment == AssignmentMode::block ? block_assignment(config)
                                                       : random_regular_assignment(config, rng);
}

Matrix effort_confusion(const IecConfig& config, double effort)
{
    if (!(effort >= 0.0 && effort <= 1.0)) throw DomainError("effort outside [0,1]");
    const std::size_t k = config.num_labels();
    Matrix m(k, k);
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t s = 0; s < k; ++s)
            m(r, s) = effort * config.gamma_work(r, s) + (1.0 - effort) * config.gamma_shirk(r, s);
    return m;
}

Label sample_categorical(std::span<const double> probabilities, double u)
{
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < probabilities.size(); ++i) {
        acc += probabilities[i];
        if (u < acc) return static_cast<Label>(i);
    }
    // Fall through to the last label with positive mass.
    for (std::size_t i = probabilities.size(); i-- > 0;)
        if (probabilities[i] > 0.0) return static_cast<Label>(i);
    return 0;
}

void Instance::validate() const
{
    if (!graph) throw ConfigError("instance has no graph");
    if (ground_truths.size() != graph->num_tasks()) throw ConfigError("one ground truth per task required");
    if (reports.size() != graph->num_edges()) throw ConfigError("one report per edge required");
    for (Label g : ground_truths)
        if (g >= num_labels) throw ConfigError("ground truth out of range");
    for (Label r : reports)
        if (r >= num_labels) throw ConfigError("report out of range");
}

Instance sample_instance(const IecConfig& config, const EffortProfile& profile,
                         std::shared_ptr<const AssignmentGraph> graph, Rng& rng)
{
    profile.validate(config.num_agents);
    if (!graph || graph->num_agents() != config.num_agents || graph->num_tasks() != config.num_tasks)
        throw ConfigError("graph does not match the configuration");

    Instance inst;
    inst.num_labels = config.num_labels();
    inst.ground_truths.resize(config.num_tasks);
    for (auto& g : inst.ground_truths) g = sample_categorical(config.prior, rng.uniform());

    // Mixture sampling: with probability e_i use the work row, otherwise the
    // shirk row. Equivalent in law to sampling the mixed confusion row.
    const std::size_t n_edges = graph->num_edges();
    inst.reports.resize(n_edges);
    for (EdgeId e = 0; e < n_edges; ++e) {
        const Edge& edge = graph->edge(e);
        const Label truth = inst.ground_truths[edge.task];
        const double u_mix = rng.uniform();
        const double u_sig = rng.uniform();
        const Matrix& channel = u_mix < profile.efforts[edge.agent] ? config.gamma_work : config.gamma_shirk;
        inst.reports[e] = sample_categorical(channel.row(truth), u_sig);
    }
    inst.graph = std::move(graph);
    return inst;
}

QualityVector quality_vector(const Instance& instance)
{
    const auto& g = instance.g();
    QualityVector q;
    q.values.resize(g.num_agents());
    for (AgentId a = 0; a < g.num_agents(); ++a) {
        const std::size_t degree = g.agent_degree(a);
        if (degree == 0) throw DomainError("quality undefined for agent " + std::to_string(a) + " with zero tasks");
        std::size_t correct = 0;
        for (EdgeId e = g.edge_begin(a); e < g.edge_end(a); ++e)
            correct += instance.reports[e] == instance.truth_of_edge(e);
        q.values[a] = static_cast<double>(correct) / static_cast<double>(degree);
    }
    return q;
}

double cost(const IecConfig& config, double effort)
{
    if (!(effort >= 0.0 && effort <= 1.0)) throw DomainError("effort outside [0,1]");
    return config.cost_coefficient * effort * effort;
}

double cost_derivative(const IecConfig& config, double effort)
{
    if (!(effort >= 0.0 && effort <= 1.0)) throw DomainError("effort outside [0,1]");
    return 2.0 * config.cost_coefficient * effort;
}

}  // namespace scelab
