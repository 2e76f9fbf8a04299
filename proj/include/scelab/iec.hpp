#pragma once

// Information elicitation context: agents, tasks, the label model, and the
// generator for realized application instances (generalized Dawid-Skene).

#include "scelab/matrix.hpp"
#include "scelab/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace scelab {

using AgentId = std::uint32_t;
using TaskId = std::uint32_t;
using EdgeId = std::uint32_t;
/// Index into the label space. Signals and ground truths share one space.
using Label = std::uint16_t;

inline constexpr std::uint32_t kNone = 0xffffffffu;

enum class AssignmentMode { block, random_regular };

std::string to_string(AssignmentMode mode);
AssignmentMode parse_assignment_mode(const std::string& text);

struct IecConfig {
    std::size_t num_agents = 0;
    std::size_t num_tasks = 0;
    std::size_t tasks_per_agent = 0;
    std::size_t agents_per_task = 0;
    std::vector<double> prior;  // over ground-truth labels
    Matrix gamma_work;          // row = ground truth, column = signal
    Matrix gamma_shirk;
    double cost_coefficient = 1.0;  // c(e) = a * e^2
    AssignmentMode assignment = AssignmentMode::block;

    std::size_t num_labels() const noexcept { return prior.size(); }

    /// Throws ConfigError naming the first violated constraint.
    void validate() const;
};

/// Label prior learned from a crowdsourcing dataset (four categories).
std::vector<double> paper_prior();
/// Confusion matrix of a fully-working agent, same dataset.
Matrix paper_gamma_work();

/// The 50-agent setup with 50*k tasks, 5*k tasks per agent and 5 agents per
/// task. k = 10 gives the 500-task base configuration.
IecConfig paper_base(std::size_t k = 10);

struct EffortProfile {
    std::vector<double> efforts;

    static EffortProfile symmetric(std::size_t num_agents, double effort);
    /// Symmetric at `effort` except `agent`, who exerts `deviated`.
    static EffortProfile deviation(std::size_t num_agents, double effort, AgentId agent, double deviated);

    void validate(std::size_t num_agents) const;
};

struct Edge {
    AgentId agent;
    TaskId task;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Bipartite agent-task graph stored agent-major: the edges of agent `a`
/// are the contiguous range [edge_begin(a), edge_end(a)) sorted by task.
class AssignmentGraph {
public:
    /// Builds the graph from an arbitrary edge list. Throws ConfigError on
    /// duplicate or out-of-range edges. Degree regularity is not required.
    static AssignmentGraph from_edges(std::size_t num_agents, std::size_t num_tasks, std::vector<Edge> edges);

    std::size_t num_agents() const noexcept { return agent_offsets_.size() - 1; }
    std::size_t num_tasks() const noexcept { return task_offsets_.size() - 1; }
    std::size_t num_edges() const noexcept { return edges_.size(); }

    std::span<const Edge> edges() const noexcept { return edges_; }
    const Edge& edge(EdgeId e) const { return edges_[e]; }

    EdgeId edge_begin(AgentId a) const { return agent_offsets_[a]; }
    EdgeId edge_end(AgentId a) const { return agent_offsets_[a + 1]; }
    std::size_t agent_degree(AgentId a) const { return edge_end(a) - edge_begin(a); }

    /// Edge ids incident to task `t`, ordered by agent.
    std::span<const EdgeId> task_edges(TaskId t) const
    {
        return {task_edge_ids_.data() + task_offsets_[t], task_offsets_[t + 1] - task_offsets_[t]};
    }
    std::size_t task_degree(TaskId t) const { return task_offsets_[t + 1] - task_offsets_[t]; }

    /// Edge id of (a, t), or kNone.
    EdgeId find_edge(AgentId a, TaskId t) const;

    /// Pairs of edge ids (edge of a, edge of b) over the tasks both share, in task order.
    std::vector<std::pair<EdgeId, EdgeId>> shared_edges(AgentId a, AgentId b) const;
    std::size_t shared_count(AgentId a, AgentId b) const;

    friend bool operator==(const AssignmentGraph&, const AssignmentGraph&) = default;

private:
    std::vector<Edge> edges_;
    std::vector<EdgeId> agent_offsets_{0};
    std::vector<std::uint32_t> task_offsets_{0};
    std::vector<EdgeId> task_edge_ids_;
};

/// Samples the assignment graph. Block mode is deterministic and ignores `rng`.
AssignmentGraph sample_assignment(const IecConfig& config, Rng& rng);

/// Confusion matrix of an agent exerting `effort`:
/// effort * gamma_work + (1 - effort) * gamma_shirk.
Matrix effort_confusion(const IecConfig& config, double effort);

/// One realized application: the graph, ground truths, and one report per edge.
struct Instance {
    std::shared_ptr<const AssignmentGraph> graph;
    std::vector<Label> ground_truths;  // per task
    std::vector<Label> reports;        // per edge
    std::size_t num_labels = 0;

    const AssignmentGraph& g() const { return *graph; }
    std::size_t num_agents() const { return graph->num_agents(); }
    Label report(EdgeId e) const { return reports[e]; }
    Label truth_of_edge(EdgeId e) const { return ground_truths[graph->edge(e).task]; }
    /// Checks the structural invariants. Throws ConfigError.
    void validate() const;

    friend bool operator==(const Instance& a, const Instance& b)
    {
        return *a.graph == *b.graph && a.ground_truths == b.ground_truths && a.reports == b.reports &&
               a.num_labels == b.num_labels;
    }
};

/// Draws ground truths i.i.d. from the prior, then each report from the
/// agent's effort-mixed confusion row. Draw order is fixed (one uniform per
/// task, then two per edge in edge order) and does not depend on the effort
/// profile, so two profiles sampled from equal seeds share every draw.
Instance sample_instance(const IecConfig& config, const EffortProfile& profile,
                         std::shared_ptr<const AssignmentGraph> graph, Rng& rng);

struct QualityVector {
    std::vector<double> values;
};

/// Mean accuracy of each agent's reports.
QualityVector quality_vector(const Instance& instance);

double cost(const IecConfig& config, double effort);
double cost_derivative(const IecConfig& config, double effort);

/// Inverse-CDF draw from a probability row using `u` in [0,1).
Label sample_categorical(std::span<const double> probabilities, double u);

}  // namespace scelab
