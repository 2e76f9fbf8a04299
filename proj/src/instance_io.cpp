#include "scelab/instance_io.hpp"

#include "scelab/error.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <string>

namespace scelab {

void write_instance_csv(std::ostream& out, const Instance& instance)
{
    const auto& g = instance.g();
    out << "agent,task,report,ground_truth\n";
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
        const Edge& edge = g.edge(e);
        out << edge.agent << ',' << edge.task << ',' << instance.report(e) << ',' << instance.truth_of_edge(e)
            << '\n';
    }
}

namespace {

std::uint64_t parse_field(std::string_view field, std::size_t line, const char* name)
{
    std::uint64_t v = 0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, v);
    if (ec != std::errc{} || ptr != end || field.empty())
        throw ParseError(std::string("bad ") + name + " field '" + std::string(field) + "'", line);
    return v;
}

}  // namespace

Instance read_instance_csv(std::istream& in, std::size_t num_labels, std::size_t num_agents, std::size_t num_tasks)
{
    struct Row {
        Edge edge;
        Label report, truth;
        std::size_t line;
    };
    std::vector<Row> rows;
    std::string text;
    std::size_t line = 0;
    if (!std::getline(in, text)) throw ParseError("empty input", 1);
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text != "agent,task,report,ground_truth") throw ParseError("unexpected header '" + text + "'", line);

    std::size_t max_agent = 0, max_task = 0, max_label = 0;
    while (std::getline(in, text)) {
        ++line;
        if (!text.empty() && text.back() == '\r') text.pop_back();
        if (text.empty()) continue;
        std::string_view rest = text;
        std::string_view fields[4];
        for (int i = 0; i < 4; ++i) {
            const auto comma = rest.find(',');
            if ((comma == std::string_view::npos) != (i == 3))
                throw ParseError("expected 4 comma-separated fields", line);
            fields[i] = rest.substr(0, comma);
            if (comma != std::string_view::npos) rest.remove_prefix(comma + 1);
        }
        Row r{};
        const auto agent = parse_field(fields[0], line, "agent");
        const auto task = parse_field(fields[1], line, "task");
        const auto report = parse_field(fields[2], line, "report");
        const auto truth = parse_field(fields[3], line, "ground_truth");
        if (agent >= kNone || task >= kNone) throw ParseError("id out of range", line);
        if (report > 0xfffe || truth > 0xfffe) throw ParseError("label out of range", line);
        r.edge = {static_cast<AgentId>(agent), static_cast<TaskId>(task)};
        r.report = static_cast<Label>(report);
        r.truth = static_cast<Label>(truth);
        r.line = line;
        max_agent = std::max<std::size_t>(max_agent, agent);
        max_task = std::max<std::size_t>(max_task, task);
        max_label = std::max<std::size_t>(max_label, std::max(report, truth));
        rows.push_back(r);
    }
    if (rows.empty()) throw ParseError("no data rows", line);

    if (num_agents == 0) num_agents = max_agent + 1;
    if (num_tasks == 0) num_tasks = max_task + 1;
    if (num_labels == 0) num_labels = max_label + 1;
    for (const auto& r : rows) {
        if (r.edge.agent >= num_agents || r.edge.task >= num_tasks) throw ParseError("id out of range", r.line);
        if (r.report >= num_labels || r.truth >= num_labels) throw ParseError("label out of range", r.line);
    }

    std::vector<Edge> edges;
    edges.reserve(rows.size());
    for (const auto& r : rows) edges.push_back(r.edge);
    std::shared_ptr<const AssignmentGraph> graph;
    try {
        graph = std::make_shared<const AssignmentGraph>(AssignmentGraph::from_edges(num_agents, num_tasks, edges));
    } catch (const ConfigError& e) {
        throw ParseError(e.what(), line);
    }

    Instance inst;
    inst.graph = graph;
    inst.num_labels = num_labels;
    inst.reports.assign(graph->num_edges(), 0);
    std::vector<std::size_t> truth_line(num_tasks, 0);
    inst.ground_truths.assign(num_tasks, 0);
    for (const auto& r : rows) {
        const EdgeId e = graph->find_edge(r.edge.agent, r.edge.task);
        inst.reports[e] = r.report;
        if (truth_line[r.edge.task] != 0 && inst.ground_truths[r.edge.task] != r.truth)
            throw ParseError("ground truth disagrees with line " + std::to_string(truth_line[r.edge.task]), r.line);
        inst.ground_truths[r.edge.task] = r.truth;
        truth_line[r.edge.task] = r.line;
    }
    return inst;
}

}  // namespace scelab
