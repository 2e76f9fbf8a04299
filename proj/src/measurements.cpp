#include "scelab/measurements.hpp"

#include "scelab/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

namespace scelab {

std::string to_string(MechanismKind kind)
{
    switch (kind) {
    case MechanismKind::spot_check: return "sc";
    case MechanismKind::output_agreement: return "oa";
    case MechanismKind::peer_truth_serum: return "pts";
    case MechanismKind::correlated_agreement: return "ca";
    case MechanismKind::f_mutual_information: return "fmi";
    case MechanismKind::determinant_mi: return "dmi";
    }
    return "?";
}

std::string to_string(Divergence d)
{
    switch (d) {
    case Divergence::kl: return "kl";
    case Divergence::tvd: return "tvd";
    case Divergence::h2: return "h2";
    }
    return "?";
}

std::string to_string(EstimationMode m)
{
    return m == EstimationMode::pair_shared ? "pair_shared" : "pooled";
}

Divergence parse_divergence(std::string_view text)
{
    if (text == "kl") return Divergence::kl;
    if (text == "tvd") return Divergence::tvd;
    if (text == "h2" || text == "hellinger") return Divergence::h2;
    throw ConfigError("unknown divergence '" + std::string(text) + "'");
}

std::string to_string(PeerScope p)
{
    return p == PeerScope::all_peers ? "all" : "single";
}

PeerScope parse_peer_scope(std::string_view text)
{
    if (text == "all" || text == "all_peers") return PeerScope::all_peers;
    if (text == "single" || text == "random_peer") return PeerScope::random_peer;
    throw ConfigError("unknown peer scope '" + std::string(text) + "'");
}

EstimationMode parse_estimation_mode(std::string_view text)
{
    if (text == "pair_shared" || text == "pair-shared") return EstimationMode::pair_shared;
    if (text == "pooled") return EstimationMode::pooled;
    throw ConfigError("unknown estimation mode '" + std::string(text) + "'");
}

Measurement Measurement::spot_check(double check_ratio)
{
    Measurement m;
    m.kind = MechanismKind::spot_check;
    m.check_ratio = check_ratio;
    return m;
}

Measurement Measurement::output_agreement()
{
    Measurement m;
    m.kind = MechanismKind::output_agreement;
    return m;
}

Measurement Measurement::peer_truth_serum()
{
    Measurement m;
    m.kind = MechanismKind::peer_truth_serum;
    return m;
}

Measurement Measurement::correlated_agreement(EstimationMode mode)
{
    Measurement m;
    m.kind = MechanismKind::correlated_agreement;
    m.estimation = mode;
    return m;
}

Measurement Measurement::f_mutual_information(Divergence d, EstimationMode mode)
{
    Measurement m;
    m.kind = MechanismKind::f_mutual_information;
    m.divergence = d;
    m.estimation = mode;
    return m;
}

Measurement Measurement::determinant_mi()
{
    Measurement m;
    m.kind = MechanismKind::determinant_mi;
    return m;
}

namespace {

std::string format_ratio(double x)
{
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string Measurement::id() const
{
    std::string out = to_string(kind);
    if (kind == MechanismKind::spot_check) out += ":" + format_ratio(check_ratio);
    if (kind == MechanismKind::f_mutual_information) out += ":" + to_string(divergence);
    if ((kind == MechanismKind::correlated_agreement || kind == MechanismKind::f_mutual_information) &&
        estimation == EstimationMode::pooled)
        out += "+pooled";
    if (kind != MechanismKind::spot_check && peers == PeerScope::random_peer) out += "+single";
    return out;
}

Measurement Measurement::parse(std::string_view text)
{
    auto mode = EstimationMode::pair_shared;
    auto scope = PeerScope::all_peers;
    const std::string full(text);
    if (auto plus = text.find('+'); plus != std::string_view::npos) {
        std::string_view flags = text.substr(plus + 1);
        text = text.substr(0, plus);
        while (!flags.empty()) {
            const auto next = flags.find('+');
            const auto flag = flags.substr(0, next);
            if (flag == "single")
                scope = PeerScope::random_peer;
            else
                mode = parse_estimation_mode(flag);
            flags = next == std::string_view::npos ? std::string_view{} : flags.substr(next + 1);
        }
    }
    std::string_view head = text, arg;
    if (auto colon = text.find(':'); colon != std::string_view::npos) {
        head = text.substr(0, colon);
        arg = text.substr(colon + 1);
    }
    Measurement m;
    if (head == "sc") {
        double x = 100.0;
        if (!arg.empty()) {
            auto res = std::from_chars(arg.data(), arg.data() + arg.size(), x);
            if (res.ec != std::errc{} || res.ptr != arg.data() + arg.size())
                throw ConfigError("bad spot-check ratio '" + std::string(arg) + "'");
        }
        m = spot_check(x);
    } else if (head == "oa") {
        m = output_agreement();
    } else if (head == "pts") {
        m = peer_truth_serum();
    } else if (head == "ca") {
        m = correlated_agreement(mode);
    } else if (head == "fmi") {
        m = f_mutual_information(arg.empty() ? Divergence::kl : parse_divergence(arg), mode);
    } else if (head == "dmi") {
        m = determinant_mi();
    } else {
        throw ConfigError("unknown mechanism '" + full + "'");
    }
    m.peers = scope;
    m.validate();
    return m;
}

void Measurement::validate() const
{
    if (kind == MechanismKind::spot_check && !(check_ratio >= 0.0 && check_ratio <= 100.0))
        throw ConfigError("spot-check ratio must be in [0,100]");
    if (min_shared == 0) throw ConfigError("min_shared must be positive");
}

// ---------------------------------------------------------------------------
// Pairing

Pairing pair_agents(const AssignmentGraph& graph, PairingMode mode, std::size_t min_shared, Rng& rng,
                    PeerScope scope)
{
    Pairing p;
    p.scope = scope;
    p.mode = mode;
    const std::size_t n_agents = graph.num_agents();
    if (mode == PairingMode::per_task) {
        if (scope == PeerScope::random_peer) p.peer_edge.assign(graph.num_edges(), kNone);
        for (AgentId a = 0; a < n_agents; ++a) {
            bool any = false;
            for (EdgeId e = graph.edge_begin(a); e < graph.edge_end(a); ++e) {
                const auto others = graph.task_edges(graph.edge(e).task);
                if (others.size() < 2) continue;
                any = true;
                if (scope == PeerScope::all_peers) continue;
                const auto self = static_cast<std::size_t>(std::find(others.begin(), others.end(), e) - others.begin());
                auto k = rng.below(others.size() - 1);
                if (k >= self) ++k;
                p.peer_edge[e] = others[k];
            }
            if (!any) throw PairingError("no co-worker on any task", a);
        }
        return p;
    }

    p.peer_agents.resize(n_agents);
    std::vector<std::uint32_t> shared(n_agents);
    std::vector<AgentId> candidates;
    for (AgentId a = 0; a < n_agents; ++a) {
        std::fill(shared.begin(), shared.end(), 0);
        for (EdgeId e = graph.edge_begin(a); e < graph.edge_end(a); ++e)
            for (EdgeId f : graph.task_edges(graph.edge(e).task)) ++shared[graph.edge(f).agent];
        shared[a] = 0;
        candidates.clear();
        for (AgentId b = 0; b < n_agents; ++b)
            if (shared[b] >= min_shared) candidates.push_back(b);
        if (candidates.empty()) {
            const auto best = *std::max_element(shared.begin(), shared.end());
            if (best == 0) throw PairingError("no co-worker on any task", a);
            for (AgentId b = 0; b < n_agents; ++b)
                if (shared[b] == best) candidates.push_back(b);
        }
        if (scope == PeerScope::all_peers)
            p.peer_agents[a] = candidates;
        else
            p.peer_agents[a] = {candidates[rng.below(candidates.size())]};
    }
    return p;
}

// ---------------------------------------------------------------------------
// Joint-distribution estimators

JointCounts count_joint(std::span<const Label> first, std::span<const Label> second, std::size_t labels)
{
    if (first.size() != second.size()) throw EstimationError("paired sequences differ in length");
    if (first.empty()) throw EstimationError("joint distribution needs at least one paired observation");
    JointCounts c;
    c.labels = labels;
    c.n = static_cast<std::int64_t>(first.size());
    c.cell.assign(labels * labels, 0);
    c.row.assign(labels, 0);
    c.col.assign(labels, 0);
    for (std::size_t t = 0; t < first.size(); ++t) {
        if (first[t] >= labels || second[t] >= labels) throw EstimationError("label out of range");
        ++c.cell[first[t] * labels + second[t]];
        ++c.row[first[t]];
        ++c.col[second[t]];
    }
    return c;
}

Matrix estimate_delta(std::span<const Label> first, std::span<const Label> second, std::size_t labels)
{
    const auto c = count_joint(first, second, labels);
    const double n2 = static_cast<double>(c.n) * static_cast<double>(c.n);
    Matrix d(labels, labels);
    for (std::size_t r = 0; r < labels; ++r)
        for (std::size_t s = 0; s < labels; ++s) d(r, s) = static_cast<double>(c.delta_numerator(r, s)) / n2;
    return d;
}

double ca_pair_score(const JointCounts& c)
{
    std::int64_t positive = 0;
    for (std::size_t r = 0; r < c.labels; ++r)
        for (std::size_t s = 0; s < c.labels; ++s) positive += std::max<std::int64_t>(0, c.delta_numerator(r, s));
    return static_cast<double>(positive) / (static_cast<double>(c.n) * static_cast<double>(c.n));
}

double f_mutual_information(const JointCounts& c, Divergence d)
{
    const double n = static_cast<double>(c.n);
    if (d == Divergence::tvd) {
        // p * |q/p - 1| = |q - p| for p > 0, and the perspective limit gives q
        // for p = 0, so the sum is the total absolute Delta, kept in integers.
        std::int64_t total = 0;
        for (std::size_t r = 0; r < c.labels; ++r)
            for (std::size_t s = 0; s < c.labels; ++s) total += std::abs(c.delta_numerator(r, s));
        return static_cast<double>(total) / (n * n);
    }
    constexpr double kRatioFloor = 1e-12;
    double total = 0.0;
    for (std::size_t r = 0; r < c.labels; ++r) {
        for (std::size_t s = 0; s < c.labels; ++s) {
            const double p = static_cast<double>(c.at(r, s)) / n;
            const double q = static_cast<double>(c.row[r]) * static_cast<double>(c.col[s]) / (n * n);
            if (p == 0.0) {
                // 0 * f(q/0) = q * lim_{u->inf} f(u)/u: 0 for KL, 1 for H2.
                if (d == Divergence::h2) total += q;
                continue;
            }
            const double ratio = std::max(q / p, kRatioFloor);
            if (d == Divergence::kl) {
                total += -p * std::log(ratio);
            } else {
                const double root = std::sqrt(ratio) - 1.0;
                total += p * root * root;
            }
        }
    }
    // Empirical f-divergences are nonnegative; clear rounding residue.
    return std::max(0.0, total);
}

namespace {

// Exact integer determinant by fraction-free (Bareiss) elimination.
__int128 bareiss_determinant(std::vector<__int128> m, std::size_t k)
{
    int sign = 1;
    __int128 prev = 1;
    for (std::size_t p = 0; p + 1 < k; ++p) {
        if (m[p * k + p] == 0) {
            std::size_t swap_row = p + 1;
            while (swap_row < k && m[swap_row * k + p] == 0) ++swap_row;
            if (swap_row == k) return 0;
            for (std::size_t c = 0; c < k; ++c) std::swap(m[p * k + c], m[swap_row * k + c]);
            sign = -sign;
        }
        for (std::size_t i = p + 1; i < k; ++i) {
            for (std::size_t j = p + 1; j < k; ++j)
                m[i * k + j] = (m[i * k + j] * m[p * k + p] - m[i * k + p] * m[p * k + j]) / prev;
        }
        prev = m[p * k + p];
    }
    return sign * m[(k - 1) * k + (k - 1)];
}

long double lu_determinant(std::vector<long double> m, std::size_t k)
{
    long double det = 1.0L;
    for (std::size_t p = 0; p < k; ++p) {
        std::size_t pivot = p;
        for (std::size_t i = p + 1; i < k; ++i)
            if (std::fabs(m[i * k + p]) > std::fabs(m[pivot * k + p])) pivot = i;
        if (m[pivot * k + p] == 0.0L) return 0.0L;
        if (pivot != p) {
            for (std::size_t c = 0; c < k; ++c) std::swap(m[p * k + c], m[pivot * k + c]);
            det = -det;
        }
        det *= m[p * k + p];
        for (std::size_t i = p + 1; i < k; ++i) {
            const long double f = m[i * k + p] / m[p * k + p];
            for (std::size_t c = p; c < k; ++c) m[i * k + c] -= f * m[p * k + c];
        }
    }
    return det;
}

}  // namespace

double dmi_abs_determinant(const JointCounts& c)
{
    const std::size_t k = c.labels;
    const long double n = static_cast<long double>(c.n);
    const long double scale = std::pow(n, static_cast<long double>(k));
    // Bareiss intermediates are bounded by products of two minors (<= n^(2k)).
    if (2.0L * static_cast<long double>(k) * std::log10(std::max(n, 1.0L)) < 36.0L) {
        std::vector<__int128> m(c.cell.begin(), c.cell.end());
        __int128 det = bareiss_determinant(std::move(m), k);
        if (det < 0) det = -det;
        return static_cast<double>(static_cast<long double>(det) / scale);
    }
    std::vector<long double> m(c.cell.begin(), c.cell.end());
    for (auto& v : m) v /= n;
    return static_cast<double>(std::fabs(lu_determinant(std::move(m), k)));
}

// ---------------------------------------------------------------------------
// Mechanisms

ScoreVector spot_check(const Instance& instance, const Measurement& m, Rng& rng)
{
    m.validate();
    const auto& g = instance.g();
    const std::size_t n_tasks = g.num_tasks();
    const auto n_checked = static_cast<std::size_t>(
        std::floor(m.check_ratio * static_cast<double>(n_tasks) / 100.0 + 1e-9));

    std::vector<char> checked(n_tasks, 0);
    if (n_checked >= n_tasks) {
        std::fill(checked.begin(), checked.end(), 1);
    } else if (n_checked > 0) {
        std::vector<TaskId> order(n_tasks);
        std::iota(order.begin(), order.end(), TaskId{0});
        for (std::size_t i = 0; i < n_checked; ++i) {
            const auto j = i + rng.below(n_tasks - i);
            std::swap(order[i], order[j]);
            checked[order[i]] = 1;
        }
    }

    ScoreVector s;
    s.values.resize(g.num_agents());
    for (AgentId a = 0; a < g.num_agents(); ++a) {
        const std::size_t degree = g.agent_degree(a);
        if (degree == 0) throw DomainError("spot-check score undefined for agent with zero tasks");
        double total = 0.0;
        for (EdgeId e = g.edge_begin(a); e < g.edge_end(a); ++e) {
            if (!checked[g.edge(e).task]) {
                total += m.unchecked_score;
            } else if (m.task_score) {
                total += m.task_score(instance.reports[e], instance.truth_of_edge(e));
            } else {
                total += instance.reports[e] == instance.truth_of_edge(e) ? 1.0 : 0.0;
            }
        }
        s.values[a] = total / static_cast<double>(degree);
    }
    return s;
}

namespace {

void require_per_task(const Instance& instance, const Pairing& pairing)
{
    const bool ok = pairing.mode == PairingMode::per_task &&
                    (pairing.scope == PeerScope::all_peers || pairing.peer_edge.size() == instance.g().num_edges());
    if (!ok) throw PairingError("per-task pairing missing or sized for another graph", 0);
}

void require_pair_level(const Instance& instance, const Pairing& pairing)
{
    if (pairing.mode != PairingMode::pair_level || pairing.peer_agents.size() != instance.num_agents())
        throw PairingError("pair-level pairing missing or sized for another graph", 0);
}

// Calls fn(peer_edge, weight) for every per-task peer of edge e; weights
// average over the task's other agents.
template <class Fn>
void for_task_peers(const Instance& instance, const Pairing& pairing, EdgeId e, Fn&& fn)
{
    if (pairing.scope == PeerScope::random_peer) {
        if (pairing.peer_edge[e] != kNone) fn(pairing.peer_edge[e], 1.0);
        return;
    }
    const auto others = instance.g().task_edges(instance.g().edge(e).task);
    if (others.size() < 2) return;
    const double w = 1.0 / static_cast<double>(others.size() - 1);
    for (EdgeId f : others)
        if (f != e) fn(f, w);
}

JointCounts pair_counts(const Instance& instance, AgentId a, AgentId b, std::vector<Label>& buf1,
                        std::vector<Label>& buf2)
{
    const auto shared = instance.g().shared_edges(a, b);
    if (shared.empty()) throw EstimationError("agents " + std::to_string(a) + " and " + std::to_string(b) +
                                              " share no tasks");
    buf1.clear();
    buf2.clear();
    for (auto [ea, eb] : shared) {
        buf1.push_back(instance.reports[ea]);
        buf2.push_back(instance.reports[eb]);
    }
    return count_joint(buf1, buf2, instance.num_labels);
}

}  // namespace

ScoreVector oa_score(const Instance& instance, const Pairing& pairing)
{
    require_per_task(instance, pairing);
    const auto& g = instance.g();
    ScoreVector s;
    s.values.assign(g.num_agents(), 0.0);
    for (AgentId a = 0; a < g.num_agents(); ++a) {
        double total = 0.0;
        for (EdgeId e = g.edge_begin(a); e < g.edge_end(a); ++e)
            for_task_peers(instance, pairing, e, [&](EdgeId peer, double w) {
                if (instance.reports[e] == instance.reports[peer]) total += w;
            });
        s.values[a] = total;
    }
    return s;
}

ScoreVector pts_score(const Instance& instance, const Pairing& pairing)
{
    require_per_task(instance, pairing);
    const auto& g = instance.g();
    if (instance.reports.empty()) throw EstimationError("peer truth serum needs at least one report");
    std::vector<double> freq(instance.num_labels, 0.0);
    for (Label r : instance.reports) freq[r] += 1.0;
    for (double& f : freq) f /= static_cast<double>(instance.reports.size());

    ScoreVector s;
    s.values.assign(g.num_agents(), 0.0);
    for (AgentId a = 0; a < g.num_agents(); ++a) {
        double total = 0.0;
        for (EdgeId e = g.edge_begin(a); e < g.edge_end(a); ++e)
            for_task_peers(instance, pairing, e, [&](EdgeId peer, double w) {
                if (instance.reports[e] == instance.reports[peer]) total += w / freq[instance.reports[e]];
            });
        s.values[a] = total;
    }
    return s;
}

ScoreVector ca_score(const Instance& instance, const Pairing& pairing, EstimationMode mode)
{
    const auto& g = instance.g();
    ScoreVector s;
    s.values.assign(g.num_agents(), 0.0);
    if (mode == EstimationMode::pair_shared) {
        require_pair_level(instance, pairing);
        std::vector<Label> b1, b2;
        for (AgentId a = 0; a < g.num_agents(); ++a) {
            const auto& peers = pairing.peer_agents[a];
            double total = 0.0;
            for (AgentId b : peers) total += ca_pair_score(pair_counts(instance, a, b, b1, b2));
            s.values[a] = total / static_cast<double>(peers.size());
        }
        return s;
    }

    // Pooled: one Delta from every per-task report pair, then a sign score per task.
    require_per_task(instance, pairing);
    std::vector<Label> first, second;
    for (EdgeId e = 0; e < g.num_edges(); ++e)
        for_task_peers(instance, pairing, e, [&](EdgeId peer, double) {
            first.push_back(instance.reports[e]);
            second.push_back(instance.reports[peer]);
        });
    const auto counts = count_joint(first, second, instance.num_labels);
    for (AgentId a = 0; a < g.num_agents(); ++a) {
        double total = 0.0;
        for (EdgeId e = g.edge_begin(a); e < g.edge_end(a); ++e)
            for_task_peers(instance, pairing, e, [&](EdgeId peer, double w) {
                if (counts.delta_numerator(instance.reports[e], instance.reports[peer]) > 0) total += w;
            });
        s.values[a] = total / static_cast<double>(g.agent_degree(a));
    }
    return s;
}

ScoreVector fmi_score(const Instance& instance, const Pairing& pairing, Divergence d, EstimationMode mode,
                      std::size_t min_shared)
{
    const auto& g = instance.g();
    ScoreVector s;
    s.values.assign(g.num_agents(), 0.0);
    std::vector<Label> b1, b2;
    if (mode == EstimationMode::pair_shared) {
        require_pair_level(instance, pairing);
        for (AgentId a = 0; a < g.num_agents(); ++a) {
            const auto& peers = pairing.peer_agents[a];
            double total = 0.0;
            bool thin = false;
            for (AgentId b : peers) {
                const auto counts = pair_counts(instance, a, b, b1, b2);
                thin = thin || static_cast<std::size_t>(counts.n) < min_shared;
                total += f_mutual_information(counts, d);
            }
            if (thin) ++s.low_confidence;
            s.values[a] = total / static_cast<double>(peers.size());
        }
        return s;
    }

    // Pooled: the joint of the agent's reports against its per-task peers.
    require_per_task(instance, pairing);
    for (AgentId a = 0; a < g.num_agents(); ++a) {
        b1.clear();
        b2.clear();
        for (EdgeId e = g.edge_begin(a); e < g.edge_end(a); ++e)
            for_task_peers(instance, pairing, e, [&](EdgeId peer, double) {
                b1.push_back(instance.reports[e]);
                b2.push_back(instance.reports[peer]);
            });
        if (b1.empty()) throw EstimationError("agent " + std::to_string(a) + " has no peer reports");
        if (b1.size() < min_shared) ++s.low_confidence;
        s.values[a] = f_mutual_information(count_joint(b1, b2, instance.num_labels), d);
    }
    return s;
}

ScoreVector dmi_score(const Instance& instance, const Pairing& pairing, Rng& rng)
{
    require_pair_level(instance, pairing);
    const auto& g = instance.g();
    const std::size_t k = instance.num_labels;
    // One split seed per unordered pair, so (a, b) and (b, a) see the same halves.
    const Seed split_base{rng.next()};

    ScoreVector s;
    s.values.assign(g.num_agents(), 0.0);
    std::vector<Label> h1a, h1b, h2a, h2b;
    for (AgentId a = 0; a < g.num_agents(); ++a) {
        const auto& peers = pairing.peer_agents[a];
        double total = 0.0;
        bool thin = false;
        for (AgentId b : peers) {
            auto shared = g.shared_edges(a, b);
            if (shared.size() < 2)
                throw EstimationError("DMI needs at least 2 shared tasks for agents " + std::to_string(a) + " and " +
                                      std::to_string(b));
            thin = thin || shared.size() < 2 * k;
            if (b < a)
                for (auto& pr : shared) std::swap(pr.first, pr.second);
            Rng split(split_base.child(static_cast<std::uint64_t>(std::min(a, b)) * g.num_agents() + std::max(a, b)));
            split.shuffle(shared.begin(), shared.end());
            const std::size_t half = shared.size() / 2;
            h1a.clear(), h1b.clear(), h2a.clear(), h2b.clear();
            for (std::size_t t = 0; t < half; ++t) {
                h1a.push_back(instance.reports[shared[t].first]);
                h1b.push_back(instance.reports[shared[t].second]);
                h2a.push_back(instance.reports[shared[half + t].first]);
                h2b.push_back(instance.reports[shared[half + t].second]);
            }
            total += dmi_abs_determinant(count_joint(h1a, h1b, k)) * dmi_abs_determinant(count_joint(h2a, h2b, k));
        }
        if (thin) ++s.low_confidence;
        s.values[a] = total / static_cast<double>(peers.size());
    }
    return s;
}

bool needs_pairing(const Measurement& m)
{
    return m.kind != MechanismKind::spot_check;
}

PairingMode pairing_mode(const Measurement& m)
{
    switch (m.kind) {
    case MechanismKind::output_agreement:
    case MechanismKind::peer_truth_serum: return PairingMode::per_task;
    case MechanismKind::correlated_agreement:
    case MechanismKind::f_mutual_information:
        return m.estimation == EstimationMode::pooled ? PairingMode::per_task : PairingMode::pair_level;
    default: return PairingMode::pair_level;
    }
}

ScoreVector evaluate(const Measurement& m, const Instance& instance, Rng& rng)
{
    if (!needs_pairing(m)) return spot_check(instance, m, rng);
    const Pairing pairing = pair_agents(instance.g(), pairing_mode(m), m.min_shared, rng, m.peers);
    return evaluate(m, instance, pairing, rng);
}

ScoreVector evaluate(const Measurement& m, const Instance& instance, const Pairing& pairing, Rng& rng)
{
    switch (m.kind) {
    case MechanismKind::spot_check: return spot_check(instance, m, rng);
    case MechanismKind::output_agreement: return oa_score(instance, pairing);
    case MechanismKind::peer_truth_serum: return pts_score(instance, pairing);
    case MechanismKind::correlated_agreement: return ca_score(instance, pairing, m.estimation);
    case MechanismKind::f_mutual_information:
        return fmi_score(instance, pairing, m.divergence, m.estimation, m.min_shared);
    case MechanismKind::determinant_mi: return dmi_score(instance, pairing, rng);
    }
    throw ConfigError("unhandled mechanism");
}

}  // namespace scelab
