#pragma once

// Performance measurements: map an Instance to one score per agent.

#include "scelab/iec.hpp"
#include "scelab/matrix.hpp"
#include "scelab/rng.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace scelab {

enum class MechanismKind {
    spot_check,
    output_agreement,
    peer_truth_serum,
    correlated_agreement,
    f_mutual_information,
    determinant_mi,
};

/// f-divergences for f-MI: KL f(x) = -log x, TVD f(x) = |x - 1|,
/// squared Hellinger f(x) = (sqrt(x) - 1)^2.
enum class Divergence { kl, tvd, h2 };

/// Whom an agent is compared with.
///  all_peers:   every co-worker (on the task for OA/PTS, every qualifying
///               agent for CA/f-MI/DMI); the agent's score averages over them.
///  random_peer: one peer drawn u.a.r. per task (OA/PTS) or per agent.
enum class PeerScope { all_peers, random_peer };

/// How CA and f-MI estimate the joint report distribution.
///  pair_shared: from the tasks an agent shares with its fixed peer.
///  pooled:      from per-task peer report pairs (see ca_score / fmi_score).
enum class EstimationMode { pair_shared, pooled };

std::string to_string(MechanismKind kind);
std::string to_string(Divergence d);
std::string to_string(EstimationMode m);
std::string to_string(PeerScope p);
Divergence parse_divergence(std::string_view text);
EstimationMode parse_estimation_mode(std::string_view text);
PeerScope parse_peer_scope(std::string_view text);

/// Per-task score for a checked task, S(report, truth).
using TaskScore = std::function<double(Label report, Label truth)>;

struct Measurement {
    MechanismKind kind = MechanismKind::spot_check;
    double check_ratio = 100.0;  // percent of tasks checked (spot check)
    TaskScore task_score;        // empty means accuracy, 1[report == truth]
    double unchecked_score = 0.0;
    Divergence divergence = Divergence::kl;
    EstimationMode estimation = EstimationMode::pair_shared;
    PeerScope peers = PeerScope::all_peers;
    std::size_t min_shared = 8;

    static Measurement spot_check(double check_ratio);
    static Measurement output_agreement();
    static Measurement peer_truth_serum();
    static Measurement correlated_agreement(EstimationMode mode = EstimationMode::pair_shared);
    static Measurement f_mutual_information(Divergence d, EstimationMode mode = EstimationMode::pair_shared);
    static Measurement determinant_mi();

    /// Short identifier: sc:<X>, oa, pts, ca, fmi:<kl|tvd|h2>, dmi. Pooled
    /// estimation appends "+pooled", a single random peer "+single".
    std::string id() const;
    /// Inverse of id(). Also accepts "sc" with the ratio given separately.
    static Measurement parse(std::string_view text);

    void validate() const;
};

struct ScoreVector {
    std::vector<double> values;
    /// Agents whose score rests on fewer shared tasks than the estimator needs.
    std::size_t low_confidence = 0;
};

enum class PairingMode { per_task, pair_level };

struct Pairing {
    PeerScope scope = PeerScope::random_peer;
    /// pair_level: the agent's peers, one entry under random_peer.
    std::vector<std::vector<AgentId>> peer_agents;
    /// per_task under random_peer: the peer's edge on the same task, kNone
    /// if the task has no other agent. Empty under all_peers, where every
    /// other edge on the task is a peer.
    std::vector<EdgeId> peer_edge;
    PairingMode mode = PairingMode::per_task;

    /// Single peer of `a` (random_peer, pair_level).
    AgentId peer_of(AgentId a) const { return peer_agents[a].front(); }
};

/// Candidate peers of an agent: agents sharing at least `min_shared` tasks,
/// or, if none does, the agents sharing the most tasks.
/// per_task: under random_peer each edge gets a peer drawn u.a.r. among the
/// other agents on that task. pair_level: all candidates, or one drawn
/// u.a.r. under random_peer.
/// Throws PairingError for an agent without any co-worker.
Pairing pair_agents(const AssignmentGraph& graph, PairingMode mode, std::size_t min_shared, Rng& rng,
                    PeerScope scope = PeerScope::random_peer);

/// Joint report counts of two paired label sequences.
struct JointCounts {
    std::size_t labels = 0;
    std::int64_t n = 0;
    std::vector<std::int64_t> cell;  // row-major labels x labels
    std::vector<std::int64_t> row, col;

    std::int64_t at(std::size_t r, std::size_t c) const { return cell[r * labels + c]; }
    /// n^2 * Delta(r, c) = n * count(r, c) - row(r) * col(c), exact.
    std::int64_t delta_numerator(std::size_t r, std::size_t c) const { return n * at(r, c) - row[r] * col[c]; }
};

JointCounts count_joint(std::span<const Label> first, std::span<const Label> second, std::size_t labels);

/// Empirical joint minus the product of the empirical marginals.
Matrix estimate_delta(std::span<const Label> first, std::span<const Label> second, std::size_t labels);
/// Sum of the positive entries of Delta.
double ca_pair_score(const JointCounts& counts);
/// Empirical f-mutual information of the paired sequences.
double f_mutual_information(const JointCounts& counts, Divergence d);
/// |det| of the empirical joint distribution matrix, computed exactly from counts.
double dmi_abs_determinant(const JointCounts& counts);

ScoreVector spot_check(const Instance& instance, const Measurement& m, Rng& rng);
ScoreVector oa_score(const Instance& instance, const Pairing& pairing);
ScoreVector pts_score(const Instance& instance, const Pairing& pairing);
ScoreVector ca_score(const Instance& instance, const Pairing& pairing, EstimationMode mode);
ScoreVector fmi_score(const Instance& instance, const Pairing& pairing, Divergence d, EstimationMode mode,
                      std::size_t min_shared = 8);
ScoreVector dmi_score(const Instance& instance, const Pairing& pairing, Rng& rng);

/// Which pairing a measurement needs, if any.
bool needs_pairing(const Measurement& m);
PairingMode pairing_mode(const Measurement& m);

/// Scores every agent. Consumes `rng` for pairing, check sets and DMI splits.
ScoreVector evaluate(const Measurement& m, const Instance& instance, Rng& rng);
/// Same as evaluate() with a pairing computed by the caller.
ScoreVector evaluate(const Measurement& m, const Instance& instance, const Pairing& pairing, Rng& rng);

}  // namespace scelab
