#pragma once

#include "scelab/iec.hpp"
#include "scelab/rng.hpp"

#include <memory>
#include <string_view>

namespace scelab {

/// Derives every random input of replicate `r` from a base seed: the graph,
/// the instance draws, and the measurement's own randomness each get a
/// named child stream of base.child(r). Two samplers with equal seeds hand
/// out identical instances regardless of the effort profile or of which
/// mechanism consumes them.
class ReplicateSampler {
public:
    ReplicateSampler(IecConfig config, Seed base);

    const IecConfig& config() const noexcept { return config_; }
    Seed base() const noexcept { return base_; }
    Seed replicate_seed(std::size_t r) const { return base_.child(r); }

    std::shared_ptr<const AssignmentGraph> graph(std::size_t r) const;
    Instance instance(std::size_t r, const EffortProfile& profile, std::string_view stream = "instance") const;
    Rng rng(std::size_t r, std::string_view stream) const { return Rng(replicate_seed(r).child(stream)); }

private:
    IecConfig config_;
    Seed base_;
    std::shared_ptr<const AssignmentGraph> fixed_graph_;  // block mode
};

}  // namespace scelab
