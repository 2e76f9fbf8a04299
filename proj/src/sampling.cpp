#include "scelab/sampling.hpp"

namespace scelab {

ReplicateSampler::ReplicateSampler(IecConfig config, Seed base) : config_(std::move(config)), base_(base)
{
    config_.validate();
    if (config_.assignment == AssignmentMode::block) {
        Rng unused(base_);
        fixed_graph_ = std::make_shared<const AssignmentGraph>(sample_assignment(config_, unused));
    }
}

std::shared_ptr<const AssignmentGraph> ReplicateSampler::graph(std::size_t r) const
{
    if (fixed_graph_) return fixed_graph_;
    Rng g = rng(r, "graph");
    return std::make_shared<const AssignmentGraph>(sample_assignment(config_, g));
}

Instance ReplicateSampler::instance(std::size_t r, const EffortProfile& profile, std::string_view stream) const
{
    Rng draws = rng(r, stream);
    return sample_instance(config_, profile, graph(r), draws);
}

}  // namespace scelab
