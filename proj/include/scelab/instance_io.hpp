#pragma once

// Flat CSV export of a realized instance for auditing:
// one `agent,task,report,ground_truth` row per edge.

#include "scelab/iec.hpp"

#include <iosfwd>

namespace scelab {

void write_instance_csv(std::ostream& out, const Instance& instance);

/// Reads rows written by write_instance_csv. Agent and task counts are taken
/// from the largest ids seen unless given; `num_labels` 0 means "largest label
/// + 1". Throws ParseError with the offending line number.
Instance read_instance_csv(std::istream& in, std::size_t num_labels = 0, std::size_t num_agents = 0,
                           std::size_t num_tasks = 0);

}  // namespace scelab
