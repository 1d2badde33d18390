#pragma once

#include <string>
#include <vector>

#include "papercad/board.hpp"
#include "papercad/drc.hpp"
#include "papercad/footprint.hpp"
#include "papercad/netmodel.hpp"
#include "papercad/partition.hpp"

namespace papercad {

struct PipelineResult {
  std::vector<std::string> net_names;  // indexed by net id
  std::vector<Issue> issues;           // non-blocking netlist findings
  std::vector<PadInstance> pads;       // empty for trace input
  SeedGrid seeds;
  ZoneMap zones;
  ZoneLayout layout;
  DrcReport drc;
};

// validate -> instantiate -> rasterize -> partition -> carve -> min feature
// -> vectorize -> DRC. Pipeline errors propagate as papercad::Error; a
// blocking netlist issue throws UnknownFootprint (or Validation).
PipelineResult run_pad_pipeline(const Netlist& netlist, const FootprintLibrary& library,
                                const PlacementSet& placement, const Board& board);

// Same stages seeded from a trace layer; net ids follow document order.
PipelineResult run_trace_pipeline(const TraceLayer& traces, const Board& board);

// Partition stages shared by both inputs.
void partition_seeds(PipelineResult& result, const Board& board);

}  // namespace papercad
