#include "papercad/pipeline.hpp"

#include "papercad/error.hpp"

namespace papercad {

void partition_seeds(PipelineResult& result, const Board& board) {
  const LabelGrid labels = geodesic_partition(result.seeds);
  result.zones = enforce_min_feature(carve_gaps(labels, board, result.seeds), result.seeds);
  result.layout = vectorize(result.zones);
  result.drc = run_drc(result.zones, result.seeds.sources);
}

PipelineResult run_pad_pipeline(const Netlist& netlist, const FootprintLibrary& library,
                                const PlacementSet& placement, const Board& board) {
  PipelineResult result;
  for (const auto& net : netlist.nets) result.net_names.push_back(net.name);
  auto issues = validate_netlist(netlist, library);
  for (const auto& issue : issues) {
    if (issue.severity != Severity::Error) continue;
    ErrorDetail detail;
    if (!issue.part_id.empty()) detail.parts = {issue.part_id};
    if (issue.net_id >= 0) detail.nets = {issue.net_id};
    const ErrorCode code = issue.kind == IssueKind::UnknownFootprint ? ErrorCode::UnknownFootprint
                                                                      : ErrorCode::Validation;
    throw Error(code, issue.message, std::move(detail));
  }
  result.issues = std::move(issues);
  result.pads = instantiate_pads(netlist, library, placement);
  result.seeds = rasterize_pads(result.pads, board);
  partition_seeds(result, board);
  return result;
}

PipelineResult run_trace_pipeline(const TraceLayer& traces, const Board& board) {
  PipelineResult result;
  std::map<std::string, int, std::less<>> index;
  for (const auto& net : traces.nets) {
    index.emplace(net.name, static_cast<int>(result.net_names.size()));
    result.net_names.push_back(net.name);
  }
  result.seeds = rasterize_traces(traces, board, index);
  partition_seeds(result, board);
  return result;
}

}  // namespace papercad
