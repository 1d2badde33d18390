#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>

#include "papercad/board.hpp"
#include "papercad/footprint.hpp"
#include "papercad/netmodel.hpp"
#include "papercad/pipeline.hpp"

namespace papercad {

struct ApiResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

// One board per session. Mutations are serialised; every accepted mutation
// bumps the revision and drops the cached layout.
class ProjectSession {
 public:
  ProjectSession() = default;
  ProjectSession(const ProjectSession&) = delete;
  ProjectSession& operator=(const ProjectSession&) = delete;

  void load(Netlist netlist, FootprintLibrary library, Board board, PlacementSet placement);
  bool loaded() const;
  std::uint64_t revision() const;
  PlacementSet placement() const;

  ApiResponse get_project() const;
  // Body: {"x": mm, "y": mm, "rot": degrees}.
  ApiResponse put_placement(std::string_view part_id, std::string_view body);
  ApiResponse recompute();
  ApiResponse get_drc() const;
  // mode "cut" or "finetape"; tape width defaults to the board gap.
  ApiResponse export_file(std::string_view mode, std::optional<std::string_view> tape_width) const;
  ApiResponse preview_png() const;

 private:
  struct Cached {
    std::uint64_t revision = 0;
    std::shared_ptr<const PipelineResult> result;  // null when the pipeline failed
    ApiResponse response;
  };

  std::mutex writer_;                 // one mutation or recompute at a time
  mutable std::shared_mutex state_;   // guards everything below
  bool loaded_ = false;
  Netlist netlist_;
  std::shared_ptr<const FootprintLibrary> library_;
  Board board_;
  PlacementSet placement_;
  std::uint64_t revision_ = 0;
  std::optional<Cached> cache_;
};

// Loopback HTTP front end:
//   GET /api/project, PUT /api/placement/{id}, POST /api/recompute,
//   GET /api/drc, GET /api/export?mode=cut|finetape&tape_width=, GET /api/preview.png
class ApiServer {
 public:
  explicit ApiServer(ProjectSession& session);
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  // Port 0 picks a free port. Returns the bound port; throws Io on failure.
  int bind(const std::string& host = "127.0.0.1", int port = 0);
  void start();  // serve on a background thread
  void run();    // serve on the calling thread until stop()
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace papercad
