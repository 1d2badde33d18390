#include <algorithm>
#include <cmath>
#include <random>

#include "papercad/error.hpp"
#include "papercad/placement.hpp"

namespace papercad {

namespace {

// Positions live on an integer 0.1 mm grid so the move generator never
// accumulates floating-point drift.
constexpr double kUnit = 0.1;

struct PartState {
  int x = 0;
  int y = 0;
  Rotation rot = Rotation::R0;
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform integer in [0, n), by rejection so the stream is portable.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }
  int between(int lo, int hi) { return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1))); }
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

class Annealer {
 public:
  Annealer(const Netlist& netlist, const FootprintLibrary& library, const Board& board,
           const AnnealOptions& options)
      : netlist_(netlist), library_(library), board_(board), options_(options) {
    for (const auto& part : netlist.parts) footprints_.push_back(&library.at(part.footprint_key));
    const Rect u = board.usable_area();
    ux0_ = static_cast<int>(std::ceil(u.min_x / kUnit - 1e-9));
    uy0_ = static_cast<int>(std::ceil(u.min_y / kUnit - 1e-9));
    ux1_ = static_cast<int>(std::floor(u.max_x / kUnit + 1e-9));
    uy1_ = static_cast<int>(std::floor(u.max_y / kUnit + 1e-9));
    snap_units_ = std::max(1, static_cast<int>(std::lround(options.move_snap / kUnit)));
  }

  void check_capacity() const {
    const double halo = board_.gap();
    const Rect u = board_.usable_area();
    double needed = 0.0;
    for (const Footprint* fp : footprints_) {
      needed += (fp->courtyard_w + halo) * (fp->courtyard_h + halo);
      const bool fits = (fp->courtyard_w <= u.width() && fp->courtyard_h <= u.height()) ||
                        (fp->courtyard_h <= u.width() && fp->courtyard_w <= u.height());
      if (!fits) {
        throw Error(ErrorCode::Infeasible, "footprint '" + fp->key + "' does not fit the usable board area");
      }
    }
    if (needed > u.area()) {
      throw Error(ErrorCode::Infeasible, "courtyards with clearance halos need " + format_mm(needed) +
                                             " mm^2 but the usable board area is " + format_mm(u.area()) + " mm^2");
    }
  }

  std::vector<PartState> initial_state() const {
    std::vector<PartState> s(footprints_.size());
    const int cx = (ux0_ + ux1_) / 2;
    const int cy = (uy0_ + uy1_) / 2;
    if (s.size() == 1) {
      s[0] = {cx, cy, Rotation::R0};
      return s;
    }
    // Shelf packing from the top-left corner; falls back to a pile in the
    // centre when the shelves overflow (annealing spreads it out).
    const int halo = static_cast<int>(std::ceil(board_.gap() / kUnit));
    int x = ux0_, y = uy0_, shelf = 0;
    bool overflow = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const int w = static_cast<int>(std::ceil(footprints_[i]->courtyard_w / kUnit));
      const int h = static_cast<int>(std::ceil(footprints_[i]->courtyard_h / kUnit));
      if (x + w > ux1_) {
        x = ux0_;
        y += shelf + halo;
        shelf = 0;
      }
      if (y + h > uy1_ || x + w > ux1_) overflow = true;
      s[i] = {x + (w + 1) / 2, y + (h + 1) / 2, Rotation::R0};
      x += w + halo;
      shelf = std::max(shelf, h);
    }
    if (overflow) {
      for (auto& p : s) p = {cx, cy, Rotation::R0};
    }
    for (std::size_t i = 0; i < s.size(); ++i) clamp(i, s[i]);
    return s;
  }

  PlacementSet to_placement(const std::vector<PartState>& s) const {
    PlacementSet out;
    for (std::size_t i = 0; i < s.size(); ++i) {
      out[netlist_.parts[i].id] = Placement{s[i].x / 10.0, s[i].y / 10.0, s[i].rot};
    }
    return out;
  }

  PlacementCost cost(const std::vector<PartState>& s) const {
    return placement_cost(netlist_, library_, board_, to_placement(s), options_.weights);
  }

  // Keeps the courtyard inside the usable area when the part fits at all.
  void clamp(std::size_t i, PartState& p) const {
    const bool swap = p.rot == Rotation::R90 || p.rot == Rotation::R270;
    const double w = swap ? footprints_[i]->courtyard_h : footprints_[i]->courtyard_w;
    const double h = swap ? footprints_[i]->courtyard_w : footprints_[i]->courtyard_h;
    const int half_w = static_cast<int>(std::ceil(w / 2 / kUnit - 1e-9));
    const int half_h = static_cast<int>(std::ceil(h / 2 / kUnit - 1e-9));
    const int lo_x = ux0_ + half_w, hi_x = ux1_ - half_w;
    const int lo_y = uy0_ + half_h, hi_y = uy1_ - half_h;
    p.x = lo_x <= hi_x ? std::clamp(p.x, lo_x, hi_x) : (ux0_ + ux1_) / 2;
    p.y = lo_y <= hi_y ? std::clamp(p.y, lo_y, hi_y) : (uy0_ + uy1_) / 2;
  }

  void random_move(std::vector<PartState>& s, Rng& rng, double range_fraction) const {
    const std::size_t n = s.size();
    const int kinds = n >= 2 ? 3 : 2;
    const auto kind = rng.below(static_cast<std::uint64_t>(kinds));
    if (kind == 0) {
      const std::size_t i = rng.below(n);
      const int span_mm = std::max(ux1_ - ux0_, uy1_ - uy0_) / 2 / snap_units_;
      const int reach = std::max(1, static_cast<int>(std::lround(span_mm * range_fraction)));
      s[i].x += rng.between(-reach, reach) * snap_units_;
      s[i].y += rng.between(-reach, reach) * snap_units_;
      clamp(i, s[i]);
    } else if (kind == 1) {
      const std::size_t i = rng.below(n);
      s[i].rot = rotate_by(s[i].rot, rng.below(2) == 0 ? 1 : -1);
      clamp(i, s[i]);
    } else {
      const std::size_t i = rng.below(n);
      std::size_t j = rng.below(n - 1);
      if (j >= i) ++j;
      std::swap(s[i].x, s[j].x);
      std::swap(s[i].y, s[j].y);
      clamp(i, s[i]);
      clamp(j, s[j]);
    }
  }

  PlacementSet run(std::uint64_t seed) {
    check_capacity();
    Rng rng(seed);
    std::vector<PartState> current = initial_state();
    PlacementCost current_cost = cost(current);

    std::vector<PartState> best;
    double best_total = std::numeric_limits<double>::infinity();
    auto consider = [&](const std::vector<PartState>& s, const PlacementCost& c) {
      if (c.feasible() && c.total < best_total) {
        best = s;
        best_total = c.total;
      }
    };
    consider(current, current_cost);

    double t0 = 0.0;
    for (int k = 0; k < options_.calibration_moves; ++k) {
      auto trial = current;
      random_move(trial, rng, 1.0);
      const PlacementCost c = cost(trial);
      consider(trial, c);
      t0 += std::abs(c.total - current_cost.total);
    }
    if (options_.calibration_moves > 0) t0 /= options_.calibration_moves;

    if (t0 > 0.0) {
      for (double t = t0; t >= options_.stop_ratio * t0; t *= options_.cooling) {
        const double fraction = std::max(t / t0, 0.02);
        for (int k = 0; k < options_.moves_per_temperature; ++k) {
          auto trial = current;
          random_move(trial, rng, fraction);
          const PlacementCost c = cost(trial);
          const double delta = c.total - current_cost.total;
          if (delta <= 0.0 || rng.unit() < std::exp(-delta / t)) {
            current = std::move(trial);
            current_cost = c;
            consider(current, current_cost);
          }
        }
      }
    }
    if (best.empty()) {
      throw Error(ErrorCode::Infeasible, "annealing found no placement without overlaps inside the board");
    }
    return to_placement(best);
  }

 private:
  const Netlist& netlist_;
  const FootprintLibrary& library_;
  const Board& board_;
  AnnealOptions options_;
  std::vector<const Footprint*> footprints_;
  int ux0_, uy0_, ux1_, uy1_;
  int snap_units_ = 10;
};

}  // namespace

PlacementSet auto_place(const Netlist& netlist, const FootprintLibrary& library, const Board& board,
                        std::uint64_t seed, const AnnealOptions& options) {
  if (netlist.parts.empty()) return {};
  Annealer annealer(netlist, library, board, options);
  return annealer.run(seed);
}

}  // namespace papercad
