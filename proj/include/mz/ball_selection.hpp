#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mz/grid.hpp"

namespace mz {

struct SelectedBall {
  std::size_t node = 0;       // centre node (linear index)
  int radius_cells = 0;       // radius / h, a power of two
};

struct BallSelection {
  std::vector<SelectedBall> balls;
  /// Every node whose stopping time resolved inside the domain.
  std::vector<SelectedBall> candidates;
  /// Nodes above threshold whose stopping radius hit the cap or left the grid.
  std::size_t unresolved = 0;
};

/// Stopping-time ball selection. Candidates are nodes with e > theta*K_sup;
/// each gets the least R = h 2^j (j >= 0) whose discrete ball mean of e is
/// <= theta*K_sup (so the mean over the half radius exceeds it), with R capped
/// at a quarter of the short side. A greedy pass (radius descending, then
/// node index) keeps the pairwise disjoint balls.
BallSelection select_balls(const Grid& g, std::span<const double> e, double theta, double K_sup);

struct SelectionCheck {
  bool disjoint = true;
  bool covered = true;
  std::size_t uncovered = 0;
};

/// Exhaustive check: accepted balls pairwise disjoint and every candidate
/// centre inside the 5-dilate of some accepted ball.
SelectionCheck verify_selection(const Grid& g, const BallSelection& sel);

/// Squared lattice distance between two nodes (minimum image on periodic grids).
long lattice_dist2(const Grid& g, std::size_t a, std::size_t b);

}  // namespace mz
