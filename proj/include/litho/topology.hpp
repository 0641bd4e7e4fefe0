#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "litho/grid.hpp"
#include "litho/morphology.hpp"

namespace litho {

// Per-pixel component labels: 0 = background, 1..count = components numbered
// by raster-scan first touch (deterministic).
struct ComponentLabeling {
  int width = 0;
  int height = 0;
  std::vector<std::int32_t> labels;
  int count = 0;

  std::int32_t at(int x, int y) const {
    return labels[static_cast<std::size_t>(y) * width + x];
  }
};

// Two-pass union-find labeling with 8-connectivity.
ComponentLabeling label_components(const BinaryLayout& a);

// Change in component count: k(a_prime) - k(a).  Throws
// Error("topology", "dimension-mismatch") on differing dimensions.
int delta_k(const BinaryLayout& a, const BinaryLayout& a_prime);

enum class DefectClass { none, bridge, burr, pinch, contamination };

std::string to_string(DefectClass cls);
DefectClass defect_class_from_string(const std::string& name);

struct ClassifyConfig {
  double min_irregularity = 0.0;  // pinch acceptance threshold on the score below
  int min_burr_area = 4;          // minimum symmetric-difference pixels for a burr
};

// Shape score of the fracture boundary newly exposed inside `window`:
// 1 - chord / arc per 8-connected chain of pixels that are boundary pixels of
// a_prime but were not boundary pixels of a, maximized over chains.  Returns 0
// when no new boundary exists.  A boundary pixel is foreground with at least
// one 4-neighbor that is background or outside the grid.
double irregularity(const BinaryLayout& a, const BinaryLayout& a_prime, const Rect& window);

// Three-way defect class of the edit that turned `a` into `a_prime`:
//   pinch  iff sigma=-1 and delta_k>0 and irregularity >= min_irregularity
//   bridge iff sigma=+1 and delta_k<0
//   burr   iff sigma=+1 and delta_k=0 and |a xor a_prime| >= min_burr_area
// and none otherwise.  contamination is never produced; it exists for dataset
// category bookkeeping only.
DefectClass classify(const BinaryLayout& a, const BinaryLayout& a_prime,
                     const PerturbationSpec& spec, const ClassifyConfig& cfg);

}  // namespace litho
