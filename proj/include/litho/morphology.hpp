#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "litho/grid.hpp"

namespace litho {

enum class SeShape { square, diamond, custom };

std::string to_string(SeShape shape);

// Origin-symmetric structuring element given as explicit integer offsets.
// Square(r) is the Chebyshev ball {|dx|<=r, |dy|<=r}; diamond(r) the L1 ball
// {|dx|+|dy|<=r}.  Custom elements must contain the origin and be symmetric
// under negation so erosion/dilation duality holds exactly.
struct StructuringElement {
  SeShape shape = SeShape::custom;
  int scale_r = 0;  // radius for square/diamond; 0 for custom
  std::vector<std::pair<int, int>> offsets;

  static StructuringElement make_square(int r);
  static StructuringElement make_diamond(int r);
  static StructuringElement from_offsets(std::vector<std::pair<int, int>> offsets);

  int radius_chebyshev() const;  // max over offsets of max(|dx|,|dy|)
};

enum class PerturbKind { erosion, dilation };

std::string to_string(PerturbKind kind);
int sigma_of(PerturbKind kind);  // erosion -> -1, dilation -> +1

enum class PerturbMode { footprint, windowed };

std::string to_string(PerturbMode mode);

// A localized morphological edit: apply `kind` with element `se` translated to
// (tx, ty).  footprint mode unions/subtracts the translated element itself;
// windowed mode composites the global morphological result inside a window
// centered on the target.  window_margin < 0 means the default of 2 * radius.
struct PerturbationSpec {
  PerturbKind kind = PerturbKind::dilation;
  StructuringElement se;
  int tx = 0;
  int ty = 0;
  PerturbMode mode = PerturbMode::footprint;
  int window_margin = -1;

  int effective_margin() const;
};

// Scalar linear model mapping an edge displacement to a predicted edge
// placement error at the printed image.
struct EpeModel {
  double meef = 1.4;
};

// Minkowski dilation: out(p) = OR over o in se of a(p - o); reads outside the
// grid are background (0).
BinaryLayout dilate(const BinaryLayout& a, const StructuringElement& se);

// Minkowski erosion: out(p) = AND over o in se of a(p + o); reads outside the
// grid are foreground (1), so erode(a, k) == ~dilate(~a, k) exactly for
// symmetric elements.
BinaryLayout erode(const BinaryLayout& a, const StructuringElement& se);

// Applies the edit described by `spec`.  Throws Error("morphology",
// "out-of-bounds-target") if (tx, ty) lies outside the grid.
BinaryLayout perturb(const BinaryLayout& a, const PerturbationSpec& spec);

// The axis-aligned region a perturbation can affect, clipped to a grid of the
// given dimensions: bbox of the translated element expanded by the effective
// margin in windowed mode (footprint mode uses the translated bbox directly).
Rect perturb_window(const PerturbationSpec& spec, int width, int height);

// Support function of the element in direction n (unit vector):
// h(n) = max over offsets of (dx, dy) . n.  Throws Error("morphology",
// "non-unit-normal") if |n| deviates from 1 by more than 1e-9.
double support(const StructuringElement& se, double nx, double ny);

// Signed local edge displacement along normal n for a perturbation of sign
// sigma: delta_b = sigma * h(n).
double boundary_displacement(const StructuringElement& se, PerturbKind kind, double nx,
                             double ny);

// Predicted edge placement error: meef * delta_b.
double predicted_epe(const EpeModel& model, double delta_b);

// max over `directions` evenly spaced unit normals of |delta_b(n)|.
double max_boundary_displacement(const StructuringElement& se, PerturbKind kind,
                                 int directions = 16);

}  // namespace litho
