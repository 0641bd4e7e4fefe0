#include "litho/morphology.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "litho/errors.hpp"

namespace litho {

namespace {

// Maximal horizontal run of offsets sharing one dy.
struct Span {
  int dy;
  int lo;
  int hi;
};

std::vector<Span> row_spans(const StructuringElement& se) {
  std::set<std::pair<int, int>> sorted;  // (dy, dx)
  for (const auto& [dx, dy] : se.offsets) sorted.emplace(dy, dx);
  std::vector<Span> spans;
  for (auto it = sorted.begin(); it != sorted.end();) {
    const int dy = it->first;
    Span span{dy, it->second, it->second};
    ++it;
    while (it != sorted.end() && it->first == dy) {
      if (it->second == span.hi + 1) {
        span.hi = it->second;
      } else {
        spans.push_back(span);
        span.lo = span.hi = it->second;
      }
      ++it;
    }
    spans.push_back(span);
  }
  return spans;
}

// prefix[y * (width + 1) + x] = number of foreground pixels in row y left of x.
std::vector<std::int32_t> row_prefix_sums(const BinaryLayout& a) {
  std::vector<std::int32_t> prefix(static_cast<std::size_t>(a.height) * (a.width + 1));
  for (int y = 0; y < a.height; ++y) {
    std::int32_t* row = prefix.data() + static_cast<std::size_t>(y) * (a.width + 1);
    const std::uint8_t* src = a.pixels.data() + static_cast<std::size_t>(y) * a.width;
    row[0] = 0;
    for (int x = 0; x < a.width; ++x) row[x + 1] = row[x] + src[x];
  }
  return prefix;
}

void validate_offsets(const std::vector<std::pair<int, int>>& offsets) {
  if (offsets.empty()) throw Error("morphology", "invalid-se", "element has no offsets");
  std::set<std::pair<int, int>> unique(offsets.begin(), offsets.end());
  if (unique.size() != offsets.size())
    throw Error("morphology", "invalid-se", "duplicate offsets");
  if (!unique.count({0, 0}))
    throw Error("morphology", "invalid-se", "element must contain the origin");
  for (const auto& [dx, dy] : unique)
    if (!unique.count({-dx, -dy}))
      throw Error("morphology", "invalid-se", "element must be symmetric under negation");
}

Rect translated_bbox(const PerturbationSpec& spec) {
  int min_dx = 0, max_dx = 0, min_dy = 0, max_dy = 0;
  for (const auto& [dx, dy] : spec.se.offsets) {
    min_dx = std::min(min_dx, dx);
    max_dx = std::max(max_dx, dx);
    min_dy = std::min(min_dy, dy);
    max_dy = std::max(max_dy, dy);
  }
  return Rect{spec.tx + min_dx, spec.ty + min_dy, spec.tx + max_dx, spec.ty + max_dy};
}

}  // namespace

std::string to_string(SeShape shape) {
  switch (shape) {
    case SeShape::square: return "square";
    case SeShape::diamond: return "diamond";
    case SeShape::custom: return "custom";
  }
  return "custom";
}

std::string to_string(PerturbKind kind) {
  return kind == PerturbKind::erosion ? "erosion" : "dilation";
}

int sigma_of(PerturbKind kind) { return kind == PerturbKind::erosion ? -1 : +1; }

std::string to_string(PerturbMode mode) {
  return mode == PerturbMode::footprint ? "footprint" : "windowed";
}

StructuringElement StructuringElement::make_square(int r) {
  if (r < 0) throw Error("morphology", "invalid-se", "negative radius");
  StructuringElement se;
  se.shape = SeShape::square;
  se.scale_r = r;
  se.offsets.reserve(static_cast<std::size_t>(2 * r + 1) * (2 * r + 1));
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx) se.offsets.emplace_back(dx, dy);
  return se;
}

StructuringElement StructuringElement::make_diamond(int r) {
  if (r < 0) throw Error("morphology", "invalid-se", "negative radius");
  StructuringElement se;
  se.shape = SeShape::diamond;
  se.scale_r = r;
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -(r - std::abs(dy)); dx <= r - std::abs(dy); ++dx)
      se.offsets.emplace_back(dx, dy);
  return se;
}

StructuringElement StructuringElement::from_offsets(std::vector<std::pair<int, int>> offsets) {
  validate_offsets(offsets);
  StructuringElement se;
  se.shape = SeShape::custom;
  se.scale_r = 0;
  se.offsets = std::move(offsets);
  return se;
}

int StructuringElement::radius_chebyshev() const {
  int r = 0;
  for (const auto& [dx, dy] : offsets) r = std::max(r, std::max(std::abs(dx), std::abs(dy)));
  return r;
}

int PerturbationSpec::effective_margin() const {
  return window_margin >= 0 ? window_margin : 2 * se.radius_chebyshev();
}

BinaryLayout dilate(const BinaryLayout& a, const StructuringElement& se) {
  const std::vector<Span> spans = row_spans(se);
  const std::vector<std::int32_t> prefix = row_prefix_sums(a);
  BinaryLayout out(a.width, a.height);
  const int w = a.width, h = a.height;
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    std::uint8_t* dst = out.pixels.data() + static_cast<std::size_t>(y) * w;
    for (const Span& span : spans) {
      const int sy = y - span.dy;
      if (sy < 0 || sy >= h) continue;  // outside reads are background
      const std::int32_t* row = prefix.data() + static_cast<std::size_t>(sy) * (w + 1);
      for (int x = 0; x < w; ++x) {
        if (dst[x]) continue;
        // out(x,y) |= OR of a(x - dx, sy) for dx in [lo, hi]
        const int l = std::max(0, x - span.hi);
        const int r = std::min(w - 1, x - span.lo);
        if (l <= r && row[r + 1] - row[l] > 0) dst[x] = 1;
      }
    }
  }
  return out;
}

BinaryLayout erode(const BinaryLayout& a, const StructuringElement& se) {
  const std::vector<Span> spans = row_spans(se);
  const std::vector<std::int32_t> prefix = row_prefix_sums(a);
  BinaryLayout out(a.width, a.height);
  const int w = a.width, h = a.height;
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    std::uint8_t* dst = out.pixels.data() + static_cast<std::size_t>(y) * w;
    for (int x = 0; x < w; ++x) {
      std::uint8_t keep = 1;
      for (const Span& span : spans) {
        const int sy = y + span.dy;
        if (sy < 0 || sy >= h) continue;  // outside reads are foreground
        // need a(x + dx, sy) == 1 for all dx in [lo, hi]
        const int l = std::max(0, x + span.lo);
        const int r = std::min(w - 1, x + span.hi);
        if (l > r) continue;
        const std::int32_t* row = prefix.data() + static_cast<std::size_t>(sy) * (w + 1);
        if (row[r + 1] - row[l] != r - l + 1) {
          keep = 0;
          break;
        }
      }
      dst[x] = keep;
    }
  }
  return out;
}

BinaryLayout perturb(const BinaryLayout& a, const PerturbationSpec& spec) {
  if (!a.in_bounds(spec.tx, spec.ty))
    throw Error("morphology", "out-of-bounds-target",
                "target (" + std::to_string(spec.tx) + ", " + std::to_string(spec.ty) +
                    ") outside " + std::to_string(a.width) + "x" + std::to_string(a.height) +
                    " grid");
  if (spec.mode == PerturbMode::footprint) {
    BinaryLayout out = a;
    const std::uint8_t value = spec.kind == PerturbKind::dilation ? 1 : 0;
    for (const auto& [dx, dy] : spec.se.offsets) {
      const int x = spec.tx + dx, y = spec.ty + dy;
      if (out.in_bounds(x, y)) out.set(x, y, value);
    }
    return out;
  }
  const BinaryLayout morphed =
      spec.kind == PerturbKind::dilation ? dilate(a, spec.se) : erode(a, spec.se);
  const Rect window = perturb_window(spec, a.width, a.height);
  BinaryLayout out = a;
  for (int y = window.y0; y <= window.y1; ++y)
    for (int x = window.x0; x <= window.x1; ++x) out.set(x, y, morphed.at(x, y));
  return out;
}

Rect perturb_window(const PerturbationSpec& spec, int width, int height) {
  Rect box = translated_bbox(spec);
  if (spec.mode == PerturbMode::windowed) box = box.expanded(spec.effective_margin());
  return box.clipped(width, height);
}

double support(const StructuringElement& se, double nx, double ny) {
  const double norm = std::sqrt(nx * nx + ny * ny);
  if (std::abs(norm - 1.0) > 1e-9)
    throw Error("morphology", "non-unit-normal",
                "|n| = " + std::to_string(norm) + " is not 1 within 1e-9");
  double best = 0.0;
  for (const auto& [dx, dy] : se.offsets) best = std::max(best, dx * nx + dy * ny);
  return best;
}

double boundary_displacement(const StructuringElement& se, PerturbKind kind, double nx,
                             double ny) {
  return sigma_of(kind) * support(se, nx, ny);
}

double predicted_epe(const EpeModel& model, double delta_b) { return model.meef * delta_b; }

double max_boundary_displacement(const StructuringElement& se, PerturbKind kind,
                                 int directions) {
  double best = 0.0;
  for (int i = 0; i < directions; ++i) {
    const double theta = 2.0 * std::numbers::pi * i / directions;
    best = std::max(best,
                    std::abs(boundary_displacement(se, kind, std::cos(theta), std::sin(theta))));
  }
  return best;
}

}  // namespace litho
