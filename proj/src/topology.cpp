#include "litho/topology.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "litho/errors.hpp"

namespace litho {

namespace {

struct UnionFind {
  std::vector<std::int32_t> parent;

  std::int32_t make() {
    parent.push_back(static_cast<std::int32_t>(parent.size()));
    return parent.back();
  }
  std::int32_t find(std::int32_t i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  }
  void unite(std::int32_t a, std::int32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

constexpr std::array<std::pair<int, int>, 4> kNeigh4{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
constexpr std::array<std::pair<int, int>, 8> kNeigh8{
    {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};

bool is_boundary(const BinaryLayout& a, int x, int y) {
  if (!a.at(x, y)) return false;
  for (const auto& [dx, dy] : kNeigh4) {
    const int nx = x + dx, ny = y + dy;
    if (!a.in_bounds(nx, ny) || !a.at(nx, ny)) return true;
  }
  return false;
}

struct Pixel {
  int x;
  int y;
};

double dist(const Pixel& a, const Pixel& b) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

// Orders a chain of pixels by walking from an endpoint (a pixel with exactly
// one 8-neighbor in the chain); falls back to sorting by projection onto the
// principal axis when the chain branches or loops.
std::vector<Pixel> order_chain(const std::vector<Pixel>& chain) {
  const std::size_t n = chain.size();
  if (n <= 2) return chain;

  auto key = [](int x, int y) { return (static_cast<std::int64_t>(y) << 32) | std::uint32_t(x); };
  std::vector<std::int64_t> present;
  present.reserve(n);
  for (const Pixel& p : chain) present.push_back(key(p.x, p.y));
  std::sort(present.begin(), present.end());
  auto in_chain = [&](int x, int y) {
    return std::binary_search(present.begin(), present.end(), key(x, y));
  };

  auto neighbor_count = [&](const Pixel& p) {
    int c = 0;
    for (const auto& [dx, dy] : kNeigh8)
      if (in_chain(p.x + dx, p.y + dy)) ++c;
    return c;
  };

  std::size_t start = n;  // first endpoint in input order
  for (std::size_t i = 0; i < n; ++i) {
    if (neighbor_count(chain[i]) == 1) {
      start = i;
      break;
    }
  }

  if (start < n) {
    std::vector<std::int64_t> visited;
    visited.reserve(n);
    auto mark = [&](const Pixel& p) {
      visited.insert(std::lower_bound(visited.begin(), visited.end(), key(p.x, p.y)),
                     key(p.x, p.y));
    };
    auto seen = [&](int x, int y) {
      return std::binary_search(visited.begin(), visited.end(), key(x, y));
    };
    std::vector<Pixel> ordered;
    ordered.reserve(n);
    Pixel cur = chain[start];
    ordered.push_back(cur);
    mark(cur);
    bool walk_ok = true;
    while (ordered.size() < n) {
      Pixel next{0, 0};
      int options = 0;
      for (const auto& [dx, dy] : kNeigh8) {
        const int nx = cur.x + dx, ny = cur.y + dy;
        if (in_chain(nx, ny) && !seen(nx, ny)) {
          next = Pixel{nx, ny};
          ++options;
        }
      }
      if (options != 1) {
        walk_ok = false;
        break;
      }
      ordered.push_back(next);
      mark(next);
      cur = next;
    }
    if (walk_ok) return ordered;
  }

  // Principal-axis fallback: project onto the dominant eigenvector of the
  // 2x2 covariance matrix and sort by projection.
  double mx = 0, my = 0;
  for (const Pixel& p : chain) {
    mx += p.x;
    my += p.y;
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0, syy = 0;
  for (const Pixel& p : chain) {
    const double dx = p.x - mx, dy = p.y - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  const double trace = sxx + syy;
  const double det = sxx * syy - sxy * sxy;
  const double lambda = trace / 2.0 + std::sqrt(std::max(0.0, trace * trace / 4.0 - det));
  double ax, ay;
  if (std::abs(sxy) > 1e-12) {
    ax = lambda - syy;
    ay = sxy;
  } else {
    ax = sxx >= syy ? 1.0 : 0.0;
    ay = sxx >= syy ? 0.0 : 1.0;
  }
  std::vector<Pixel> ordered = chain;
  std::stable_sort(ordered.begin(), ordered.end(), [&](const Pixel& a, const Pixel& b) {
    const double pa = a.x * ax + a.y * ay;
    const double pb = b.x * ax + b.y * ay;
    if (pa != pb) return pa < pb;
    if (a.y != b.y) return a.y < b.y;
    return a.x < b.x;
  });
  return ordered;
}

}  // namespace

ComponentLabeling label_components(const BinaryLayout& a) {
  ComponentLabeling out;
  out.width = a.width;
  out.height = a.height;
  out.labels.assign(a.size(), 0);
  UnionFind uf;
  uf.make();  // slot 0 reserved for background

  // First pass: provisional labels, merging with the already-visited
  // neighbors (left, upper-left, up, upper-right).
  constexpr std::array<std::pair<int, int>, 4> prior{{{-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};
  for (int y = 0; y < a.height; ++y) {
    for (int x = 0; x < a.width; ++x) {
      if (!a.at(x, y)) continue;
      std::int32_t label = 0;
      for (const auto& [dx, dy] : prior) {
        const int nx = x + dx, ny = y + dy;
        if (!a.in_bounds(nx, ny) || !a.at(nx, ny)) continue;
        const std::int32_t other = out.labels[static_cast<std::size_t>(ny) * a.width + nx];
        if (label == 0)
          label = other;
        else
          uf.unite(label, other);
      }
      if (label == 0) label = uf.make();
      out.labels[static_cast<std::size_t>(y) * a.width + x] = label;
    }
  }

  // Second pass: compress to dense labels in raster-scan first-touch order.
  std::vector<std::int32_t> dense(uf.parent.size(), 0);
  std::int32_t next = 0;
  for (std::size_t i = 0; i < out.labels.size(); ++i) {
    if (!out.labels[i]) continue;
    const std::int32_t root = uf.find(out.labels[i]);
    if (!dense[root]) dense[root] = ++next;
    out.labels[i] = dense[root];
  }
  out.count = next;
  return out;
}

int delta_k(const BinaryLayout& a, const BinaryLayout& a_prime) {
  require_same_dims(a, a_prime, "topology");
  return label_components(a_prime).count - label_components(a).count;
}

std::string to_string(DefectClass cls) {
  switch (cls) {
    case DefectClass::none: return "none";
    case DefectClass::bridge: return "bridge";
    case DefectClass::burr: return "burr";
    case DefectClass::pinch: return "pinch";
    case DefectClass::contamination: return "contamination";
  }
  return "none";
}

DefectClass defect_class_from_string(const std::string& name) {
  if (name == "none") return DefectClass::none;
  if (name == "bridge") return DefectClass::bridge;
  if (name == "burr") return DefectClass::burr;
  if (name == "pinch") return DefectClass::pinch;
  if (name == "contamination") return DefectClass::contamination;
  throw Error("topology", "unknown-class", "no defect class named '" + name + "'");
}

double irregularity(const BinaryLayout& a, const BinaryLayout& a_prime, const Rect& window) {
  require_same_dims(a, a_prime, "topology");
  // The edit changes pixels only inside `window`, but the freshly exposed
  // fracture face consists of surviving foreground *adjacent* to a removed
  // pixel, which can sit one pixel past the window on every side.
  const Rect w = window.expanded(1).clipped(a.width, a.height);
  if (w.empty()) return 0.0;

  BinaryLayout fresh(a.width, a.height);
  bool any = false;
  for (int y = w.y0; y <= w.y1; ++y) {
    for (int x = w.x0; x <= w.x1; ++x) {
      if (is_boundary(a_prime, x, y) && !is_boundary(a, x, y)) {
        fresh.set(x, y, 1);
        any = true;
      }
    }
  }
  if (!any) return 0.0;

  const ComponentLabeling chains = label_components(fresh);
  std::vector<std::vector<Pixel>> by_chain(chains.count);
  for (int y = w.y0; y <= w.y1; ++y)
    for (int x = w.x0; x <= w.x1; ++x)
      if (fresh.at(x, y)) by_chain[chains.at(x, y) - 1].push_back(Pixel{x, y});

  double best = 0.0;
  for (const std::vector<Pixel>& chain : by_chain) {
    if (chain.size() < 2) continue;  // a single pixel has no arc
    const std::vector<Pixel> ordered = order_chain(chain);
    double arc = 0.0;
    for (std::size_t i = 1; i < ordered.size(); ++i) arc += dist(ordered[i - 1], ordered[i]);
    if (arc <= 0.0) continue;
    const double chord = dist(ordered.front(), ordered.back());
    best = std::max(best, std::max(0.0, 1.0 - chord / arc));
  }
  return best;
}

DefectClass classify(const BinaryLayout& a, const BinaryLayout& a_prime,
                     const PerturbationSpec& spec, const ClassifyConfig& cfg) {
  require_same_dims(a, a_prime, "topology");
  const int sigma = sigma_of(spec.kind);
  const int dk = delta_k(a, a_prime);
  if (sigma < 0 && dk > 0) {
    const Rect window = perturb_window(spec, a.width, a.height);
    if (irregularity(a, a_prime, window) >= cfg.min_irregularity) return DefectClass::pinch;
    return DefectClass::none;
  }
  if (sigma > 0 && dk < 0) return DefectClass::bridge;
  if (sigma > 0 && dk == 0 && symmetric_difference_area(a, a_prime) >= cfg.min_burr_area)
    return DefectClass::burr;
  return DefectClass::none;
}

}  // namespace litho
