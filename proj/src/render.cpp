#include "litho/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "litho/digest.hpp"
#include "litho/errors.hpp"
#include "litho/rng.hpp"

namespace litho {

namespace {

void validate(const RenderConfig& cfg, const BinaryLayout& a) {
  if (cfg.output_size < std::max(a.width, a.height))
    throw Error("render", "invalid-config", "output_size smaller than the layout");
  if (cfg.output_size <= 0) throw Error("render", "invalid-config", "non-positive output_size");
  if (!(cfg.scale > 0.0)) throw Error("render", "invalid-config", "non-positive scale");
  if (cfg.psf_sigma < 0.0) throw Error("render", "invalid-config", "negative psf_sigma");
  if (!(cfg.resist_threshold > 0.0 && cfg.resist_threshold < 1.0))
    throw Error("render", "invalid-config", "resist_threshold outside (0, 1)");
  if (cfg.noise_sigma < 0.0) throw Error("render", "invalid-config", "negative noise_sigma");
}

// Per-axis bilinear sampling plan: source index pair (i, i+1 clamped) and
// the weight of the upper tap.
struct Taps {
  std::vector<int> lo;
  std::vector<int> hi;
  std::vector<float> w;
};

Taps make_taps(int out_size, double scale, int src_size) {
  Taps t;
  t.lo.resize(out_size);
  t.hi.resize(out_size);
  t.w.resize(out_size);
  for (int i = 0; i < out_size; ++i) {
    double s = (i + 0.5) / scale - 0.5;
    s = std::clamp(s, 0.0, static_cast<double>(src_size - 1));
    const int lo = static_cast<int>(std::floor(s));
    t.lo[i] = lo;
    t.hi[i] = std::min(lo + 1, src_size - 1);
    t.w[i] = static_cast<float>(s - lo);
  }
  return t;
}

struct OutputWindow {
  int x0, y0, x1, y1;
  bool empty() const { return x1 < x0 || y1 < y0; }
};

OutputWindow scale_window(const Rect& layout_window, double scale, int out_w, int out_h) {
  OutputWindow w{0, 0, -1, -1};
  if (layout_window.empty()) return w;
  w.x0 = std::max(0, static_cast<int>(std::floor(layout_window.x0 * scale)));
  w.y0 = std::max(0, static_cast<int>(std::floor(layout_window.y0 * scale)));
  w.x1 = std::min(out_w - 1, static_cast<int>(std::ceil((layout_window.x1 + 1) * scale)) - 1);
  w.y1 = std::min(out_h - 1, static_cast<int>(std::ceil((layout_window.y1 + 1) * scale)) - 1);
  return w;
}

std::vector<std::pair<int, int>> boundary_in_window(const BinaryLayout& a,
                                                    const OutputWindow& w) {
  std::vector<std::pair<int, int>> pts;
  for (int y = w.y0; y <= w.y1; ++y) {
    for (int x = w.x0; x <= w.x1; ++x) {
      if (!a.at(x, y)) continue;
      const bool edge = x == 0 || y == 0 || x == a.width - 1 || y == a.height - 1 ||
                        !a.at(x - 1, y) || !a.at(x + 1, y) || !a.at(x, y - 1) ||
                        !a.at(x, y + 1);
      if (edge) pts.emplace_back(x, y);
    }
  }
  return pts;
}

}  // namespace

std::vector<double> make_gaussian_kernel(double sigma) {
  if (sigma < 0.0) throw Error("render", "invalid-config", "negative sigma");
  if (sigma == 0.0) return {1.0};
  const int radius = static_cast<int>(std::ceil(4.0 * sigma));
  std::vector<double> taps(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma));
    taps[static_cast<std::size_t>(i + radius)] = v;
    sum += v;
  }
  for (double& v : taps) v /= sum;
  return taps;
}

std::string render_config_hash(const RenderConfig& cfg) {
  nlohmann::json j;
  j["output_size"] = cfg.output_size;
  j["scale"] = cfg.scale;
  j["psf_sigma"] = cfg.psf_sigma;
  j["resist_threshold"] = cfg.resist_threshold;
  j["noise_sigma"] = cfg.noise_sigma;
  return sha256_hex(j.dump());
}

RenderedImage render(const BinaryLayout& a, const RenderConfig& cfg, std::uint64_t noise_seed,
                     const std::string& source_id) {
  validate(cfg, a);
  const int n = cfg.output_size;
  RenderedImage img;
  img.width = n;
  img.height = n;
  img.source_id = source_id;
  img.config_hash = render_config_hash(cfg);
  img.gray.assign(static_cast<std::size_t>(n) * n, 0.0f);

  const Taps tx = make_taps(n, cfg.scale, a.width);
  const Taps ty = make_taps(n, cfg.scale, a.height);

#pragma omp parallel for schedule(static)
  for (int y = 0; y < n; ++y) {
    const std::uint8_t* row0 = a.pixels.data() + static_cast<std::size_t>(ty.lo[y]) * a.width;
    const std::uint8_t* row1 = a.pixels.data() + static_cast<std::size_t>(ty.hi[y]) * a.width;
    const float wy = ty.w[y];
    float* dst = img.gray.data() + static_cast<std::size_t>(y) * n;
    for (int x = 0; x < n; ++x) {
      const float wx = tx.w[x];
      const float top = (1.0f - wx) * row0[tx.lo[x]] + wx * row0[tx.hi[x]];
      const float bot = (1.0f - wx) * row1[tx.lo[x]] + wx * row1[tx.hi[x]];
      dst[x] = (1.0f - wy) * top + wy * bot;
    }
  }

  if (cfg.psf_sigma > 0.0) {
    const std::vector<double> kernel = make_gaussian_kernel(cfg.psf_sigma);
    const int radius = static_cast<int>(kernel.size() / 2);
    std::vector<float> tmp(img.gray.size());
    // Horizontal pass, clamp-to-edge.
#pragma omp parallel for schedule(static)
    for (int y = 0; y < n; ++y) {
      const float* src = img.gray.data() + static_cast<std::size_t>(y) * n;
      float* dst = tmp.data() + static_cast<std::size_t>(y) * n;
      for (int x = 0; x < n; ++x) {
        double acc = 0.0;
        for (int k = -radius; k <= radius; ++k)
          acc += kernel[static_cast<std::size_t>(k + radius)] *
                 src[std::clamp(x + k, 0, n - 1)];
        dst[x] = static_cast<float>(acc);
      }
    }
    // Vertical pass.
#pragma omp parallel for schedule(static)
    for (int x = 0; x < n; ++x) {
      for (int y = 0; y < n; ++y) {
        double acc = 0.0;
        for (int k = -radius; k <= radius; ++k)
          acc += kernel[static_cast<std::size_t>(k + radius)] *
                 tmp[static_cast<std::size_t>(std::clamp(y + k, 0, n - 1)) * n + x];
        img.gray[static_cast<std::size_t>(y) * n + x] = static_cast<float>(acc);
      }
    }
  }

  if (cfg.noise_sigma > 0.0) {
#pragma omp parallel for schedule(static)
    for (int y = 0; y < n; ++y) {
      // Row-derived stream: deterministic regardless of thread count.
      Rng rng(SeedMixer(noise_seed).absorb(static_cast<std::uint64_t>(y)).finish());
      float* dst = img.gray.data() + static_cast<std::size_t>(y) * n;
      for (int x = 0; x < n; ++x) {
        const double v = dst[x] + cfg.noise_sigma * rng.gaussian();
        dst[x] = static_cast<float>(std::clamp(v, 0.0, 1.0));
      }
    }
  }

  img.binary = BinaryLayout(n, n);
  const float thr = static_cast<float>(cfg.resist_threshold);
  for (std::size_t i = 0; i < img.gray.size(); ++i)
    img.binary.pixels[i] = img.gray[i] >= thr ? 1 : 0;
  return img;
}

double measure_epe(const BinaryLayout& b_binary, const BinaryLayout& bprime_binary,
                   const Rect& layout_window, const RenderConfig& cfg) {
  require_same_dims(b_binary, bprime_binary, "render");
  const OutputWindow w =
      scale_window(layout_window, cfg.scale, b_binary.width, b_binary.height);
  if (w.empty()) throw Error("render", "window-empty", "window has no pixels");
  const std::vector<std::pair<int, int>> from = boundary_in_window(b_binary, w);
  const std::vector<std::pair<int, int>> to = boundary_in_window(bprime_binary, w);
  if (from.empty() || to.empty())
    throw Error("render", "window-empty", "no boundary pixels inside the window");
  double worst_sq = 0.0;
  for (const auto& [px, py] : from) {
    double best_sq = std::numeric_limits<double>::max();
    for (const auto& [qx, qy] : to) {
      const double dx = px - qx, dy = py - qy;
      const double d = dx * dx + dy * dy;
      if (d < best_sq) best_sq = d;
      if (best_sq == 0.0) break;
    }
    worst_sq = std::max(worst_sq, best_sq);
  }
  return std::sqrt(worst_sq);
}

double measure_epe(const RenderedImage& b, const RenderedImage& b_prime,
                   const DefectRecord& record, const RenderConfig& cfg) {
  const int layout_w = static_cast<int>(std::lround(b.width / cfg.scale));
  const int layout_h = static_cast<int>(std::lround(b.height / cfg.scale));
  const Rect window = perturb_window(record.spec, layout_w, layout_h);
  return measure_epe(b.binary, b_prime.binary, window, cfg);
}

}  // namespace litho
