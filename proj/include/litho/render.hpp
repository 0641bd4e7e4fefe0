#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "litho/grid.hpp"
#include "litho/injection.hpp"

namespace litho {

// Proxy imaging chain: bilinear upscale -> truncated Gaussian blur ->
// optional additive noise -> threshold.
struct RenderConfig {
  int output_size = 700;
  double scale = 700.0 / 128.0;   // layout-to-image magnification
  double psf_sigma = 3.0;         // blur sigma in output pixels
  double resist_threshold = 0.5;  // normalized intensity in (0, 1)
  double noise_sigma = 0.0;       // normalized intensity; 0 disables noise
};

struct RenderedImage {
  int width = 0;
  int height = 0;
  std::vector<float> gray;  // normalized intensities in [0, 1], row-major
  BinaryLayout binary;      // gray >= resist_threshold
  std::string source_id;
  std::string config_hash;
};

// Normalized 1-D Gaussian taps over [-ceil(4*sigma), +ceil(4*sigma)];
// degenerates to {1} for sigma = 0.
std::vector<double> make_gaussian_kernel(double sigma);

// Canonical digest of a render configuration, recorded as image provenance.
std::string render_config_hash(const RenderConfig& cfg);

// Renders a layout.  Deterministic given (a, cfg, noise_seed) and invariant
// to thread count.  Throws Error("render", "invalid-config") when cfg
// violates its invariants or the layout exceeds output_size.
RenderedImage render(const BinaryLayout& a, const RenderConfig& cfg,
                     std::uint64_t noise_seed = 0, const std::string& source_id = "");

// Directed Hausdorff distance, in output pixels, from the boundary of
// b_binary to the boundary of bprime_binary, both restricted to
// layout_window scaled by cfg.scale.  Throws Error("render", "window-empty")
// when either restricted boundary set is empty.
double measure_epe(const BinaryLayout& b_binary, const BinaryLayout& bprime_binary,
                   const Rect& layout_window, const RenderConfig& cfg);

// Same, with the window taken from the record's perturbation (layout
// dimensions recovered as round(output_size / scale)).
double measure_epe(const RenderedImage& b, const RenderedImage& b_prime,
                   const DefectRecord& record, const RenderConfig& cfg);

}  // namespace litho
