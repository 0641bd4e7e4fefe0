#include "litho/annotate.hpp"

#include <algorithm>
#include <sstream>

#include "litho/errors.hpp"

namespace litho {

Rle rle_encode(const BinaryLayout& mask) {
  Rle rle;
  rle.width = mask.width;
  rle.height = mask.height;
  std::uint8_t current = 0;  // runs start with background
  std::int64_t run = 0;
  for (int x = 0; x < mask.width; ++x) {
    for (int y = 0; y < mask.height; ++y) {
      const std::uint8_t v = mask.at(x, y);
      if (v == current) {
        ++run;
      } else {
        rle.counts.push_back(run);
        current = v;
        run = 1;
      }
    }
  }
  rle.counts.push_back(run);
  return rle;
}

BinaryLayout rle_decode(const Rle& rle) {
  if (rle.width < 0 || rle.height < 0)
    throw Error("annotate", "malformed-rle", "negative dimensions");
  const std::int64_t total = static_cast<std::int64_t>(rle.width) * rle.height;
  std::int64_t sum = 0;
  for (const std::int64_t c : rle.counts) {
    if (c < 0) throw Error("annotate", "malformed-rle", "negative run length");
    sum += c;
  }
  if (sum != total)
    throw Error("annotate", "malformed-rle",
                "runs sum to " + std::to_string(sum) + ", expected " + std::to_string(total));
  BinaryLayout mask(rle.width, rle.height);
  std::int64_t pos = 0;
  std::uint8_t value = 0;
  for (const std::int64_t c : rle.counts) {
    if (value) {
      for (std::int64_t i = pos; i < pos + c; ++i) {
        const int x = static_cast<int>(i / rle.height);
        const int y = static_cast<int>(i % rle.height);
        mask.set(x, y, 1);
      }
    }
    pos += c;
    value ^= 1;
  }
  return mask;
}

std::string rle_to_string(const Rle& rle) {
  std::ostringstream out;
  out << rle.width << " " << rle.height;
  for (const std::int64_t c : rle.counts) out << " " << c;
  return out.str();
}

Rle rle_from_string(const std::string& text) {
  std::istringstream in(text);
  Rle rle;
  if (!(in >> rle.width >> rle.height))
    throw Error("annotate", "malformed-rle", "missing dimensions");
  std::int64_t c = 0;
  while (in >> c) rle.counts.push_back(c);
  if (!in.eof()) throw Error("annotate", "malformed-rle", "non-numeric run length");
  return rle;
}

BinaryLayout diff_mask(const BinaryLayout& b, const BinaryLayout& b_prime) {
  require_same_dims(b, b_prime, "annotate");
  BinaryLayout out(b.width, b.height);
  for (std::size_t i = 0; i < out.pixels.size(); ++i)
    out.pixels[i] = b.pixels[i] ^ b_prime.pixels[i];
  return out;
}

BinaryLayout diff_mask(const RenderedImage& b, const RenderedImage& b_prime) {
  return diff_mask(b.binary, b_prime.binary);
}

ExtractResult extract_instances(const BinaryLayout& diff, const DefectRecord& record,
                                const std::string& image_id, const AnnotateConfig& cfg) {
  const ComponentLabeling labeling = label_components(diff);
  struct Extent {
    int x0, y0, x1, y1;
    std::int64_t area;
  };
  std::vector<Extent> extents(static_cast<std::size_t>(labeling.count),
                              Extent{diff.width, diff.height, -1, -1, 0});
  for (int y = 0; y < diff.height; ++y) {
    for (int x = 0; x < diff.width; ++x) {
      const std::int32_t label = labeling.at(x, y);
      if (!label) continue;
      Extent& e = extents[static_cast<std::size_t>(label - 1)];
      e.x0 = std::min(e.x0, x);
      e.y0 = std::min(e.y0, y);
      e.x1 = std::max(e.x1, x);
      e.y1 = std::max(e.y1, y);
      ++e.area;
    }
  }

  ExtractResult result;
  int next_id = 1;
  for (std::int32_t label = 1; label <= labeling.count; ++label) {
    const Extent& e = extents[static_cast<std::size_t>(label - 1)];
    if (e.area < cfg.min_area) {
      ++result.discarded;
      continue;
    }
    AnnotationInstance inst;
    inst.instance_id = next_id++;
    inst.image_id = image_id;
    inst.cls = record.cls;
    inst.bbox_x = e.x0;
    inst.bbox_y = e.y0;
    inst.bbox_w = e.x1 - e.x0 + 1;
    inst.bbox_h = e.y1 - e.y0 + 1;
    inst.area = e.area;
    // Mask of this component alone, RLE-encoded at rest.
    BinaryLayout mask(diff.width, diff.height);
    for (int y = e.y0; y <= e.y1; ++y)
      for (int x = e.x0; x <= e.x1; ++x)
        if (labeling.at(x, y) == label) mask.set(x, y, 1);
    inst.rle = rle_encode(mask);
    result.instances.push_back(std::move(inst));
  }
  if (result.instances.empty())
    throw Error("annotate", "empty-annotation",
                "no component of area >= " + std::to_string(cfg.min_area) + " in image '" +
                    image_id + "'");
  return result;
}

}  // namespace litho
