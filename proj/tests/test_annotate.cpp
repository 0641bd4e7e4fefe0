#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "litho/annotate.hpp"
#include "litho/reference.hpp"
#include "litho/rng.hpp"
#include "test_support.hpp"

using litho::AnnotateConfig;
using litho::AnnotationInstance;
using litho::BinaryLayout;
using litho::DefectClass;
using litho::DefectRecord;
using litho::Rle;
using litho::testing::parse_grid;
using litho::testing::random_layout;

namespace {

DefectRecord record_of(DefectClass cls) {
  DefectRecord record;
  record.id = "x00-tst-000";
  record.base_layout_id = "x00";
  record.cls = cls;
  return record;
}

}  // namespace

TEST_CASE("an all-background mask encodes to a single total-size run") {
  const Rle rle = litho::rle_encode(BinaryLayout(4, 4));
  CHECK(rle.width == 4);
  CHECK(rle.height == 4);
  CHECK(rle.counts == std::vector<std::int64_t>{16});
}

TEST_CASE("an all-foreground mask encodes as zero background then everything") {
  const Rle rle = litho::rle_encode(BinaryLayout(4, 4, 1));
  CHECK(rle.counts == std::vector<std::int64_t>{0, 16});
}

TEST_CASE("encoding walks columns top to bottom, column by column") {
  // 3x2 mask with foreground at (0,1) and (2,0):
  // column 0: bg, fg -> runs 1,1; column 1: bg,bg; column 2: fg,bg
  const auto mask = parse_grid(R"(
      ..#
      #..
  )");
  const Rle rle = litho::rle_encode(mask);
  CHECK(rle.counts == std::vector<std::int64_t>{1, 1, 2, 1, 1});
}

TEST_CASE("a thousand random masks round-trip the codec losslessly") {
  litho::Rng rng(20);
  for (int it = 0; it < 1000; ++it) {
    const int w = 1 + static_cast<int>(rng.uniform_int(0, 19));
    const int h = 1 + static_cast<int>(rng.uniform_int(0, 19));
    const auto mask = random_layout(rng, w, h, rng.uniform01());
    const Rle rle = litho::rle_encode(mask);
    CHECK(litho::rle_decode(rle) == mask);
    // text form round-trips too
    const Rle reparsed = litho::rle_from_string(litho::rle_to_string(rle));
    CHECK(reparsed.width == rle.width);
    CHECK(reparsed.height == rle.height);
    CHECK(reparsed.counts == rle.counts);
    CHECK(litho::rle_decode(reparsed) == mask);
  }
}

TEST_CASE("decoding rejects inconsistent run totals") {
  Rle bad;
  bad.width = 4;
  bad.height = 4;
  bad.counts = {10};  // sums to 10, not 16
  CHECK_THROWS_AS(litho::rle_decode(bad), litho::Error);
  bad.counts = {20};
  CHECK_THROWS_AS(litho::rle_decode(bad), litho::Error);
  bad.counts = {-1, 17};
  CHECK_THROWS_AS(litho::rle_decode(bad), litho::Error);
  CHECK_THROWS_AS(litho::rle_from_string("4 4 banana"), litho::Error);
  CHECK_THROWS_AS(litho::rle_from_string("4"), litho::Error);
}

TEST_CASE("differencing identical images yields an empty mask") {
  litho::Rng rng(21);
  const auto b = random_layout(rng, 32, 32, 0.5);
  CHECK(litho::foreground_area(litho::diff_mask(b, b)) == 0);
}

TEST_CASE("differencing an added block isolates exactly that block") {
  BinaryLayout b(64, 64);
  for (int y = 10; y <= 20; ++y)
    for (int x = 0; x < 64; ++x) b.set(x, y, 1);
  auto bp = b;
  for (int y = 30; y <= 34; ++y)
    for (int x = 40; x <= 44; ++x) bp.set(x, y, 1);
  const auto diff = litho::diff_mask(b, bp);
  CHECK(litho::foreground_area(diff) == 25);
  for (int y = 30; y <= 34; ++y)
    for (int x = 40; x <= 44; ++x) CHECK(diff.at(x, y) == 1);
}

TEST_CASE("the difference equals the set-identity union minus intersection") {
  litho::Rng rng(22);
  for (int it = 0; it < 100; ++it) {
    const auto b = random_layout(rng, 48, 48, 0.5);
    const auto bp = random_layout(rng, 48, 48, 0.5);
    const auto diff = litho::diff_mask(b, bp);
    BinaryLayout expected(48, 48);
    for (int y = 0; y < 48; ++y)
      for (int x = 0; x < 48; ++x) {
        const bool in_union = b.at(x, y) || bp.at(x, y);
        const bool in_both = b.at(x, y) && bp.at(x, y);
        expected.set(x, y, in_union && !in_both ? 1 : 0);
      }
    CHECK(diff == expected);
  }
}

TEST_CASE("differencing rejects mismatched dimensions") {
  CHECK_THROWS_AS(litho::diff_mask(BinaryLayout(4, 4), BinaryLayout(4, 5)), litho::Error);
}

TEST_CASE("a single blob becomes one instance with a tight box") {
  BinaryLayout diff(100, 100);
  for (int y = 40; y <= 49; ++y)
    for (int x = 20; x <= 24; ++x) diff.set(x, y, 1);
  const auto result =
      litho::extract_instances(diff, record_of(DefectClass::bridge), "img-1", AnnotateConfig{});
  REQUIRE(result.instances.size() == 1);
  CHECK(result.discarded == 0);
  const AnnotationInstance& inst = result.instances[0];
  CHECK(inst.instance_id == 1);
  CHECK(inst.image_id == "img-1");
  CHECK(inst.cls == DefectClass::bridge);
  CHECK(inst.bbox_x == 20);
  CHECK(inst.bbox_y == 40);
  CHECK(inst.bbox_w == 5);
  CHECK(inst.bbox_h == 10);
  CHECK(inst.area == 50);
  CHECK(litho::rle_decode(inst.rle) == diff);
}

TEST_CASE("a severing pinch annotates the removed region, not the fragments") {
  // a line cut in the middle: the diff is the removed slab only
  BinaryLayout b(64, 64);
  for (int y = 30; y <= 33; ++y)
    for (int x = 0; x < 64; ++x) b.set(x, y, 1);
  auto bp = b;
  for (int y = 30; y <= 33; ++y)
    for (int x = 28; x <= 35; ++x) bp.set(x, y, 0);
  REQUIRE(litho::reference::count_components_flood(bp) == 2);

  const auto diff = litho::diff_mask(b, bp);
  const auto result =
      litho::extract_instances(diff, record_of(DefectClass::pinch), "img-2", AnnotateConfig{});
  REQUIRE(result.instances.size() == 1);  // one removed region, two fragments ignored
  CHECK(result.instances[0].cls == DefectClass::pinch);
  CHECK(result.instances[0].area == 8 * 4);
  CHECK(result.instances[0].bbox_x == 28);
  CHECK(result.instances[0].bbox_w == 8);
}

TEST_CASE("sub-threshold speckle is dropped and counted") {
  BinaryLayout diff(64, 64);
  for (int y = 10; y <= 19; ++y)
    for (int x = 10; x <= 19; ++x) diff.set(x, y, 1);  // 100-px blob
  diff.set(40, 40, 1);
  diff.set(41, 40, 1);  // 2-px speckle below the default min_area of 3
  const auto result =
      litho::extract_instances(diff, record_of(DefectClass::burr), "img-3", AnnotateConfig{});
  REQUIRE(result.instances.size() == 1);
  CHECK(result.discarded == 1);
  CHECK(result.instances[0].area == 100);

  AnnotateConfig keep_all;
  keep_all.min_area = 1;
  const auto relaxed = litho::extract_instances(diff, record_of(DefectClass::burr), "img-3",
                                                keep_all);
  CHECK(relaxed.instances.size() == 2);
  CHECK(relaxed.discarded == 0);
}

TEST_CASE("an empty or fully sub-threshold diff raises empty-annotation") {
  const BinaryLayout empty(32, 32);
  CHECK_THROWS_AS(
      litho::extract_instances(empty, record_of(DefectClass::pinch), "img-4", AnnotateConfig{}),
      litho::Error);

  BinaryLayout speckle_only(32, 32);
  speckle_only.set(5, 5, 1);
  try {
    litho::extract_instances(speckle_only, record_of(DefectClass::pinch), "img-4",
                             AnnotateConfig{});
    CHECK(false);
  } catch (const litho::Error& e) {
    CHECK(e.module_name() == std::string("annotate"));
    CHECK(e.code() == std::string("empty-annotation"));
  }
}

TEST_CASE("instance masks partition the diff minus discarded speckle") {
  litho::Rng rng(23);
  for (int it = 0; it < 50; ++it) {
    const auto diff = random_layout(rng, 48, 48, 0.12);
    litho::ExtractResult result;
    try {
      result = litho::extract_instances(diff, record_of(DefectClass::bridge), "img",
                                        AnnotateConfig{});
    } catch (const litho::Error&) {
      continue;  // everything sub-threshold
    }
    BinaryLayout covered(48, 48);
    std::int64_t total_area = 0;
    for (const AnnotationInstance& inst : result.instances) {
      const auto mask = litho::rle_decode(inst.rle);
      CHECK(litho::is_subset(mask, diff));  // mask never exceeds the diff
      // bbox is the exact extent of this instance's pixels
      int min_x = 48, min_y = 48, max_x = -1, max_y = -1;
      for (int y = 0; y < 48; ++y)
        for (int x = 0; x < 48; ++x)
          if (mask.at(x, y)) {
            min_x = std::min(min_x, x);
            min_y = std::min(min_y, y);
            max_x = std::max(max_x, x);
            max_y = std::max(max_y, y);
            CHECK(covered.at(x, y) == 0);  // instances are disjoint
            covered.set(x, y, 1);
          }
      CHECK(inst.bbox_x == min_x);
      CHECK(inst.bbox_y == min_y);
      CHECK(inst.bbox_w == max_x - min_x + 1);
      CHECK(inst.bbox_h == max_y - min_y + 1);
      CHECK(inst.area == litho::foreground_area(mask));
      CHECK(inst.area >= 3);
      total_area += inst.area;
    }
    // instance ids are 1..n in order
    for (std::size_t i = 0; i < result.instances.size(); ++i)
      CHECK(result.instances[i].instance_id == static_cast<int>(i) + 1);
    // covered pixels + discarded components account for the whole diff
    CHECK(total_area <= litho::foreground_area(diff));
    if (result.discarded == 0) CHECK(total_area == litho::foreground_area(diff));
  }
}
