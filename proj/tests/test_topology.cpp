#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "litho/morphology.hpp"
#include "litho/reference.hpp"
#include "litho/rng.hpp"
#include "litho/topology.hpp"
#include "test_support.hpp"

using litho::BinaryLayout;
using litho::ClassifyConfig;
using litho::DefectClass;
using litho::PerturbationSpec;
using litho::PerturbKind;
using litho::Rect;
using litho::StructuringElement;
using litho::testing::parse_grid;
using litho::testing::random_layout;

TEST_CASE("labeling an empty layout yields zero components") {
  CHECK(litho::label_components(BinaryLayout(16, 16)).count == 0);
  CHECK(litho::label_components(BinaryLayout(0, 0)).count == 0);
}

TEST_CASE("diagonal-touching pixels form one component under 8-connectivity") {
  BinaryLayout a(32, 32);
  a.set(10, 10, 1);
  a.set(11, 11, 1);
  const auto labeling = litho::label_components(a);
  CHECK(labeling.count == 1);
  CHECK(labeling.at(10, 10) == labeling.at(11, 11));
}

TEST_CASE("anti-diagonal staircases and separated blocks label correctly") {
  const auto a = parse_grid(R"(
      #....#..
      .#..#...
      ..##....
      ........
      ##....##
      ##....##
  )");
  const auto labeling = litho::label_components(a);
  CHECK(labeling.count == 3);  // staircase V, left block, right block
  // raster-scan first-touch numbering: V starts at (0,0) → 1, then the blocks
  CHECK(labeling.at(0, 0) == 1);
  CHECK(labeling.at(5, 0) == 1);
  CHECK(labeling.at(2, 2) == 1);
  CHECK(labeling.at(0, 4) == 2);
  CHECK(labeling.at(7, 5) == 3);
}

TEST_CASE("labels are dense, deterministic, and match the flood-fill oracle") {
  litho::Rng rng(11);
  for (int it = 0; it < 500; ++it) {
    const double density = 0.2 + 0.6 * rng.uniform01();
    const auto a = random_layout(rng, 64, 64, density);
    const auto labeling = litho::label_components(a);
    int flood_count = 0;
    const auto flood = litho::reference::label_flood(a, &flood_count);
    CHECK(labeling.count == flood_count);
    // both number components by raster-scan first touch, so labels agree exactly
    CHECK(labeling.labels == flood);
  }
}

TEST_CASE("component count change is zero for identical layouts") {
  litho::Rng rng(12);
  const auto a = random_layout(rng, 32, 32, 0.5);
  CHECK(litho::delta_k(a, a) == 0);
}

TEST_CASE("component count change rejects mismatched dimensions") {
  CHECK_THROWS_AS(litho::delta_k(BinaryLayout(4, 4), BinaryLayout(4, 5)), litho::Error);
}

TEST_CASE("cutting one line raises the count; joining two lines lowers it") {
  // vertical 4-px-wide line cut in the middle by footprint erosion
  BinaryLayout line(32, 32);
  for (int y = 0; y < 32; ++y)
    for (int x = 14; x <= 17; ++x) line.set(x, y, 1);
  PerturbationSpec cut;
  cut.kind = PerturbKind::erosion;
  cut.se = StructuringElement::make_square(4);
  cut.tx = 15;
  cut.ty = 16;
  const auto cut_result = litho::perturb(line, cut);
  CHECK(litho::delta_k(line, cut_result) == +1);

  // two horizontal lines joined by footprint dilation
  BinaryLayout pair(32, 32);
  for (int x = 0; x < 32; ++x) {
    for (int y = 4; y <= 7; ++y) pair.set(x, y, 1);
    for (int y = 14; y <= 17; ++y) pair.set(x, y, 1);
  }
  PerturbationSpec join;
  join.kind = PerturbKind::dilation;
  join.se = StructuringElement::make_square(4);
  join.tx = 16;
  join.ty = 11;
  const auto join_result = litho::perturb(pair, join);
  CHECK(litho::delta_k(pair, join_result) == -1);
}

TEST_CASE("a perfectly straight cut has zero irregularity") {
  // vertical bar cut by a square SE: the fresh fracture faces are straight
  BinaryLayout bar(32, 32);
  for (int y = 0; y < 32; ++y)
    for (int x = 12; x <= 19; ++x) bar.set(x, y, 1);
  PerturbationSpec spec;
  spec.kind = PerturbKind::erosion;
  spec.se = StructuringElement::make_square(3);
  spec.tx = 15;
  spec.ty = 15;
  const auto cut = litho::perturb(bar, spec);
  const Rect window = litho::perturb_window(spec, bar.width, bar.height);
  CHECK(litho::irregularity(bar, cut, window) == doctest::Approx(0.0));
}

TEST_CASE("a diamond cut exposes a V-profile scoring 1 - 1/sqrt(2)") {
  // Horizontal bar occupying rows 10..20; diamond(4) erosion centered on the
  // bar's top row carves a V whose fresh boundary runs from (tx-4, 10) down to
  // (tx, 14) and back up: chord 8, arc 8*sqrt(2).
  BinaryLayout bar(40, 40);
  for (int y = 10; y <= 20; ++y)
    for (int x = 0; x < 40; ++x) bar.set(x, y, 1);
  PerturbationSpec spec;
  spec.kind = PerturbKind::erosion;
  spec.se = StructuringElement::make_diamond(4);
  spec.tx = 20;
  spec.ty = 10;
  const auto cut = litho::perturb(bar, spec);
  const Rect window = litho::perturb_window(spec, bar.width, bar.height);
  const double score = litho::irregularity(bar, cut, window);
  CHECK(score == doctest::Approx(1.0 - 1.0 / std::sqrt(2.0)).epsilon(1e-9));
  CHECK(score == doctest::Approx(0.2929).epsilon(1e-3));
}

TEST_CASE("irregularity is zero when nothing changed inside the window") {
  litho::Rng rng(13);
  const auto a = random_layout(rng, 24, 24, 0.4);
  CHECK(litho::irregularity(a, a, Rect{4, 4, 12, 12}) == doctest::Approx(0.0));
}

TEST_CASE("classification follows the sign and connectivity predicates") {
  // bridge: dilation that merges two components
  BinaryLayout pair(32, 32);
  for (int x = 0; x < 32; ++x) {
    for (int y = 4; y <= 7; ++y) pair.set(x, y, 1);
    for (int y = 14; y <= 17; ++y) pair.set(x, y, 1);
  }
  PerturbationSpec join;
  join.kind = PerturbKind::dilation;
  join.se = StructuringElement::make_square(4);
  join.tx = 16;
  join.ty = 11;
  const auto joined = litho::perturb(pair, join);
  CHECK(litho::classify(pair, joined, join, ClassifyConfig{}) == DefectClass::bridge);

  // burr: dilation into free space attached to one component, count unchanged
  BinaryLayout line(32, 32);
  for (int x = 0; x < 32; ++x)
    for (int y = 14; y <= 17; ++y) line.set(x, y, 1);
  PerturbationSpec bump;
  bump.kind = PerturbKind::dilation;
  bump.se = StructuringElement::make_square(2);
  bump.tx = 16;
  bump.ty = 13;  // protrudes above the top edge
  const auto bumped = litho::perturb(line, bump);
  CHECK(litho::delta_k(line, bumped) == 0);
  CHECK(litho::symmetric_difference_area(line, bumped) >= 4);
  CHECK(litho::classify(line, bumped, bump, ClassifyConfig{}) == DefectClass::burr);

  // pinch: erosion that splits one component
  BinaryLayout bar(32, 32);
  for (int y = 0; y < 32; ++y)
    for (int x = 14; x <= 17; ++x) bar.set(x, y, 1);
  PerturbationSpec cut;
  cut.kind = PerturbKind::erosion;
  cut.se = StructuringElement::make_square(4);
  cut.tx = 15;
  cut.ty = 16;
  const auto split = litho::perturb(bar, cut);
  CHECK(litho::classify(bar, split, cut, ClassifyConfig{}) == DefectClass::pinch);

  // thinning without a split is not a defect
  PerturbationSpec graze;
  graze.kind = PerturbKind::erosion;
  graze.se = StructuringElement::make_square(1);
  graze.tx = 14;
  graze.ty = 16;  // nibbles the left edge only
  const auto grazed = litho::perturb(bar, graze);
  CHECK(litho::delta_k(bar, grazed) == 0);
  CHECK(litho::classify(bar, grazed, graze, ClassifyConfig{}) == DefectClass::none);

  // a dilation that changes nothing (inside existing foreground) is not a burr
  PerturbationSpec noop;
  noop.kind = PerturbKind::dilation;
  noop.se = StructuringElement::make_square(1);
  noop.tx = 15;
  noop.ty = 16;
  const auto same = litho::perturb(bar, noop);
  CHECK(same == bar);
  CHECK(litho::classify(bar, same, noop, ClassifyConfig{}) == DefectClass::none);
}

TEST_CASE("a tiny protrusion below the burr area threshold is not a burr") {
  BinaryLayout line(32, 32);
  for (int x = 0; x < 32; ++x)
    for (int y = 14; y <= 17; ++y) line.set(x, y, 1);
  // custom 3-offset element adds at most 3 pixels above the edge
  PerturbationSpec bump;
  bump.kind = PerturbKind::dilation;
  bump.se = StructuringElement::from_offsets({{0, 0}, {0, 1}, {0, -1}});
  bump.tx = 16;
  bump.ty = 13;
  const auto bumped = litho::perturb(line, bump);
  const long diff = litho::symmetric_difference_area(line, bumped);
  CHECK(diff > 0);
  CHECK(diff < 4);
  CHECK(litho::classify(line, bumped, bump, ClassifyConfig{}) == DefectClass::none);
  ClassifyConfig relaxed;
  relaxed.min_burr_area = 1;
  CHECK(litho::classify(line, bumped, bump, relaxed) == DefectClass::burr);
}

TEST_CASE("a strict irregularity threshold rejects straight-faced pinches") {
  BinaryLayout bar(32, 32);
  for (int y = 0; y < 32; ++y)
    for (int x = 14; x <= 17; ++x) bar.set(x, y, 1);
  PerturbationSpec cut;
  cut.kind = PerturbKind::erosion;
  cut.se = StructuringElement::make_square(4);
  cut.tx = 15;
  cut.ty = 16;
  const auto split = litho::perturb(bar, cut);
  CHECK(litho::classify(bar, split, cut, ClassifyConfig{}) == DefectClass::pinch);
  ClassifyConfig strict;
  strict.min_irregularity = 0.25;
  CHECK(litho::classify(bar, split, cut, strict) == DefectClass::none);

  // the diamond cut of the V-profile example survives the same threshold
  BinaryLayout wide(40, 40);
  for (int y = 10; y <= 20; ++y)
    for (int x = 0; x < 40; ++x) wide.set(x, y, 1);
  PerturbationSpec vee;
  vee.kind = PerturbKind::erosion;
  vee.se = StructuringElement::make_diamond(6);
  vee.tx = 20;
  vee.ty = 15;
  const auto veed = litho::perturb(wide, vee);
  REQUIRE(litho::delta_k(wide, veed) == +1);
  CHECK(litho::classify(wide, veed, vee, strict) == DefectClass::pinch);
}

TEST_CASE("classification ignores pixels outside the perturbation window") {
  litho::Rng rng(14);
  BinaryLayout pair(32, 32);
  for (int x = 0; x < 32; ++x) {
    for (int y = 4; y <= 7; ++y) pair.set(x, y, 1);
    for (int y = 14; y <= 17; ++y) pair.set(x, y, 1);
  }
  PerturbationSpec join;
  join.kind = PerturbKind::dilation;
  join.se = StructuringElement::make_square(4);
  join.tx = 16;
  join.ty = 11;
  const auto joined = litho::perturb(pair, join);
  const Rect window = litho::perturb_window(join, pair.width, pair.height);
  REQUIRE(litho::classify(pair, joined, join, ClassifyConfig{}) == DefectClass::bridge);

  // flip far-away pixels identically in both layouts: class must not change
  for (int it = 0; it < 50; ++it) {
    auto a = pair;
    auto b = joined;
    for (int j = 0; j < 10; ++j) {
      const int x = static_cast<int>(rng.uniform_int(0, 31));
      const int y = static_cast<int>(rng.uniform_int(0, 31));
      if (window.expanded(2).contains(x, y)) continue;
      const std::uint8_t v = rng.uniform_int(0, 1) ? 1 : 0;
      a.set(x, y, v);
      b.set(x, y, v);
    }
    if (litho::delta_k(a, b) < 0)  // far pixels may merge into either line
      CHECK(litho::classify(a, b, join, ClassifyConfig{}) == DefectClass::bridge);
  }
}

TEST_CASE("pinch and bridge are mutually exclusive by construction") {
  litho::Rng rng(15);
  for (int it = 0; it < 100; ++it) {
    const auto a = random_layout(rng, 32, 32, 0.5);
    PerturbationSpec spec;
    spec.kind = (it % 2 == 0) ? PerturbKind::dilation : PerturbKind::erosion;
    spec.se = StructuringElement::make_square(1 + static_cast<int>(rng.uniform_int(0, 3)));
    spec.tx = static_cast<int>(rng.uniform_int(0, 31));
    spec.ty = static_cast<int>(rng.uniform_int(0, 31));
    const auto out = litho::perturb(a, spec);
    const DefectClass cls = litho::classify(a, out, spec, ClassifyConfig{});
    if (spec.kind == PerturbKind::dilation)
      CHECK(cls != DefectClass::pinch);
    else
      CHECK((cls == DefectClass::pinch || cls == DefectClass::none));
    if (cls == DefectClass::bridge) CHECK(litho::delta_k(a, out) < 0);
    if (cls == DefectClass::burr) CHECK(litho::delta_k(a, out) == 0);
    if (cls == DefectClass::pinch) CHECK(litho::delta_k(a, out) > 0);
  }
}

TEST_CASE("defect class names round-trip through strings") {
  for (DefectClass cls : {DefectClass::none, DefectClass::bridge, DefectClass::burr,
                          DefectClass::pinch, DefectClass::contamination})
    CHECK(litho::defect_class_from_string(litho::to_string(cls)) == cls);
  CHECK_THROWS_AS(litho::defect_class_from_string("scratch"), litho::Error);
}
