#include <doctest.h>

#include "ktg/moves.hpp"

using namespace ktg;

namespace {

std::string src(const std::string& rel) { return std::string(KTG_SOURCE_DIR) + "/" + rel; }
GraphDiagram corpus(const std::string& rel) { return load_diagram(src("corpus/" + rel)); }

std::vector<std::string> corpus_files() {
  return {"links/unknot.ktg", "links/kink_pos.ktg", "links/kink_neg.ktg",
          "links/hopf.ktg",   "links/trefoil.ktg",  "links/r2link.ktg",
          "links/r2unknot.ktg", "links/poked_trefoil.ktg", "ktg/theta.ktg", "ktg/trefoil_theta.ktg",
          "ktg/cube.ktg"};
}

void check_valid(const GraphDiagram& d, const std::string& ctx) {
  auto rep = validate_diagram(d);
  INFO(ctx << "\n" << rep.to_string() << serialize_diagram(d));
  REQUIRE(rep.ok());
}

// Applies every enumerated site of (kind, dir) and checks validity, the
// crossing-count delta, and apply-then-inverse involutivity.
void exercise(const GraphDiagram& d, MoveKind kind, MoveDir dir, const std::string& ctx,
              int* site_count = nullptr) {
  auto sites = enumerate_move_sites(d, kind, -1, dir);
  if (site_count) *site_count = static_cast<int>(sites.size());
  std::string orig_key = diagram_canonical_key(d);
  for (const auto& m : sites) {
    INFO(ctx << " " << m.to_string());
    GraphDiagram moved = apply_move(d, m);
    check_valid(moved, ctx + " " + m.to_string());
    CHECK(moved.crossing_count() == d.crossing_count() + crossing_delta(m));
    auto inv = find_inverse_site(d, moved, m);
    REQUIRE(inv.has_value());
    CHECK(diagram_canonical_key(apply_move(moved, *inv)) == orig_key);
  }
}

}  // namespace

TEST_CASE("moves: omega1 apply sites count edge x side x chirality") {
  auto theta = corpus("ktg/theta.ktg");
  auto sites = enumerate_move_sites(theta, MoveKind::Omega1);
  CHECK(sites.size() == 12);  // 3 edges x 2 sides x 2 chiralities

  auto unknot = corpus("links/unknot.ktg");
  auto loop_sites = enumerate_move_sites(unknot, MoveKind::Omega1);
  CHECK(loop_sites.size() == 2);  // free loop: chirality only
}

TEST_CASE("moves: omega1 kink on the unknot produces the bundled kink diagrams") {
  auto unknot = corpus("links/unknot.ktg");
  auto sites = enumerate_move_sites(unknot, MoveKind::Omega1);
  REQUIRE(sites.size() == 2);
  bool saw_pos = false, saw_neg = false;
  for (const auto& m : sites) {
    auto moved = apply_move(unknot, m);
    check_valid(moved, "kinked unknot");
    CHECK(moved.crossing_count() == 1);
    if (diagram_canonical_key(moved) == diagram_canonical_key(corpus("links/kink_pos.ktg")))
      saw_pos = true;
    if (diagram_canonical_key(moved) == diagram_canonical_key(corpus("links/kink_neg.ktg")))
      saw_neg = true;
  }
  CHECK(saw_pos);
  CHECK(saw_neg);
}

TEST_CASE("moves: omega1 inverse removes the kink") {
  // The isolated kink has two self-edges, so either can be read as the loop.
  auto kink = corpus("links/kink_pos.ktg");
  auto sites = enumerate_move_sites(kink, MoveKind::Omega1, -1, MoveDir::Inverse);
  REQUIRE(sites.size() == 2);
  for (const auto& m : sites) {
    auto moved = apply_move(kink, m);
    CHECK(moved.crossing_count() == 0);
    CHECK(moved.loops_pos + moved.loops_neg == 1);
  }
}

TEST_CASE("moves: omega2 inverse sites") {
  // Hopf has no cancelable bigon; the poked diagrams each have one.
  CHECK(enumerate_move_sites(corpus("links/hopf.ktg"), MoveKind::Omega2, -1, MoveDir::Inverse)
            .empty());
  // r2link is doubly symmetric: all four of its faces are cancelable bigons.
  CHECK(enumerate_move_sites(corpus("links/r2link.ktg"), MoveKind::Omega2, -1, MoveDir::Inverse)
            .size() == 4);
  CHECK(enumerate_move_sites(corpus("links/r2unknot.ktg"), MoveKind::Omega2, -1,
                             MoveDir::Inverse)
            .size() == 1);
}

TEST_CASE("moves: omega2 inverse cancels the poked unknot to a loop") {
  auto d = corpus("links/r2unknot.ktg");
  auto sites = enumerate_move_sites(d, MoveKind::Omega2, -1, MoveDir::Inverse);
  REQUIRE(sites.size() == 1);
  auto moved = apply_move(d, sites[0]);
  check_valid(moved, "canceled r2unknot");
  CHECK(moved.crossing_count() == 0);
  CHECK(moved.loops_pos + moved.loops_neg == 1);
}

TEST_CASE("moves: omega5 has no sites without vertices; omega4 needs adjacency") {
  auto tref = corpus("links/trefoil.ktg");
  CHECK(enumerate_move_sites(tref, MoveKind::Omega5).empty());
  CHECK(enumerate_move_sites(tref, MoveKind::Omega4).empty());
  auto theta = corpus("ktg/theta.ktg");
  CHECK(enumerate_move_sites(theta, MoveKind::Omega5).size() == 12);  // 2 vertices x 3 x 2
  CHECK(enumerate_move_sites(theta, MoveKind::Omega4).empty());       // no crossings
  auto tt = corpus("ktg/trefoil_theta.ktg");
  CHECK_FALSE(enumerate_move_sites(tt, MoveKind::Omega4).empty());
}

TEST_CASE("moves: identity move") {
  auto theta = corpus("ktg/theta.ktg");
  auto sites = enumerate_move_sites(theta, MoveKind::Identity);
  REQUIRE(sites.size() == 1);
  CHECK(diagram_canonical_key(apply_move(theta, sites[0])) == diagram_canonical_key(theta));
}

TEST_CASE("moves: omega3 slides on the poked trefoil") {
  // The alternating trefoil has no uniformly-over triangle side; the frozen
  // double-poked diagram has two.
  auto tref = corpus("links/trefoil.ktg");
  CHECK(enumerate_move_sites(tref, MoveKind::Omega3).empty());
  auto poked = corpus("links/poked_trefoil.ktg");
  int n3 = 0;
  exercise(poked, MoveKind::Omega3, MoveDir::Apply, "poked trefoil omega3", &n3);
  CHECK(n3 == 2);
}

TEST_CASE("moves: involutivity and validity across the corpus") {
  for (const auto& rel : corpus_files()) {
    auto d = corpus(rel);
    for (MoveKind kind : {MoveKind::Omega1, MoveKind::Omega2, MoveKind::Omega3,
                          MoveKind::Omega4, MoveKind::Omega5}) {
      for (MoveDir dir : {MoveDir::Apply, MoveDir::Inverse}) {
        exercise(d, kind, dir, rel + " " + move_kind_name(kind));
      }
    }
  }
}

TEST_CASE("moves: omega4 slide across the theta gadget round-trips") {
  auto tt = corpus("ktg/trefoil_theta.ktg");
  int napply = 0;
  exercise(tt, MoveKind::Omega4, MoveDir::Apply, "trefoil_theta omega4", &napply);
  CHECK(napply > 0);
}

TEST_CASE("moves: omega5 twist then untwist on the cube") {
  auto cube = corpus("ktg/cube.ktg");
  auto sites = enumerate_move_sites(cube, MoveKind::Omega5);
  CHECK(sites.size() == 48);  // 8 vertices x 3 corners x 2 chiralities
  auto m = sites[0];
  auto moved = apply_move(cube, m);
  check_valid(moved, "twisted cube");
  auto inv_sites = enumerate_move_sites(moved, MoveKind::Omega5, -1, MoveDir::Inverse);
  CHECK(inv_sites.size() == 1);
}

TEST_CASE("moves: kind and variant names parse") {
  MoveKind k;
  CHECK(parse_move_kind("omega3", k));
  CHECK(k == MoveKind::Omega3);
  CHECK(parse_move_kind("Ω4", k));
  CHECK(k == MoveKind::Omega4);
  CHECK(parse_move_kind("O5", k));
  CHECK(k == MoveKind::Omega5);
  CHECK_FALSE(parse_move_kind("omega9", k));
}

TEST_CASE("moves: golden before/after pairs per variant") {
  struct G {
    MoveKind kind;
    int variant;
  };
  std::vector<G> entries;
  for (int v = 0; v < 4; ++v) entries.push_back({MoveKind::Omega1, v});
  for (MoveKind k : {MoveKind::Omega2, MoveKind::Omega3, MoveKind::Omega4, MoveKind::Omega5})
    for (int v = 0; v < 2; ++v) entries.push_back({k, v});
  for (const auto& g : entries) {
    std::string tag =
        std::string(move_kind_name(g.kind)) + "_" + variant_name(g.kind, g.variant);
    INFO(tag);
    auto before = load_diagram(src("tests/golden/" + tag + "_before.ktg"));
    auto after = load_diagram(src("tests/golden/" + tag + "_after.ktg"));
    auto sites = enumerate_move_sites(before, g.kind, g.variant);
    REQUIRE_FALSE(sites.empty());
    // The fixture was produced from the first enumerated site.
    auto moved = apply_move(before, sites.front());
    CHECK(diagram_canonical_key(moved) == diagram_canonical_key(after));
    CHECK(after.crossing_count() == before.crossing_count() + crossing_delta(sites.front()));
  }
}
