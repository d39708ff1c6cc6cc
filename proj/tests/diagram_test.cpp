#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "ktg/diagram.hpp"

using namespace ktg;

namespace {

std::string corpus(const std::string& rel) {
  return std::string(KTG_SOURCE_DIR) + "/corpus/" + rel;
}

GraphDiagram load(const std::string& rel) { return load_diagram(corpus(rel)); }

// Independent face count: orbits of next∘partner, written directly against
// the dart arrays rather than through euler_check.
int count_faces(const GraphDiagram& d) {
  std::vector<char> seen(d.darts.size(), 0);
  int faces = 0;
  for (DartId s = 0; s < static_cast<DartId>(d.darts.size()); ++s) {
    if (seen[s]) continue;
    ++faces;
    DartId x = s;
    do {
      seen[x] = 1;
      x = d.next(d.darts[x].partner);
    } while (x != s);
  }
  return faces;
}

GraphDiagram permuted(const GraphDiagram& d, std::mt19937& rng) {
  // Random relabeling of nodes and darts, preserving structure.
  std::vector<NodeId> nperm(d.nodes.size());
  std::vector<DartId> dperm(d.darts.size());
  for (size_t i = 0; i < nperm.size(); ++i) nperm[i] = static_cast<NodeId>(i);
  for (size_t i = 0; i < dperm.size(); ++i) dperm[i] = static_cast<DartId>(i);
  std::shuffle(nperm.begin(), nperm.end(), rng);
  std::shuffle(dperm.begin(), dperm.end(), rng);
  GraphDiagram out;
  out.nodes.resize(d.nodes.size());
  out.darts.resize(d.darts.size());
  out.loops_pos = d.loops_pos;
  out.loops_neg = d.loops_neg;
  for (NodeId n = 0; n < static_cast<NodeId>(d.nodes.size()); ++n) {
    auto& dst = out.nodes[nperm[n]];
    dst.kind = d.nodes[n].kind;
    dst.darts.clear();
    for (DartId x : d.nodes[n].darts) dst.darts.push_back(dperm[x]);
  }
  for (DartId x = 0; x < static_cast<DartId>(d.darts.size()); ++x) {
    auto& dst = out.darts[dperm[x]];
    dst.node = nperm[d.darts[x].node];
    dst.slot = d.darts[x].slot;
    dst.partner = dperm[d.darts[x].partner];
    dst.dir = d.darts[x].dir;
  }
  return out;
}

}  // namespace

TEST_CASE("diagram: theta parses, validates, and has three faces") {
  auto d = load("ktg/theta.ktg");
  REQUIRE(d.nodes.size() == 2);
  REQUIRE(d.darts.size() == 6);
  CHECK(validate_diagram(d).ok());
  auto eu = euler_check(d);
  REQUIRE(eu.size() == 1);
  CHECK(eu[0].vertices == 2);
  CHECK(eu[0].edges == 3);
  CHECK(eu[0].faces == 3);
  CHECK(eu[0].genus == 0);
}

TEST_CASE("diagram: corpus files are valid and planar") {
  for (const char* rel :
       {"links/unknot.ktg", "links/kink_pos.ktg", "links/kink_neg.ktg", "links/hopf.ktg",
        "links/trefoil.ktg", "links/r2link.ktg", "ktg/theta.ktg", "ktg/trefoil_theta.ktg",
        "ktg/cube.ktg", "big/four_trefoil_thetas.ktg"}) {
    INFO(rel);
    auto d = load(rel);
    auto rep = validate_diagram(d);
    INFO(rep.to_string());
    CHECK(rep.ok());
    for (const auto& ce : euler_check(d)) CHECK(ce.genus == 0);
  }
}

TEST_CASE("diagram: bundled mutations are rejected, one per invariant") {
  auto expect_violation = [&](const std::string& rel, const std::string& code) {
    auto d = load(rel);
    auto rep = validate_diagram(d);
    INFO(rel << " -> " << rep.to_string());
    CHECK_FALSE(rep.ok());
    bool found = false;
    for (const auto& v : rep.items)
      if (v.code == code) found = true;
    CHECK(found);
  };
  expect_violation("invalid/mixed_vertex.ktg", "mixed-orientation");
  expect_violation("invalid/bad_crossing.ktg", "crossing-strand");
  expect_violation("invalid/nonplanar_theta.ktg", "non-planar");
  expect_violation("invalid/handcuff.ktg", "mixed-orientation");
  CHECK_THROWS_AS(load("invalid/parse_error_arc.ktg"), ParseError);
}

TEST_CASE("diagram: euler handles free loops and the torus theta") {
  auto loop = parse_diagram("O[+]\n");
  auto eu = euler_check(loop);
  REQUIRE(eu.size() == 1);
  CHECK(eu[0].vertices == 0);
  CHECK(eu[0].edges == 0);
  CHECK(eu[0].faces == 2);
  CHECK(eu[0].genus == 0);

  auto torus = load("invalid/nonplanar_theta.ktg");
  auto eu2 = euler_check(torus);
  REQUIRE(eu2.size() == 1);
  // V - E + F = 2 - 3 + 1 = 0: genus 1 (face orbit enumerated by hand).
  CHECK(eu2[0].faces == 1);
  CHECK(eu2[0].genus == 1);
}

TEST_CASE("diagram: hopf faces are four bigons") {
  auto d = load("links/hopf.ktg");
  auto fs = faces(d);
  REQUIRE(fs.size() == 4);
  for (const auto& f : fs) CHECK(f.size() == 2);
  CHECK(count_faces(d) == 4);
}

TEST_CASE("diagram: crossing signs") {
  auto hopf = load("links/hopf.ktg");
  CHECK(hopf.crossing_positive(0));
  CHECK(hopf.crossing_positive(1));
  auto kp = load("links/kink_pos.ktg");
  CHECK(kp.crossing_positive(0));
  auto kn = load("links/kink_neg.ktg");
  CHECK_FALSE(kn.crossing_positive(0));
  auto tref = load("links/trefoil.ktg");
  for (NodeId n = 0; n < 3; ++n) CHECK(tref.crossing_positive(n));
}

TEST_CASE("diagram: genus invariant under relabeling") {
  std::mt19937 rng(11);
  for (const char* rel : {"links/trefoil.ktg", "ktg/trefoil_theta.ktg"}) {
    auto d = load(rel);
    int f0 = count_faces(d);
    for (int i = 0; i < 50; ++i) {
      auto p = permuted(d, rng);
      CHECK(count_faces(p) == f0);
      CHECK(diagram_canonical_key(p) == diagram_canonical_key(d));
    }
  }
}

TEST_CASE("diagram: serializer round-trips") {
  for (const char* rel : {"links/trefoil.ktg", "ktg/cube.ktg", "links/unknot.ktg"}) {
    auto d = load(rel);
    auto d2 = parse_diagram(serialize_diagram(d));
    CHECK(diagram_canonical_key(d) == diagram_canonical_key(d2));
  }
}

TEST_CASE("diagram: orientation inference is deterministic for unforced components") {
  // A single closed over-strand loop around nothing: no constraints at all.
  auto d = parse_diagram("O[-]\n");
  CHECK(d.loops_neg == 1);
  // Explicit marks are honored.
  auto e = parse_diagram("V+[1,2,3]\nV-[1,3,2]\n");
  for (DartId x : e.nodes[0].darts) CHECK(e.darts[x].dir == Dir::Out);
}
