#include "ktg/moves.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace ktg {

const char* move_kind_name(MoveKind k) {
  switch (k) {
    case MoveKind::Omega1: return "omega1";
    case MoveKind::Omega2: return "omega2";
    case MoveKind::Omega3: return "omega3";
    case MoveKind::Omega4: return "omega4";
    case MoveKind::Omega5: return "omega5";
    case MoveKind::Identity: return "identity";
  }
  return "?";
}

bool parse_move_kind(const std::string& s, MoveKind& out) {
  std::string t = s;
  if (t.rfind("Ω", 0) == 0) t = "omega" + t.substr(2);  // Ω prefix
  if (t.size() == 2 && (t[0] == 'O' || t[0] == 'o') && std::isdigit((unsigned char)t[1]))
    t = std::string("omega") + t[1];
  for (MoveKind k : {MoveKind::Omega1, MoveKind::Omega2, MoveKind::Omega3, MoveKind::Omega4,
                     MoveKind::Omega5, MoveKind::Identity})
    if (t == move_kind_name(k)) {
      out = k;
      return true;
    }
  return false;
}

int variant_count(MoveKind k) {
  switch (k) {
    case MoveKind::Omega1: return 4;
    case MoveKind::Identity: return 1;
    default: return 2;
  }
}

std::string variant_name(MoveKind k, int v) {
  static const char* o1[] = {"pos_left", "pos_right", "neg_left", "neg_right"};
  switch (k) {
    case MoveKind::Omega1: return o1[v & 3];
    case MoveKind::Omega2: return v == 0 ? "first_over" : "first_under";
    case MoveKind::Omega3: return v == 0 ? "slider_over" : "slider_under";
    case MoveKind::Omega4: return v == 0 ? "strand_over" : "strand_under";
    case MoveKind::Omega5: return v == 0 ? "pos_twist" : "neg_twist";
    case MoveKind::Identity: return "id";
  }
  return "?";
}

std::string MoveInstance::to_string() const {
  std::ostringstream os;
  os << move_kind_name(kind) << ":" << variant_name(kind, variant)
     << (dir == MoveDir::Apply ? ":apply" : ":inverse") << "@";
  auto side = [&](int loop_cls, int v) {
    if (loop_cls >= 0)
      os << "loop" << loop_cls << "." << v;
    else
      os << v;
  };
  side(a_loop, a);
  os << ",";
  side(b_loop, b);
  return os.str();
}

int crossing_delta(const MoveInstance& m) {
  int base = 0;
  switch (m.kind) {
    case MoveKind::Omega1: base = 1; break;
    case MoveKind::Omega2: base = 2; break;
    case MoveKind::Omega4: base = 1; break;
    case MoveKind::Omega5: base = 1; break;
    default: base = 0; break;
  }
  return m.dir == MoveDir::Apply ? base : -base;
}

// ---------------------------------------------------------------------------
// Editable diagram with 2-valent joints for alias-safe rewiring.

namespace {

constexpr int kJoint = -2;

struct Editor {
  struct ENode {
    int kind;  // DiagNodeKind value, kJoint, or -1 = removed
    std::vector<DartId> darts;
  };
  struct EDart {
    NodeId node = kNone;
    int slot = 0;
    DartId partner = kNone;
    Dir dir = Dir::Un;
    bool dead = false;
  };
  std::vector<ENode> nodes;
  std::vector<EDart> darts;
  int loops_pos, loops_neg;

  explicit Editor(const GraphDiagram& d) : loops_pos(d.loops_pos), loops_neg(d.loops_neg) {
    for (const auto& n : d.nodes) nodes.push_back({static_cast<int>(n.kind), n.darts});
    for (const auto& x : d.darts) darts.push_back({x.node, x.slot, x.partner, x.dir, false});
  }

  DartId port(NodeId n, int slot) const {
    const auto& ds = nodes[n].darts;
    int k = static_cast<int>(ds.size());
    return ds[static_cast<size_t>(((slot % k) + k) % k)];
  }
  DartId new_dart(NodeId n, int slot, Dir dir) {
    darts.push_back({n, slot, kNone, dir, false});
    return static_cast<DartId>(darts.size() - 1);
  }
  void repartner(DartId a, DartId b) {
    darts[a].partner = b;
    darts[b].partner = a;
  }

  // Splits the edge at dart a; afterwards a faces the joint's dart 0 and the
  // old partner faces dart 1.
  NodeId insert_joint(DartId a) {
    DartId b = darts[a].partner;
    NodeId j = static_cast<NodeId>(nodes.size());
    nodes.push_back({kJoint, {}});
    DartId j0 = new_dart(j, 0, opposite(darts[a].dir));
    DartId j1 = new_dart(j, 1, opposite(darts[b].dir));
    nodes[j].darts = {j0, j1};
    repartner(a, j0);
    repartner(j1, b);
    return j;
  }
  DartId jd(NodeId j, int i) const { return nodes[j].darts[static_cast<size_t>(i)]; }

  void remove_node(NodeId n) {
    for (DartId d : nodes[n].darts) darts[d].dead = true;
    nodes[n].kind = -1;
    nodes[n].darts.clear();
  }

  // Crossing from four ccw attachments; kNone entries get dangling darts
  // with the supplied dirs. The list is rotated so under_in_pos is slot 0.
  NodeId add_crossing(std::array<DartId, 4> attach, std::array<Dir, 4> dirs, int under_in_pos,
                      std::array<DartId, 4>* ports_out = nullptr) {
    NodeId c = static_cast<NodeId>(nodes.size());
    nodes.push_back({static_cast<int>(DiagNodeKind::Crossing), {}});
    std::array<DartId, 4> mine{};
    for (int i = 0; i < 4; ++i) {
      int pos = (under_in_pos + i) % 4;
      Dir dir = attach[static_cast<size_t>(pos)] != kNone
                    ? opposite(darts[attach[static_cast<size_t>(pos)]].dir)
                    : dirs[static_cast<size_t>(pos)];
      mine[static_cast<size_t>(pos)] = new_dart(c, i, dir);
      nodes[c].darts.push_back(mine[static_cast<size_t>(pos)]);
    }
    for (int i = 0; i < 4; ++i)
      if (attach[static_cast<size_t>(i)] != kNone)
        repartner(attach[static_cast<size_t>(i)], mine[static_cast<size_t>(i)]);
    if (ports_out) *ports_out = mine;
    return c;
  }

  // Removes n, rerouting the strands named by port pairs; arcs at unlisted
  // ports must be internal to n.
  void splice_out(NodeId n, const std::vector<std::pair<int, int>>& port_pairs) {
    std::vector<std::pair<DartId, DartId>> bonds;
    for (auto [p, q] : port_pairs) {
      NodeId jp = insert_joint(port(n, p));
      NodeId jq = insert_joint(port(n, q));
      bonds.push_back({jd(jp, 0), jd(jq, 0)});
    }
    remove_node(n);
    for (auto [a, b] : bonds) repartner(a, b);
  }

  GraphDiagram finish() {
    for (NodeId n = 0; n < static_cast<NodeId>(nodes.size()); ++n) {
      if (nodes[n].kind != kJoint) continue;
      DartId j0 = nodes[n].darts[0], j1 = nodes[n].darts[1];
      DartId x = darts[j0].partner, y = darts[j1].partner;
      if (x == j1) {
        ++loops_pos;  // closed chain of joints: free loop (recorded positive)
      } else {
        repartner(x, y);
      }
      nodes[n].kind = -1;
      darts[j0].dead = true;
      darts[j1].dead = true;
      nodes[n].darts.clear();
    }
    GraphDiagram out;
    std::vector<NodeId> nmap(nodes.size(), kNone);
    std::vector<DartId> dmap(darts.size(), kNone);
    for (NodeId n = 0; n < static_cast<NodeId>(nodes.size()); ++n) {
      if (nodes[n].kind < 0) continue;
      nmap[n] = static_cast<NodeId>(out.nodes.size());
      out.nodes.push_back({static_cast<DiagNodeKind>(nodes[n].kind), {}});
      int slot = 0;
      for (DartId d : nodes[n].darts) {
        dmap[d] = static_cast<DartId>(out.darts.size());
        out.darts.push_back({nmap[n], slot++, kNone, darts[d].dir});
        out.nodes[nmap[n]].darts.push_back(dmap[d]);
      }
    }
    for (DartId d = 0; d < static_cast<DartId>(darts.size()); ++d) {
      if (dmap[d] == kNone) continue;
      DartId p = darts[d].partner;
      if (darts[d].dead || p == kNone || dmap[p] == kNone)
        throw std::logic_error("move surgery left a dangling dart");
      out.darts[dmap[d]].partner = dmap[p];
    }
    out.loops_pos = loops_pos;
    out.loops_neg = loops_neg;
    return out;
  }
};

bool is_crossing(const GraphDiagram& d, NodeId n) {
  return d.nodes[n].kind == DiagNodeKind::Crossing;
}

std::invalid_argument bad_site(const MoveInstance& m, const std::string& why) {
  return std::invalid_argument("invalid move site " + m.to_string() + ": " + why);
}

// ---------------------------------------------------------------------------
// Omega1. Port templates: slot of the cut-edge tail piece (t), head piece
// (h), kink-loop exit (lo) and re-entry (li); slot 0 is the under-in port.

struct KinkTemplate {
  int t, h, lo, li;
};
constexpr KinkTemplate kKink[4] = {
    {0, 1, 2, 3},  // pos_left:  strand passes under first, loop on the left
    {3, 2, 1, 0},  // pos_right: strand passes over first, loop on the right
    {1, 2, 3, 0},  // neg_left:  strand passes over first, loop on the left
    {0, 3, 2, 1},  // neg_right: strand passes under first, loop on the right
};

GraphDiagram omega1_apply(const GraphDiagram& d, const MoveInstance& m) {
  Editor ed(d);
  const KinkTemplate& t = kKink[m.variant & 3];
  std::array<DartId, 4> attach{kNone, kNone, kNone, kNone};
  std::array<Dir, 4> dirs{};
  dirs[static_cast<size_t>(t.t)] = Dir::In;
  dirs[static_cast<size_t>(t.h)] = Dir::Out;
  dirs[static_cast<size_t>(t.lo)] = Dir::Out;
  dirs[static_cast<size_t>(t.li)] = Dir::In;
  if (m.a_loop >= 0) {
    int& count = m.a_loop == 0 ? ed.loops_pos : ed.loops_neg;
    if (count <= m.a) throw bad_site(m, "no such free loop");
    --count;
  } else {
    if (m.a < 0 || m.a >= static_cast<int>(d.darts.size())) throw bad_site(m, "no such dart");
    DartId da = m.a, db = d.darts[static_cast<size_t>(da)].partner;
    DartId dt = d.darts[static_cast<size_t>(da)].dir == Dir::Out ? da : db;
    DartId dh = dt == da ? db : da;
    attach[static_cast<size_t>(t.t)] = dt;
    attach[static_cast<size_t>(t.h)] = dh;
  }
  std::array<DartId, 4> ports{};
  ed.add_crossing(attach, dirs, 0, &ports);
  ed.repartner(ports[static_cast<size_t>(t.lo)], ports[static_cast<size_t>(t.li)]);
  if (m.a_loop >= 0)
    ed.repartner(ports[static_cast<size_t>(t.h)], ports[static_cast<size_t>(t.t)]);
  return ed.finish();
}

// Kink detection: a self-edge between rotation-adjacent slots (s, s+1)
// identifies the variant; a figure-eight crossing carries two.
std::vector<int> kink_variants_at(const GraphDiagram& d, NodeId n) {
  std::vector<int> out;
  if (!is_crossing(d, n)) return out;
  static const int variant_of_s[4] = {1, 3, 0, 2};  // loop at (s, s+1)
  for (int s = 0; s < 4; ++s) {
    DartId a = d.nodes[n].darts[static_cast<size_t>(s)];
    DartId b = d.nodes[n].darts[static_cast<size_t>((s + 1) % 4)];
    if (d.darts[a].partner == b) out.push_back(variant_of_s[s]);
  }
  return out;
}

GraphDiagram omega1_inverse(const GraphDiagram& d, const MoveInstance& m) {
  if (m.a < 0 || m.a >= static_cast<int>(d.nodes.size())) throw bad_site(m, "no such node");
  auto variants = kink_variants_at(d, m.a);
  if (std::find(variants.begin(), variants.end(), m.variant) == variants.end())
    throw bad_site(m, "not a kink of this variant");
  Editor ed(d);
  const KinkTemplate& t = kKink[static_cast<size_t>(m.variant & 3)];
  ed.splice_out(m.a, {{t.t, t.h}});
  return ed.finish();
}

// ---------------------------------------------------------------------------
// Omega2 apply: poke the strand of dart a across their common face over (or
// under) the strand of dart b. Geometry with face interior to the right of
// the arriving motion: a-strand pieces run east-west, b-strand pieces
// north-south; K1 carries the finger's outgoing leg, K2 the returning leg.
// Both new crossings keep rotation (E, N, W, S) counterclockwise.

GraphDiagram omega2_apply(const GraphDiagram& d, const MoveInstance& m) {
  bool a_edge = m.a_loop < 0, b_edge = m.b_loop < 0;
  DartId a = kNone, b = kNone, ap = kNone, bp = kNone;
  if (a_edge) {
    if (m.a < 0 || m.a >= static_cast<int>(d.darts.size())) throw bad_site(m, "no such dart");
    a = m.a;
    ap = d.darts[a].partner;
  }
  if (b_edge) {
    if (m.b < 0 || m.b >= static_cast<int>(d.darts.size())) throw bad_site(m, "no such dart");
    b = m.b;
    bp = d.darts[b].partner;
  }
  if (a_edge && b_edge) {
    if (a == b || a == bp) throw bad_site(m, "darts on one edge");
    DartId x = a;
    bool found = false;
    do {
      if (x == b) found = true;
      x = d.next(d.darts[x].partner);
    } while (x != a);
    if (!found) throw bad_site(m, "darts do not share a face");
  }
  bool self_poke = !a_edge && !b_edge && m.a_loop == m.b_loop && m.a == m.b;
  bool a_over = m.variant == 0;

  Editor ed(d);
  auto consume_loop = [&](int cls, int inst) {
    int& count = cls == 0 ? ed.loops_pos : ed.loops_neg;
    if (count <= inst) throw bad_site(m, "no such free loop");
    --count;
  };
  if (!a_edge) consume_loop(m.a_loop, m.a);
  if (!b_edge && !self_poke) consume_loop(m.b_loop, m.b);

  // The face interior lies to the LEFT of the arriving motion: with the
  // a-strand heading north along the east boundary the finger pokes west.
  // K1 (outgoing leg x b-strand) ccw ports (E, N, W, S): E toward a',
  // N toward K2, W toward the tip, S toward b. K2 (returning leg) ccw
  // ports: E toward a, N toward b', W toward the tip, S toward K1.
  // A free-loop side has its outer pieces fused: E-E (a side) or S-N
  // (b side). Loop flows are chosen In at the head piece.
  Dir a_dir = a_edge ? d.darts[static_cast<size_t>(a)].dir : Dir::In;
  Dir b_dir = b_edge ? d.darts[static_cast<size_t>(b)].dir : Dir::In;
  Dir ap_dir = opposite(a_dir);
  Dir bp_dir = opposite(b_dir);
  Dir k1e = opposite(ap_dir);
  Dir k1w = ap_dir;  // tip side continues the flow leaving K1
  Dir k2w = opposite(ap_dir);
  Dir k2e = opposite(a_dir);
  Dir k1n = b_dir;
  Dir k1s = opposite(b_dir);
  Dir k2n = opposite(bp_dir);
  Dir k2s = bp_dir;

  auto pick = [](bool cond, int p, int q) { return cond ? p : q; };
  int k1_under = a_over ? pick(b_dir == Dir::In, 1, 3) : pick(a_dir == Dir::In, 0, 2);
  int k2_under = a_over ? pick(b_dir == Dir::In, 1, 3) : pick(a_dir == Dir::In, 2, 0);

  std::array<DartId, 4> k1ports{}, k2ports{};
  ed.add_crossing({a_edge ? ap : kNone, kNone, kNone, b_edge ? b : kNone},
                  {k1e, k1n, k1w, k1s}, k1_under, &k1ports);
  ed.add_crossing({a_edge ? a : kNone, b_edge ? bp : kNone, kNone, kNone},
                  {k2e, k2n, k2w, k2s}, k2_under, &k2ports);
  ed.repartner(k1ports[2], k2ports[2]);  // tip of the finger
  ed.repartner(k2ports[3], k1ports[1]);  // middle piece of the b-strand
  if (self_poke) {
    // One closed curve clasping itself: the a-exit continues into the
    // b-entry and the b-exit closes back to the a-entry.
    ed.repartner(k2ports[0], k2ports[1]);
    ed.repartner(k1ports[3], k1ports[0]);
  } else {
    if (!a_edge) ed.repartner(k1ports[0], k2ports[0]);  // rest of the a-loop
    if (!b_edge) ed.repartner(k1ports[3], k2ports[1]);  // rest of the b-loop
  }
  return ed.finish();
}

// Omega2 inverse: cancel the bigon face anchored at dart m.a. Validity: two
// distinct crossings and one strand over at both ends.
bool omega2_bigon_info(const GraphDiagram& d, DartId x, DartId& y_out, bool& x_over) {
  DartId y = d.next(d.darts[x].partner);
  if (d.next(d.darts[y].partner) != x || y == x) return false;
  NodeId X = d.darts[x].node, Y = d.darts[y].node;
  if (X == Y || !is_crossing(d, X) || !is_crossing(d, Y)) return false;
  DartId xp = d.darts[x].partner;  // at Y
  bool over_at_X = d.darts[x].slot % 2 == 1;
  bool over_at_Y = d.darts[xp].slot % 2 == 1;
  if (over_at_X != over_at_Y) return false;
  y_out = y;
  x_over = over_at_X;
  return true;
}

GraphDiagram omega2_inverse(const GraphDiagram& d, const MoveInstance& m) {
  if (m.a < 0 || m.a >= static_cast<int>(d.darts.size())) throw bad_site(m, "no such dart");
  DartId y;
  bool x_over;
  if (!omega2_bigon_info(d, m.a, y, x_over)) throw bad_site(m, "not a cancelable bigon");
  NodeId X = d.darts[static_cast<size_t>(m.a)].node, Y = d.darts[y].node;
  Editor ed(d);
  ed.splice_out(X, {{0, 2}, {1, 3}});
  ed.splice_out(Y, {{0, 2}, {1, 3}});
  return ed.finish();
}

// ---------------------------------------------------------------------------
// Omega3: slide the fully-over (or fully-under) side of a triangle face
// across the opposite crossing. The three crossings keep their local frames;
// six arcs re-pair.

struct TriangleInfo {
  std::array<DartId, 3> orbit;   // face darts x0 -> x1 -> x2
  std::array<NodeId, 3> corner;  // node(x_i)
};

bool triangle_info(const GraphDiagram& d, DartId anchor, TriangleInfo& out) {
  DartId x0 = anchor;
  DartId x1 = d.next(d.darts[x0].partner);
  DartId x2 = d.next(d.darts[x1].partner);
  if (d.next(d.darts[x2].partner) != x0) return false;
  if (x1 == x0 || x2 == x0 || x1 == x2) return false;
  out.orbit = {x0, x1, x2};
  for (int i = 0; i < 3; ++i) {
    out.corner[static_cast<size_t>(i)] = d.darts[out.orbit[static_cast<size_t>(i)]].node;
    if (!is_crossing(d, out.corner[static_cast<size_t>(i)])) return false;
  }
  if (out.corner[0] == out.corner[1] || out.corner[1] == out.corner[2] ||
      out.corner[0] == out.corner[2])
    return false;
  return true;
}

// Side s of the triangle is edge(orbit[s]) from corner[s] to corner[s+1].
// Returns -1 (not valid), 0 (side strand over at both corners) or 1 (under).
int omega3_side_class(const GraphDiagram& d, const TriangleInfo& t, int s) {
  DartId xs = t.orbit[static_cast<size_t>(s)];
  DartId xsp = d.darts[xs].partner;
  bool over_near = d.darts[xs].slot % 2 == 1;
  bool over_far = d.darts[xsp].slot % 2 == 1;
  if (over_near != over_far) return -1;
  return over_near ? 0 : 1;
}

GraphDiagram omega3_apply(const GraphDiagram& d, const MoveInstance& m) {
  TriangleInfo t;
  if (m.a < 0 || m.a >= static_cast<int>(d.darts.size()) || !triangle_info(d, m.a, t))
    throw bad_site(m, "not a triangle of crossings");
  int s = m.b;
  if (s < 0 || s > 2) throw bad_site(m, "slider side out of range");
  int cls = omega3_side_class(d, t, s);
  if (cls < 0) throw bad_site(m, "slider strand is not uniformly over or under");
  if (cls != m.variant) throw bad_site(m, "variant mismatch");

  Editor ed(d);
  // Every side strand undergoes the same three-pair rewiring; the anchor
  // corner P and far corner W differ per side. With interior on the left of
  // the arriving motion: side s+1 anchors at its x-dart end, side s+2 and
  // the slider anchor at their partner-dart ends.
  struct StrandPorts {
    NodeId P, W;
    int sp_P, op_P, sp_W, op_W;
  };
  auto make = [&](DartId anchor_dart) {
    StrandPorts sp;
    sp.P = d.darts[anchor_dart].node;
    sp.sp_P = d.darts[anchor_dart].slot;
    sp.op_P = (sp.sp_P + 2) % 4;
    DartId far = d.darts[anchor_dart].partner;
    sp.W = d.darts[far].node;
    sp.sp_W = d.darts[far].slot;
    sp.op_W = (sp.sp_W + 2) % 4;
    return sp;
  };
  std::array<StrandPorts, 3> strands{
      make(t.orbit[static_cast<size_t>((s + 1) % 3)]),
      make(d.darts[t.orbit[static_cast<size_t>((s + 2) % 3)]].partner),
      make(d.darts[t.orbit[static_cast<size_t>(s)]].partner),
  };

  // All joints go in before any re-pairing so each captures its original
  // context arc.
  std::array<NodeId, 3> jP{}, jW{};
  for (size_t k = 0; k < 3; ++k) {
    jP[k] = ed.insert_joint(ed.port(strands[k].P, strands[k].op_P));
    jW[k] = ed.insert_joint(ed.port(strands[k].W, strands[k].op_W));
  }
  for (size_t k = 0; k < 3; ++k) {
    const auto& sp = strands[k];
    ed.repartner(ed.jd(jP[k], 0), ed.port(sp.W, sp.sp_W));
    ed.repartner(ed.port(sp.P, sp.op_P), ed.port(sp.W, sp.op_W));
    ed.repartner(ed.jd(jW[k], 0), ed.port(sp.P, sp.sp_P));
  }
  return ed.finish();
}

// ---------------------------------------------------------------------------
// Omega4. Apply: slide the transversal strand of crossing c across the
// vertex at the far end of the leg arc at port p. The strand leaves leg
// l1 = slot s and crosses the other two legs adjacent to the vertex.

GraphDiagram omega4_apply(const GraphDiagram& d, const MoveInstance& m) {
  NodeId c = m.a;
  int p = m.b;
  if (c < 0 || c >= static_cast<int>(d.nodes.size()) || !is_crossing(d, c) || p < 0 || p > 3)
    throw bad_site(m, "no such crossing port");
  DartId leg = d.nodes[static_cast<size_t>(c)].darts[static_cast<size_t>(p)];
  DartId vd = d.darts[leg].partner;
  NodeId v = d.darts[vd].node;
  if (is_crossing(d, v)) throw bad_site(m, "port does not lead to a vertex");
  int sv = d.darts[vd].slot;
  bool strand_over = p % 2 == 0;  // leg on the under route => strand over
  if ((strand_over ? 0 : 1) != m.variant) throw bad_site(m, "variant mismatch");
  bool source = d.nodes[static_cast<size_t>(v)].kind == DiagNodeKind::Source;

  Editor ed(d);
  NodeId j_e = ed.insert_joint(ed.port(c, p + 1));   // east strand context
  NodeId j_far = ed.insert_joint(ed.port(c, p + 2)); // leg continuation
  NodeId j_w = ed.insert_joint(ed.port(c, p + 3));   // west strand context
  NodeId j_x2 = ed.insert_joint(ed.port(v, sv + 1)); // leg l2 far side
  NodeId j_x3 = ed.insert_joint(ed.port(v, sv + 2)); // leg l3 far side
  ed.remove_node(c);
  // Straighten l1: vertex dart joins the old continuation.
  ed.repartner(ed.port(v, sv), ed.jd(j_far, 0));

  // c_SE = strand x l3, ccw ports (E, NNW, W, SSE); c_SW = strand x l2,
  // ccw ports (E, NNE, W, SSW). Under-in per role and flow.
  Dir se_e = opposite(ed.darts[static_cast<size_t>(ed.jd(j_e, 0))].dir);
  Dir se_w = opposite(se_e);
  Dir se_nnw = opposite(ed.darts[static_cast<size_t>(ed.port(v, sv + 2))].dir);
  Dir se_sse = opposite(se_nnw);
  int se_under = strand_over ? (source ? 1 : 3) : (se_e == Dir::In ? 0 : 2);
  std::array<DartId, 4> se_ports{};
  ed.add_crossing({ed.jd(j_e, 0), ed.port(v, sv + 2), kNone, ed.jd(j_x3, 0)},
                  {se_e, se_nnw, se_w, se_sse}, se_under, &se_ports);

  Dir sw_e = opposite(se_w);
  Dir sw_w = opposite(sw_e);
  Dir sw_nne = opposite(ed.darts[static_cast<size_t>(ed.port(v, sv + 1))].dir);
  Dir sw_ssw = opposite(sw_nne);
  int sw_under = strand_over ? (source ? 1 : 3) : (sw_e == Dir::In ? 0 : 2);
  std::array<DartId, 4> sw_ports{};
  ed.add_crossing({se_ports[2], ed.port(v, sv + 1), ed.jd(j_w, 0), ed.jd(j_x2, 0)},
                  {sw_e, sw_nne, sw_w, sw_ssw}, sw_under, &sw_ports);
  return ed.finish();
}

// Omega4 inverse pattern: corner (i, i+1) of vertex v closes a triangle face
// with two crossings; un-slide the strand across v onto leg i+2.
struct O4InverseInfo {
  NodeId cA, cB;
  int qA, qB;
  bool strand_over;
};

bool omega4_inverse_info(const GraphDiagram& d, NodeId v, int i, O4InverseInfo& out) {
  if (is_crossing(d, v)) return false;
  DartId vi = d.nodes[static_cast<size_t>(v)].darts[static_cast<size_t>(i % 3)];
  DartId vj = d.nodes[static_cast<size_t>(v)].darts[static_cast<size_t>((i + 1) % 3)];
  DartId a = d.darts[vi].partner, b = d.darts[vj].partner;
  NodeId cA = d.darts[a].node, cB = d.darts[b].node;
  if (!is_crossing(d, cA) || !is_crossing(d, cB) || cA == cB) return false;
  // Triangle face through the corner: vj -> cB.(qB+1) -> cA.qA -> vj.
  DartId x1 = vj;
  DartId x2 = d.next(d.darts[x1].partner);
  DartId x3 = d.next(d.darts[x2].partner);
  if (d.next(d.darts[x3].partner) != x1) return false;
  if (d.darts[x2].node != cB || d.darts[x3].node != cA) return false;
  out.cA = cA;
  out.cB = cB;
  out.qA = d.darts[a].slot;
  out.qB = d.darts[b].slot;
  bool over_A = out.qA % 2 == 0;  // leg on under route => strand over
  bool over_B = out.qB % 2 == 0;
  if (over_A != over_B) return false;
  // The strand must actually be the one passing both crossings: the triangle
  // side between cA and cB lies on it by construction of the face.
  out.strand_over = over_A;
  return true;
}

GraphDiagram omega4_inverse(const GraphDiagram& d, const MoveInstance& m) {
  NodeId v = m.a;
  int i = m.b;
  O4InverseInfo info;
  if (v < 0 || v >= static_cast<int>(d.nodes.size()) || i < 0 || i > 2 ||
      !omega4_inverse_info(d, v, i, info))
    throw bad_site(m, "not an unslide corner");
  if ((info.strand_over ? 0 : 1) != m.variant) throw bad_site(m, "variant mismatch");
  bool source = d.nodes[static_cast<size_t>(v)].kind == DiagNodeKind::Source;

  Editor ed(d);
  NodeId j_wA = ed.insert_joint(ed.port(info.cA, info.qA + 1));  // west strand context
  NodeId j_x2 = ed.insert_joint(ed.port(info.cA, info.qA + 2));  // leg i far side
  NodeId j_wB = ed.insert_joint(ed.port(info.cB, info.qB - 1));  // east strand context
  NodeId j_x3 = ed.insert_joint(ed.port(info.cB, info.qB + 2));  // leg i+1 far side
  NodeId j_z = ed.insert_joint(ed.port(v, i + 2));               // leg i+2 far side
  ed.remove_node(info.cA);
  ed.remove_node(info.cB);
  ed.repartner(ed.port(v, i), ed.jd(j_x2, 0));
  ed.repartner(ed.port(v, i + 1), ed.jd(j_x3, 0));

  // New crossing on leg i+2, ccw ports (toward v, E = east context,
  // N = leg continuation, W = west context).
  Dir c_s = opposite(ed.darts[static_cast<size_t>(ed.port(v, i + 2))].dir);
  Dir c_n = opposite(c_s);
  Dir c_e = opposite(ed.darts[static_cast<size_t>(ed.jd(j_wB, 0))].dir);
  Dir c_w = opposite(c_e);
  int under = info.strand_over ? (source ? 0 : 2) : (c_e == Dir::In ? 1 : 3);
  ed.add_crossing({ed.port(v, i + 2), ed.jd(j_wB, 0), ed.jd(j_z, 0), ed.jd(j_wA, 0)},
                  {c_s, c_e, c_n, c_w}, under);
  return ed.finish();
}

// ---------------------------------------------------------------------------
// Omega5: twist the two legs at a vertex corner around each other. Templates
// give the ccw attachment order (slot 0 = under-in) for each polarity and
// chirality; v_i/v_j are the corner legs, f_i/f_j their far continuations.

GraphDiagram omega5_apply(const GraphDiagram& d, const MoveInstance& m) {
  NodeId v = m.a;
  int i = m.b;
  if (v < 0 || v >= static_cast<int>(d.nodes.size()) || is_crossing(d, v) || i < 0 || i > 2)
    throw bad_site(m, "no such vertex corner");
  bool source = d.nodes[static_cast<size_t>(v)].kind == DiagNodeKind::Source;
  bool pos = m.variant == 0;

  Editor ed(d);
  NodeId j_fi = ed.insert_joint(ed.port(v, i));
  NodeId j_fj = ed.insert_joint(ed.port(v, i + 1));
  DartId vi = ed.port(v, i), vj = ed.port(v, i + 1);
  DartId fi = ed.jd(j_fi, 0), fj = ed.jd(j_fj, 0);

  std::array<DartId, 4> attach{};
  if (source && pos) attach = {vi, fi, fj, vj};
  if (source && !pos) attach = {vj, vi, fi, fj};
  if (!source && pos) attach = {fj, vj, vi, fi};
  if (!source && !pos) attach = {fi, fj, vj, vi};
  ed.add_crossing(attach, {Dir::Un, Dir::Un, Dir::Un, Dir::Un}, 0);
  return ed.finish();
}

// Omega5 inverse: recognize a twist crossing against the four templates.
struct O5InverseInfo {
  NodeId v;
  int corner;
  int variant;
  std::vector<std::pair<int, int>> pairs;  // splice pairs (v-port, f-port)
};

bool omega5_inverse_info(const GraphDiagram& d, NodeId k, O5InverseInfo& out) {
  if (!is_crossing(d, k)) return false;
  // Template: positions of (v_i, v_j, f_i, f_j) among slots 0..3.
  struct T {
    bool source;
    int variant;
    int vi, vj, fi, fj;
  };
  static const T tmpl[4] = {
      {true, 0, 0, 3, 1, 2},
      {true, 1, 1, 0, 2, 3},
      {false, 0, 2, 1, 3, 0},
      {false, 1, 3, 2, 0, 1},
  };
  for (const auto& t : tmpl) {
    DartId a = d.darts[d.nodes[static_cast<size_t>(k)].darts[static_cast<size_t>(t.vi)]].partner;
    DartId b = d.darts[d.nodes[static_cast<size_t>(k)].darts[static_cast<size_t>(t.vj)]].partner;
    NodeId v = d.darts[a].node;
    if (is_crossing(d, v) || d.darts[b].node != v) continue;
    bool source = d.nodes[static_cast<size_t>(v)].kind == DiagNodeKind::Source;
    if (source != t.source) continue;
    int si = d.darts[a].slot, sj = d.darts[b].slot;
    if ((si + 1) % 3 != sj) continue;
    out.v = v;
    out.corner = si;
    out.variant = t.variant;
    out.pairs = {{t.vi, t.fi}, {t.vj, t.fj}};
    return true;
  }
  return false;
}

GraphDiagram omega5_inverse(const GraphDiagram& d, const MoveInstance& m) {
  O5InverseInfo info;
  if (m.a < 0 || m.a >= static_cast<int>(d.nodes.size()) || !omega5_inverse_info(d, m.a, info))
    throw bad_site(m, "not a vertex twist");
  if (info.variant != m.variant) throw bad_site(m, "variant mismatch");
  Editor ed(d);
  ed.splice_out(m.a, info.pairs);
  return ed.finish();
}

}  // namespace

// ---------------------------------------------------------------------------

GraphDiagram apply_move(const GraphDiagram& d, const MoveInstance& m) {
  switch (m.kind) {
    case MoveKind::Identity: return d;
    case MoveKind::Omega1:
      return m.dir == MoveDir::Apply ? omega1_apply(d, m) : omega1_inverse(d, m);
    case MoveKind::Omega2:
      return m.dir == MoveDir::Apply ? omega2_apply(d, m) : omega2_inverse(d, m);
    case MoveKind::Omega3: return omega3_apply(d, m);
    case MoveKind::Omega4:
      return m.dir == MoveDir::Apply ? omega4_apply(d, m) : omega4_inverse(d, m);
    case MoveKind::Omega5:
      return m.dir == MoveDir::Apply ? omega5_apply(d, m) : omega5_inverse(d, m);
  }
  throw std::logic_error("unknown move kind");
}

std::vector<MoveInstance> enumerate_move_sites(const GraphDiagram& d, MoveKind kind, int variant,
                                               MoveDir dir) {
  std::vector<MoveInstance> out;
  auto want = [&](int v) { return variant < 0 || variant == v; };
  auto edge_anchors = [&d]() {
    std::vector<DartId> anchors;
    for (DartId x = 0; x < static_cast<DartId>(d.darts.size()); ++x)
      if (x < d.darts[x].partner) anchors.push_back(x);
    return anchors;
  };
  switch (kind) {
    case MoveKind::Identity:
      out.push_back({MoveKind::Identity, MoveDir::Apply, 0, -1, -1, -1, -1});
      break;
    case MoveKind::Omega1:
      if (dir == MoveDir::Apply) {
        for (DartId a : edge_anchors())
          for (int v = 0; v < 4; ++v)
            if (want(v)) out.push_back({kind, dir, v, a, -1, -1, -1});
        for (int cls = 0; cls < 2; ++cls) {
          int count = cls == 0 ? d.loops_pos : d.loops_neg;
          for (int inst = 0; inst < count; ++inst)
            for (int v : {0, 2})
              if (want(v)) {
                MoveInstance mi{kind, dir, v, inst, -1, cls, -1};
                out.push_back(mi);
              }
        }
      } else {
        for (NodeId n = 0; n < static_cast<NodeId>(d.nodes.size()); ++n)
          for (int v : kink_variants_at(d, n))
            if (want(v)) out.push_back({kind, dir, v, n, -1, -1, -1});
      }
      break;
    case MoveKind::Omega2:
      if (dir == MoveDir::Apply) {
        for (const auto& f : faces(d)) {
          for (DartId x : f)
            for (DartId y : f) {
              if (x == y || d.darts[x].partner == y) continue;
              for (int v = 0; v < 2; ++v)
                if (want(v)) out.push_back({kind, dir, v, x, y, -1, -1});
            }
        }
        // Free loops are placeless: they can poke over (or be poked by) any
        // strand, and pairs of loops can clasp.
        std::vector<std::pair<int, int>> loop_insts;
        for (int inst = 0; inst < d.loops_pos; ++inst) loop_insts.push_back({0, inst});
        for (int inst = 0; inst < d.loops_neg; ++inst) loop_insts.push_back({1, inst});
        for (auto [cls, inst] : loop_insts)
          for (DartId x = 0; x < static_cast<DartId>(d.darts.size()); ++x)
            for (int v = 0; v < 2; ++v) {
              if (!want(v)) continue;
              out.push_back({kind, dir, v, inst, x, cls, -1});  // loop over strand
              out.push_back({kind, dir, v, x, inst, -1, cls});  // strand over loop
            }
        for (auto [c1, i1] : loop_insts)
          for (auto [c2, i2] : loop_insts)
            for (int v = 0; v < 2; ++v)
              if (want(v)) out.push_back({kind, dir, v, i1, i2, c1, c2});
      } else {
        for (const auto& f : faces(d)) {
          if (f.size() != 2) continue;
          DartId y;
          bool x_over;
          if (!omega2_bigon_info(d, f[0], y, x_over)) continue;
          int v = x_over ? 0 : 1;
          if (want(v)) out.push_back({kind, dir, v, f[0], -1, -1, -1});
        }
      }
      break;
    case MoveKind::Omega3:
      for (const auto& f : faces(d)) {
        if (f.size() != 3) continue;
        TriangleInfo t;
        if (!triangle_info(d, f[0], t)) continue;
        for (int s = 0; s < 3; ++s) {
          int cls = omega3_side_class(d, t, s);
          if (cls >= 0 && want(cls)) out.push_back({kind, dir, cls, f[0], s, -1, -1});
        }
      }
      break;
    case MoveKind::Omega4:
      if (dir == MoveDir::Apply) {
        for (NodeId n = 0; n < static_cast<NodeId>(d.nodes.size()); ++n) {
          if (!is_crossing(d, n)) continue;
          for (int p = 0; p < 4; ++p) {
            DartId far = d.darts[d.nodes[n].darts[static_cast<size_t>(p)]].partner;
            if (is_crossing(d, d.darts[far].node)) continue;
            int v = p % 2 == 0 ? 0 : 1;
            if (want(v)) out.push_back({kind, dir, v, n, p, -1, -1});
          }
        }
      } else {
        for (NodeId n = 0; n < static_cast<NodeId>(d.nodes.size()); ++n) {
          if (is_crossing(d, n)) continue;
          for (int i = 0; i < 3; ++i) {
            O4InverseInfo info;
            if (!omega4_inverse_info(d, n, i, info)) continue;
            int v = info.strand_over ? 0 : 1;
            if (want(v)) out.push_back({kind, dir, v, n, i, -1, -1});
          }
        }
      }
      break;
    case MoveKind::Omega5:
      if (dir == MoveDir::Apply) {
        for (NodeId n = 0; n < static_cast<NodeId>(d.nodes.size()); ++n) {
          if (is_crossing(d, n)) continue;
          for (int i = 0; i < 3; ++i)
            for (int v = 0; v < 2; ++v)
              if (want(v)) out.push_back({kind, dir, v, n, i, -1, -1});
        }
      } else {
        for (NodeId n = 0; n < static_cast<NodeId>(d.nodes.size()); ++n) {
          O5InverseInfo info;
          if (!omega5_inverse_info(d, n, info)) continue;
          if (want(info.variant))
            out.push_back({kind, dir, info.variant, n, -1, -1, -1});
        }
      }
      break;
  }
  return out;
}

std::optional<MoveInstance> find_inverse_site(const GraphDiagram& original,
                                              const GraphDiagram& moved,
                                              const MoveInstance& m) {
  if (m.kind == MoveKind::Identity) return m;
  MoveDir inv_dir = m.dir == MoveDir::Apply ? MoveDir::Inverse : MoveDir::Apply;
  std::string want = diagram_canonical_key(original);
  // All variants: a loop kink collapses the side distinction, so the undoing
  // site may carry a different variant label.
  for (const auto& cand : enumerate_move_sites(moved, m.kind, -1, inv_dir)) {
    try {
      if (diagram_canonical_key(apply_move(moved, cand)) == want) return cand;
    } catch (const std::invalid_argument&) {
    }
  }
  return std::nullopt;
}

}  // namespace ktg
