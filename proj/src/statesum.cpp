#include "ktg/statesum.hpp"

#include <map>
#include <thread>

#include "fusion.hpp"

namespace ktg {

StateEnumerator::StateEnumerator(const GraphDiagram& d) : n_(d.crossing_count()) {
  if (n_ > 24) throw RuleError("diagram too large for state expansion (n > 24)");
  total_ = 1ull << n_;
}

bool StateEnumerator::next(StateSelector& out) {
  if (counter_ >= total_) return false;
  out.choice.assign(static_cast<size_t>(n_), 0);
  for (int i = 0; i < n_; ++i)
    out.choice[static_cast<size_t>(i)] =
        static_cast<uint8_t>((counter_ >> (n_ - 1 - i)) & 1ull);
  ++counter_;
  return true;
}

namespace {

std::string plain_label(const LabelSpec& spec) {
  switch (spec.kind) {
    case LabelSpec::None: return "";
    case LabelSpec::Token: return spec.text;
    case LabelSpec::Var:
      throw RuleError("label variables are not allowed in smoothing fragments");
  }
  return "";
}

}  // namespace

std::pair<Laurent, LabelTrigraph> resolve_state(const GraphDiagram& d, const StateSelector& s,
                                                const RuleSet& rs) {
  LabelTrigraph out;
  detail::Fuser fuser;
  Laurent coeff = Laurent::constant(1, rs.ring);
  bool oriented = rs.strands_oriented;

  // One socket per diagram dart: terminal for vertex darts, outer junction
  // socket for crossing ports. Arcs become pieces between these sockets.
  std::vector<int> socket_of(d.darts.size(), -1);

  int crossing_index = 0;
  for (NodeId n = 0; n < static_cast<NodeId>(d.nodes.size()); ++n) {
    const auto& nd = d.nodes[n];
    if (nd.kind == DiagNodeKind::Source || nd.kind == DiagNodeKind::Sink) {
      auto mapped = nd.kind == DiagNodeKind::Source ? rs.map_source : rs.map_sink;
      if (!mapped)
        throw RuleError("ruleset " + rs.name + " has no vertex mapping for " +
                        (nd.kind == DiagNodeKind::Source ? "source" : "sink") + " vertices");
      NodeId tn = static_cast<NodeId>(out.nodes.size());
      out.nodes.push_back({*mapped, {}});
      for (size_t slot = 0; slot < nd.darts.size(); ++slot) {
        DartId td = static_cast<DartId>(out.darts.size());
        Dir dir = oriented ? d.darts[nd.darts[slot]].dir : Dir::Un;
        out.darts.push_back({tn, static_cast<int>(slot), kNone, dir, EdgeKind::Thick, ""});
        out.nodes[tn].darts.push_back(td);
        socket_of[nd.darts[slot]] = fuser.new_socket(td);
      }
      continue;
    }

    // Crossing: pick the smoothing choice and instantiate its fragment.
    CrossClass cls = d.crossing_positive(n) ? CrossClass::Pos : CrossClass::Neg;
    const SmoothingRule* rule = rs.smoothing_for(cls);
    if (!rule)
      throw RuleError("uncovered crossing class: crossing " + std::to_string(n) + " (" +
                      (cls == CrossClass::Pos ? "positive" : "negative") + ")");
    if (rule->todo) throw RuleError("ruleset incomplete: " + rule->id);
    int choice = s.choice.at(static_cast<size_t>(crossing_index));
    ++crossing_index;
    const auto& [ccoeff, frag] = rule->choices[static_cast<size_t>(choice)];
    coeff = coeff * ccoeff;

    // Leg direction discipline against the crossing ports: a leg sees the
    // far end of the cut arc, so its direction is the port's opposite.
    for (size_t slot = 0; slot < 4; ++slot) {
      Dir port = d.darts[nd.darts[slot]].dir;
      Dir leg = frag.darts[frag.legs[slot]].dir;
      Dir want = oriented ? opposite(port) : Dir::Un;
      if (leg != want)
        throw RuleError("smoothing fragment orientation mismatch in rule " + rule->id);
    }

    std::vector<NodeId> fnode(frag.nodes.size(), kNone);
    std::vector<DartId> fdart(frag.darts.size(), kNone);
    for (NodeId fn = 0; fn < static_cast<NodeId>(frag.nodes.size()); ++fn) {
      if (frag.nodes[fn].leg > 0) continue;
      fnode[fn] = static_cast<NodeId>(out.nodes.size());
      out.nodes.push_back({frag.nodes[fn].type, {}});
    }
    for (DartId fd = 0; fd < static_cast<DartId>(frag.darts.size()); ++fd) {
      const auto& src = frag.darts[fd];
      if (frag.nodes[src.node].leg > 0) continue;
      fdart[fd] = static_cast<DartId>(out.darts.size());
      out.darts.push_back({fnode[src.node], src.slot, kNone, src.dir, src.kind, ""});
      out.nodes[fnode[src.node]].darts.push_back(fdart[fd]);
    }
    for (DartId fd = 0; fd < static_cast<DartId>(frag.darts.size()); ++fd) {
      DartId p = frag.darts[fd].partner;
      if (fd >= p || fdart[fd] == kNone || fdart[p] == kNone) continue;
      out.darts[fdart[fd]].partner = fdart[p];
      out.darts[fdart[p]].partner = fdart[fd];
      std::string lbl = plain_label(frag.darts[fd].label);
      out.darts[fdart[fd]].label = lbl;
      out.darts[fdart[p]].label = lbl;
    }
    for (const auto& loop : frag.loops)
      out.loops[{loop.kind, loop.orient, plain_label(loop.label)}]++;

    std::vector<int> outer(4), inner(4);
    for (size_t slot = 0; slot < 4; ++slot) {
      outer[slot] = fuser.new_socket();
      inner[slot] = fuser.new_socket();
      fuser.add_link(outer[slot], inner[slot]);
      socket_of[nd.darts[slot]] = outer[slot];
    }
    for (size_t slot = 0; slot < 4; ++slot) {
      DartId l = frag.legs[slot];
      DartId p = frag.darts[l].partner;
      std::string lbl = plain_label(frag.darts[l].label);
      detail::FusePiece piece;
      piece.kind = frag.darts[l].kind;
      piece.oriented = frag.darts[l].dir != Dir::Un;
      piece.labeled = !lbl.empty();
      piece.label = lbl;
      if (frag.nodes[frag.darts[p].node].leg > 0) {
        size_t j = static_cast<size_t>(frag.nodes[frag.darts[p].node].leg - 1);
        if (slot < j) {
          piece.a = inner[slot];
          piece.b = inner[j];
          fuser.add_piece(piece);
        }
      } else {
        piece.a = inner[slot];
        piece.b = fuser.new_socket(fdart[p]);
        fuser.add_piece(piece);
      }
    }
  }

  // Diagram arcs become strand pieces.
  for (DartId a = 0; a < static_cast<DartId>(d.darts.size()); ++a) {
    DartId b = d.darts[a].partner;
    if (a >= b) continue;
    fuser.add_piece({socket_of[a], socket_of[b], EdgeKind::Thick, oriented, false, ""});
  }

  auto fused = fuser.run();
  for (const auto& bond : fused.bonds) {
    auto& x = out.darts[bond.term_a];
    auto& y = out.darts[bond.term_b];
    if (x.kind != bond.kind || y.kind != bond.kind)
      throw RuleError("smoothing produced edge kind clash");
    bool ok =
        (x.dir == Dir::Un && y.dir == Dir::Un) || (x.dir != Dir::Un && y.dir == opposite(x.dir));
    if (!ok) throw RuleError("smoothing produced orientation clash");
    x.partner = bond.term_b;
    y.partner = bond.term_a;
    x.label = bond.label;
    y.label = bond.label;
  }
  for (const auto& cls : fused.loops) {
    LoopClass c = cls;
    if (!oriented) c.orient = LoopOrient::Un;
    out.loops[c]++;
  }

  // Diagram free loops map straight through.
  if (d.loops_pos)
    out.loops[{EdgeKind::Thick, oriented ? LoopOrient::Pos : LoopOrient::Un, ""}] += d.loops_pos;
  if (d.loops_neg)
    out.loops[{EdgeKind::Thick, oriented ? LoopOrient::Neg : LoopOrient::Un, ""}] += d.loops_neg;

  for (NodeId n = 0; n < static_cast<NodeId>(out.nodes.size()); ++n)
    for (size_t slot = 0; slot < out.nodes[n].darts.size(); ++slot) {
      out.darts[out.nodes[n].darts[slot]].node = n;
      out.darts[out.nodes[n].darts[slot]].slot = static_cast<int>(slot);
    }

  auto report = validate_trigraph(out, rs.sigs);
  if (!report.ok())
    throw RuleError("smoothing produced invalid state: " + report.to_string());
  return {coeff, out};
}

BracketResult bracket(const GraphDiagram& d, const RuleSet& rs, uint64_t normalize_budget,
                      int workers) {
  if (auto missing = rs.first_incomplete())
    throw RuleError("ruleset incomplete: " + *missing);
  {
    auto rep = validate_diagram(d);
    if (!rep.ok()) throw std::invalid_argument("bracket: invalid diagram: " + rep.to_string());
  }
  int n = d.crossing_count();
  if (n > 24) throw RuleError("diagram too large for state expansion (n > 24)");
  uint64_t total = 1ull << n;
  if (workers < 1) workers = 1;
  if (static_cast<uint64_t>(workers) > total) workers = static_cast<int>(total);

  auto run_range = [&](uint64_t lo, uint64_t hi, FormalSum& acc) {
    StateSelector sel;
    sel.choice.assign(static_cast<size_t>(n), 0);
    for (uint64_t k = lo; k < hi; ++k) {
      for (int i = 0; i < n; ++i)
        sel.choice[static_cast<size_t>(i)] = static_cast<uint8_t>((k >> (n - 1 - i)) & 1ull);
      auto [c, g] = resolve_state(d, sel, rs);
      acc.add(c, g, rs.mirror);
    }
  };

  std::vector<FormalSum> partial(static_cast<size_t>(workers), FormalSum(rs.ring));
  if (workers == 1) {
    run_range(0, total, partial[0]);
  } else {
    std::vector<std::thread> threads;
    uint64_t chunk = (total + static_cast<uint64_t>(workers) - 1) / static_cast<uint64_t>(workers);
    for (int w = 0; w < workers; ++w) {
      uint64_t lo = chunk * static_cast<uint64_t>(w);
      uint64_t hi = std::min(total, lo + chunk);
      threads.emplace_back([&, lo, hi, w]() { run_range(lo, hi, partial[static_cast<size_t>(w)]); });
    }
    for (auto& t : threads) t.join();
  }
  FormalSum sum(rs.ring);
  for (const auto& p : partial) sum = sum + p;

  auto norm = normalize(sum, rs, normalize_budget);
  return {std::move(norm.sum), total, norm.fixpoint, norm.steps};
}

}  // namespace ktg
