#pragma once

#include <string>
#include <vector>

#include "ktg/trigraph.hpp"
#include "ktg/types.hpp"

namespace ktg::detail {

// Chain fusion used by rewriting surgery and by state resolution. Sockets are
// endpoints of strand pieces; a socket either belongs to a terminal (a real
// dart of the graph under construction) or is an internal connector joined to
// exactly one other socket by a link. Walking piece-link chains yields the
// final edges (terminal to terminal) and free loops (closed chains).
struct FusePiece {
  int a, b;  // socket ids
  EdgeKind kind = EdgeKind::Thick;
  bool oriented = false;
  bool labeled = false;
  std::string label;
};

struct FuseBond {
  int term_a, term_b;  // terminal ids
  EdgeKind kind;
  std::string label;
};

struct FuseOutcome {
  std::vector<FuseBond> bonds;
  std::vector<LoopClass> loops;
};

class Fuser {
 public:
  int new_socket(int terminal = -1) {
    terminal_.push_back(terminal);
    piece_at_.push_back(-1);
    link_.push_back(-1);
    return static_cast<int>(terminal_.size()) - 1;
  }
  void add_piece(FusePiece p) {
    int id = static_cast<int>(pieces_.size());
    pieces_.push_back(p);
    attach(piece_at_, p.a, id, "piece");
    attach(piece_at_, p.b, id, "piece");
  }
  void add_link(int a, int b) {
    attach(link_, a, b, "link");
    attach(link_, b, a, "link");
  }

  FuseOutcome run() const {
    FuseOutcome out;
    size_t n = terminal_.size();
    std::vector<char> seen(n, 0);
    for (size_t s = 0; s < n; ++s) {
      if (seen[s] || terminal_[s] < 0) continue;
      // Walk from a terminal: piece, link, piece, ... until next terminal.
      FuseBond bond{terminal_[s], -1, EdgeKind::Thick, ""};
      bool have_kind = false, have_label = false;
      int cur = static_cast<int>(s);
      for (;;) {
        seen[cur] = 1;
        int pid = piece_at_[cur];
        if (pid < 0) throw RuleError("interface gluing failure: dangling socket");
        const FusePiece& p = pieces_[pid];
        merge(bond, p, have_kind, have_label);
        int other = p.a == cur ? p.b : p.a;
        seen[other] = 1;
        if (terminal_[other] >= 0) {
          bond.term_b = terminal_[other];
          break;
        }
        if (link_[other] < 0) throw RuleError("interface gluing failure: open chain");
        cur = link_[other];
      }
      out.bonds.push_back(bond);
    }
    // Remaining unseen sockets form closed chains: free loops.
    for (size_t s = 0; s < n; ++s) {
      if (seen[s] || piece_at_[s] < 0) continue;
      LoopClass cls;
      bool have_kind = false, have_label = false, oriented = true;
      FuseBond acc{-1, -1, EdgeKind::Thick, ""};
      int cur = static_cast<int>(s);
      while (!seen[cur]) {
        seen[cur] = 1;
        const FusePiece& p = pieces_[piece_at_[cur]];
        merge(acc, p, have_kind, have_label);
        oriented = oriented && p.oriented;
        int other = p.a == cur ? p.b : p.a;
        seen[other] = 1;
        if (link_[other] < 0) throw RuleError("interface gluing failure: open chain");
        cur = link_[other];
      }
      cls.kind = acc.kind;
      cls.orient = oriented ? LoopOrient::Pos : LoopOrient::Un;
      cls.label = acc.label;
      out.loops.push_back(cls);
    }
    return out;
  }

 private:
  static void attach(std::vector<int>& slot, int s, int v, const char* what) {
    if (slot[s] != -1)
      throw RuleError(std::string("interface gluing failure: socket has two ") + what + "s");
    slot[s] = v;
  }
  static void merge(FuseBond& bond, const FusePiece& p, bool& have_kind, bool& have_label) {
    if (!have_kind) {
      bond.kind = p.kind;
      have_kind = true;
    } else if (bond.kind != p.kind) {
      throw RuleError("interface gluing failure: edge kind clash along strand");
    }
    if (p.labeled) {
      if (have_label && bond.label != p.label)
        throw RuleError("interface gluing failure: label clash along strand");
      bond.label = p.label;
      have_label = true;
    }
  }

  std::vector<int> terminal_;
  std::vector<int> piece_at_;
  std::vector<int> link_;
  std::vector<FusePiece> pieces_;
};

}  // namespace ktg::detail
