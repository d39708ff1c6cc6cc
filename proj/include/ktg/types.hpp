#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ktg {

using DartId = int;
using NodeId = int;
inline constexpr int kNone = -1;

// Direction of a dart relative to the node it is attached to.
enum class Dir : uint8_t { Out, In, Un };

inline Dir opposite(Dir d) {
  switch (d) {
    case Dir::Out: return Dir::In;
    case Dir::In: return Dir::Out;
    default: return Dir::Un;
  }
}

inline char dir_char(Dir d) {
  switch (d) {
    case Dir::Out: return '>';
    case Dir::In: return '<';
    default: return '.';
  }
}

enum class EdgeKind : uint8_t { Thick, Thin };

inline char kind_char(EdgeKind k) { return k == EdgeKind::Thick ? 't' : 'n'; }

// Chirality class of a free loop. Loops created by rewriting are recorded
// as Pos when their strand is oriented; see docs/FORMATS in README.
enum class LoopOrient : uint8_t { Pos, Neg, Un };

inline char loop_orient_char(LoopOrient o) {
  switch (o) {
    case LoopOrient::Pos: return '+';
    case LoopOrient::Neg: return '-';
    default: return '.';
  }
}

// The ten vertex types of a label trigraph.
enum class VertexType : uint8_t { V1, V2, V3, V4, V5, V6, V7, V8, V9, V10 };

inline std::string vertex_type_name(VertexType t) {
  return "V." + std::to_string(static_cast<int>(t) + 1);
}

inline bool parse_vertex_type(const std::string& s, VertexType& out) {
  if (s.size() < 3 || s[0] != 'V' || s[1] != '.') return false;
  int n = 0;
  for (size_t i = 2; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
    n = n * 10 + (s[i] - '0');
  }
  if (n < 1 || n > 10) return false;
  out = static_cast<VertexType>(n - 1);
  return true;
}

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(const std::string& msg, int line_ = 0, int col_ = 0)
      : std::runtime_error(line_ > 0 ? "line " + std::to_string(line_) + ":" +
                                           std::to_string(col_) + ": " + msg
                                     : msg),
        line(line_), col(col_) {}
};

struct RuleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ktg
