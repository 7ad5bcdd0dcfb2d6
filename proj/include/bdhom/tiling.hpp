// Exponential-corridor tiling: instances, the direct prefix/period solver,
// the encoder into ABD formulas, and the model decoder.
//
// An instance tiles N x {0..C} with tile 0 at the bottom and tile T at the
// top of every column, horizontal pairs in the h-relation and vertical
// pairs in the v-relation, where C = 2^c - 1 is given by its bit width.  A
// positive instance always has an eventually-periodic witness, which a
// finite model can spell out column by column: grid point (x,y) lives at
// model point x*(C+1)+y, the row index y is mirrored in c bit letters
// (b1 = least significant), one tile letter holds per point, and a marker
// letter p ties some full column to an identical final column.

#pragma once

#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bdhom/model.hpp"
#include "bdhom/parser.hpp"

namespace bdhom {

struct TilingInstance {
  int max_tile = 0;  // tiles 0..max_tile
  int bits = 1;      // C = 2^bits - 1
  std::set<std::pair<int, int>> hrel, vrel;

  int corridor_top() const { return (1 << bits) - 1; }  // C
};

class TilingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Instance file format: `tiles: T`, `bits: c`, then `h: i j` / `v: i j`
// lines (one pair each).
inline TilingInstance parse_tiling_file(const std::string& text) {
  TilingInstance t;
  bool saw_tiles = false, saw_bits = false;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    const auto want_pair = [&](std::set<std::pair<int, int>>& rel) {
      int i, j;
      if (!(ls >> i >> j))
        throw TilingError("expected two tile indices on line " +
                          std::to_string(lineno));
      rel.insert({i, j});
    };
    if (key == "tiles:") {
      if (!(ls >> t.max_tile)) throw TilingError("bad tiles: line");
      saw_tiles = true;
    } else if (key == "bits:") {
      if (!(ls >> t.bits)) throw TilingError("bad bits: line");
      saw_bits = true;
    } else if (key == "h:") {
      want_pair(t.hrel);
    } else if (key == "v:") {
      want_pair(t.vrel);
    } else {
      throw TilingError("unknown directive '" + key + "' on line " +
                        std::to_string(lineno));
    }
  }
  if (!saw_tiles || !saw_bits)
    throw TilingError("instance needs tiles: and bits: lines");
  if (t.bits < 1) throw TilingError("bits must be at least 1");
  if (t.max_tile < 0) throw TilingError("tiles must be nonnegative");
  for (const auto& rel : {t.hrel, t.vrel})
    for (auto& p : rel)
      if (p.first < 0 || p.first > t.max_tile || p.second < 0 ||
          p.second > t.max_tile)
        throw TilingError("relation pair out of tile range");
  return t;
}

inline std::string tiling_to_text(const TilingInstance& t) {
  std::string out = "tiles: " + std::to_string(t.max_tile) + "\n" +
                    "bits: " + std::to_string(t.bits) + "\n";
  for (auto& p : t.hrel)
    out += "h: " + std::to_string(p.first) + " " + std::to_string(p.second) + "\n";
  for (auto& p : t.vrel)
    out += "v: " + std::to_string(p.first) + " " + std::to_string(p.second) + "\n";
  return out;
}

// -- direct solver ----------------------------------------------------------

struct TilingWitness {
  int prefix = 0;
  int period = 1;
  // grid[x][y], x in 0..prefix+period, y in 0..C
  std::vector<std::vector<int>> grid;
};

// Checks conditions 1-3 on the finite grid plus the periodicity seam.
inline std::vector<std::string> witness_problems(const TilingInstance& t,
                                                 const TilingWitness& w) {
  std::vector<std::string> out;
  const int C = t.corridor_top();
  const int M = w.prefix + w.period;
  if (w.period < 1) out.push_back("period must be positive");
  if (static_cast<int>(w.grid.size()) != M + 1)
    out.push_back("grid must have prefix+period+1 columns");
  for (int x = 0; x < static_cast<int>(w.grid.size()); ++x) {
    if (static_cast<int>(w.grid[x].size()) != C + 1) {
      out.push_back("column " + std::to_string(x) + " has the wrong height");
      continue;
    }
    for (int y = 0; y <= C; ++y)
      if (w.grid[x][y] < 0 || w.grid[x][y] > t.max_tile)
        out.push_back("tile out of range at (" + std::to_string(x) + "," +
                      std::to_string(y) + ")");
    if (w.grid[x][0] != 0)
      out.push_back("column " + std::to_string(x) + " bottom tile is not 0");
    if (w.grid[x][C] != t.max_tile)
      out.push_back("column " + std::to_string(x) + " top tile is not T");
    for (int y = 0; y < C; ++y)
      if (!t.vrel.count({w.grid[x][y], w.grid[x][y + 1]}))
        out.push_back("vertical pair violated at (" + std::to_string(x) + "," +
                      std::to_string(y) + ")");
  }
  if (out.empty()) {
    for (int x = 0; x < M; ++x)
      for (int y = 0; y <= C; ++y)
        if (!t.hrel.count({w.grid[x][y], w.grid[x + 1][y]}))
          out.push_back("horizontal pair violated at (" + std::to_string(x) +
                        "," + std::to_string(y) + ")");
    for (int y = 0; y <= C; ++y)
      if (w.grid[w.prefix][y] != w.grid[M][y])
        out.push_back("periodicity seam violated at row " + std::to_string(y));
  }
  return out;
}

namespace detail {

// All columns legal on their own: bottom 0, top T, vertical pairs in v.
inline std::vector<std::vector<int>> legal_columns(const TilingInstance& t) {
  const int C = t.corridor_top();
  std::vector<std::vector<int>> done;
  std::vector<int> col{0};
  const auto rec = [&](const auto& self) -> void {
    if (static_cast<int>(col.size()) == C + 1) {
      if (col.back() == t.max_tile) done.push_back(col);
      return;
    }
    for (int next = 0; next <= t.max_tile; ++next) {
      if (!t.vrel.count({col.back(), next})) continue;
      col.push_back(next);
      self(self);
      col.pop_back();
    }
  };
  rec(rec);
  return done;
}

}  // namespace detail

// First witness in (prefix+period, prefix)-lexicographic order, or none
// within the bounds.
inline std::optional<TilingWitness> brute_force_tiling(const TilingInstance& t,
                                                       int max_prefix,
                                                       int max_period) {
  const auto columns = detail::legal_columns(t);
  if (columns.empty()) return std::nullopt;
  const int n = static_cast<int>(columns.size());
  // column compatibility under the horizontal relation
  std::vector<std::vector<char>> compat(n, std::vector<char>(n, 0));
  const int C = t.corridor_top();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      bool ok = true;
      for (int y = 0; y <= C && ok; ++y)
        ok = t.hrel.count({columns[a][y], columns[b][y]}) > 0;
      compat[a][b] = ok;
    }

  for (int total = 1; total <= max_prefix + max_period; ++total) {
    for (int prefix = 0; prefix <= max_prefix; ++prefix) {
      const int period = total - prefix;
      if (period < 1 || period > max_period) continue;
      // path col_0 .. col_total with col_prefix == col_total
      std::vector<int> path;
      const auto dfs = [&](const auto& self) -> bool {
        if (static_cast<int>(path.size()) == total + 1)
          return path[prefix] == path[total];
        for (int c = 0; c < n; ++c) {
          if (!path.empty() && !compat[path.back()][c]) continue;
          path.push_back(c);
          if (self(self)) return true;
          path.pop_back();
        }
        return false;
      };
      if (dfs(dfs)) {
        TilingWitness w;
        w.prefix = prefix;
        w.period = period;
        for (int idx : path) w.grid.push_back(columns[idx]);
        return w;
      }
    }
  }
  return std::nullopt;
}

// -- encoder ----------------------------------------------------------------

namespace detail {

struct TilingVocab {
  std::vector<Formula> tile;  // t0..tT
  std::vector<Formula> bit;   // b1..bc (b1 = least significant)
  Formula marker;

  explicit TilingVocab(const TilingInstance& t) : marker(prop("p")) {
    for (int i = 0; i <= t.max_tile; ++i)
      tile.push_back(prop("t" + std::to_string(i)));
    for (int i = 1; i <= t.bits; ++i)
      bit.push_back(prop("b" + std::to_string(i)));
  }
};

inline Formula conj_all(const std::vector<Formula>& fs) {
  Formula out = fs.front();
  for (size_t i = 1; i < fs.size(); ++i) out = and_(out, fs[i]);
  return out;
}
inline Formula disj_all(const std::vector<Formula>& fs) {
  Formula out = fs.front();
  for (size_t i = 1; i < fs.size(); ++i) out = or_(out, fs[i]);
  return out;
}

}  // namespace detail

// The ABD encoding of a tiling instance over letters t0..tT, b1..bc, p.
inline Formula encode(const TilingInstance& t) {
  using detail::conj_all;
  using detail::disj_all;
  const detail::TilingVocab v(t);
  const int c = t.bits;

  // abbreviations
  const Formula unit = and_(not_(pi()), box_b(pi()));  // two-point intervals
  const auto at_start = [&](const Formula& x) {  // x at the left endpoint
    return diamond_b(and_(pi(), x));
  };
  const auto at_end = [&](const Formula& x) {  // x at the right endpoint
    return diamond_a(and_(pi(), x));
  };

  // every point carries at least one / at most one tile letter
  std::vector<Formula> excl;
  for (int i = 0; i <= t.max_tile; ++i) {
    Formula others = top();
    bool first = true;
    for (int j = 0; j <= t.max_tile; ++j) {
      if (j == i) continue;
      Formula nj = not_(v.tile[j]);
      others = first ? nj : and_(others, nj);
      first = false;
    }
    excl.push_back(first ? top() : implies(and_(v.tile[i], pi()), others));
  }
  const Formula tile_exists = box_g(implies(pi(), disj_all(v.tile)));
  const Formula tile_excl = box_g(conj_all(excl));

  // the first point counts 0, the final point counts C
  std::vector<Formula> bits_zero, bits_one;
  for (int i = 0; i < c; ++i) {
    bits_zero.push_back(not_(v.bit[i]));
    bits_one.push_back(v.bit[i]);
  }
  const Formula boundary =
      and_(diamond_b(and_(pi(), conj_all(bits_zero))), box_a(conj_all(bits_one)));

  // counter equality on bits i..c between the endpoints of an interval
  std::vector<Formula> eq_from(c + 1, not_(pi()));
  for (int i = c - 1; i >= 0; --i) {
    Formula same = iff(at_start(v.bit[i]), at_end(v.bit[i]));
    eq_from[i] = and_(eq_from[i + 1], same);
  }
  const Formula counters_equal = eq_from[0];

  // bit-wise increment across a unit interval, rippling from b1 (the least
  // significant bit): flip while set, set the first clear bit, keep the
  // rest; all bits set contradicts (the wrap is handled separately)
  Formula incr = and_(not_(diamond_b(v.bit[c - 1])), at_end(v.bit[c - 1]));
  for (int i = c - 2; i >= 0; --i) {
    Formula keep_rest = i + 1 < c ? eq_from[i + 1] : not_(pi());
    incr = and_(implies(diamond_b(v.bit[i]),
                        and_(at_end(not_(v.bit[i])), incr)),
                implies(diamond_b(not_(v.bit[i])),
                        and_(diamond_a(v.bit[i]), keep_rest)));
  }
  const Formula at_top = conj_all([&] {
    std::vector<Formula> fs;
    for (int i = 0; i < c; ++i) fs.push_back(diamond_b(v.bit[i]));
    return fs;
  }());
  const Formula wrap_or_end =
      or_(box_a(pi()), conj_all([&] {
          std::vector<Formula> fs;
          for (int i = 0; i < c; ++i) fs.push_back(at_end(not_(v.bit[i])));
          return fs;
        }()));
  const Formula counter_step =
      box_g(implies(unit, or_(and_(at_top, wrap_or_end), incr)));

  // bottom tile 0 and top tile T in every column
  const Formula bottom_top =
      box_g(and_(implies(and_(pi(), conj_all(bits_zero)), v.tile[0]),
                 implies(and_(pi(), conj_all(bits_one)), v.tile[t.max_tile])));

  // horizontally adjacent grid points: the minimal equal-counter interval
  const Formula minimal_equal =
      and_(counters_equal, box_b(not_(counters_equal)));
  std::vector<Formula> hpairs;
  for (auto& p : t.hrel)
    hpairs.push_back(and_(diamond_b(v.tile[p.first]), diamond_a(v.tile[p.second])));
  const Formula horizontal =
      box_g(implies(minimal_equal,
                    hpairs.empty() ? bottom() : disj_all(hpairs)));

  // vertically adjacent grid points: unit intervals below the corridor top
  std::vector<Formula> below_top;
  for (int i = 0; i < c; ++i) below_top.push_back(at_start(not_(v.bit[i])));
  std::vector<Formula> vpairs;
  for (auto& p : t.vrel)
    vpairs.push_back(and_(diamond_b(v.tile[p.first]), diamond_a(v.tile[p.second])));
  const Formula vertical =
      box_g(implies(and_(unit, disj_all(below_top)),
                    vpairs.empty() ? bottom() : disj_all(vpairs)));

  // the marker p covers one full column, and every p-point repeats, with
  // the same tile, at the matching row of the final column (the last point
  // with its counter value)
  std::vector<Formula> span;
  for (int i = 0; i < c; ++i)
    span.push_back(and_(at_start(not_(v.bit[i])), diamond_a(v.bit[i])));
  const Formula marker_spans_column =
      diamond_b(diamond_a(and_(v.marker, conj_all(span))));
  std::vector<Formula> same_tile;
  for (int i = 0; i <= t.max_tile; ++i)
    same_tile.push_back(and_(at_start(v.tile[i]), at_end(v.tile[i])));
  const Formula marker_repeats = box_g(implies(
      and_(v.marker, pi()),
      diamond_a(and_(counters_equal,
                     and_(box_a(not_(counters_equal)), disj_all(same_tile))))));
  const Formula column_repeat = and_(marker_spans_column, marker_repeats);

  return and_(tile_exists,
              and_(tile_excl,
                   and_(boundary,
                        and_(counter_step,
                             and_(bottom_top,
                                  and_(horizontal,
                                       and_(vertical, column_repeat)))))));
}

// -- decoding ----------------------------------------------------------------

// Reads a tiling witness off a model of encode(t).  Throws naming the
// violated constraint when the model does not have the grid shape.
inline TilingWitness decode_model(const HomogeneousModel& m,
                                  const TilingInstance& t) {
  const int C = t.corridor_top();
  if ((m.N + 1) % (C + 1) != 0)
    throw TilingError(
        "model size is not a multiple of the column height "
        "(boundary/counter-step constraints)");
  const int columns = (m.N + 1) / (C + 1);
  if (columns < 2)
    throw TilingError("model has a single column (column-repeat constraint)");

  const auto tile_at = [&](int point) {
    int found = -1;
    for (int i = 0; i <= t.max_tile; ++i) {
      int idx = m.letter_index("t" + std::to_string(i));
      if (idx >= 0 && m.letter_at(point, idx)) {
        if (found >= 0)
          throw TilingError("two tile letters at point " +
                            std::to_string(point) +
                            " (tile-exclusion constraint)");
        found = i;
      }
    }
    if (found < 0)
      throw TilingError("no tile letter at point " + std::to_string(point) +
                        " (tile-existence constraint)");
    return found;
  };
  const auto counter_at = [&](int point) {
    int val = 0;
    for (int i = 1; i <= t.bits; ++i) {
      int idx = m.letter_index("b" + std::to_string(i));
      if (idx >= 0 && m.letter_at(point, idx)) val |= 1 << (i - 1);
    }
    return val;
  };

  // the counter letters must spell y = point mod (C+1)
  for (int n = 0; n <= m.N; ++n)
    if (counter_at(n) != n % (C + 1))
      throw TilingError("counter letters disagree with the position at point " +
                        std::to_string(n) + " (counter-step constraint)");

  std::vector<std::vector<int>> grid(columns, std::vector<int>(C + 1));
  for (int x = 0; x < columns; ++x)
    for (int y = 0; y <= C; ++y) grid[x][y] = tile_at(x * (C + 1) + y);

  // the final column must repeat an earlier one
  const int last = columns - 1;
  int prefix = -1;
  for (int x = 0; x < last && prefix < 0; ++x)
    if (grid[x] == grid[last]) prefix = x;
  if (prefix < 0)
    throw TilingError("no earlier column equals the final column "
                      "(column-repeat constraint)");

  TilingWitness w;
  w.prefix = prefix;
  w.period = last - prefix;
  w.grid = std::move(grid);
  return w;
}

}  // namespace bdhom
