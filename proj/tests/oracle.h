// Copyright 2026 The qcoin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef QCOIN_TESTS_ORACLE_H_
#define QCOIN_TESTS_ORACLE_H_

// Slow, direct reference computations for tests. Nothing here calls the
// library's estimators; only the plain data types are shared.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "qcoin/model.h"
#include "qcoin/simulate.h"

namespace qcoin::oracle {

inline double Xlog2(double p) { return p > 0 ? p * std::log2(p) : 0.0; }

inline double H2(double p) { return -Xlog2(p) - Xlog2(1 - p); }

// Cell indices: a=0, a'=1, b=2, b'=3.
struct Term {
  int x_col;      // A-side cell of the pair
  int y_col;      // B-side cell of the pair
  bool given_x;   // condition on x_col instead of y_col
  bool use_hidden;  // pair is counted when both cells are hidden
};

// H(A|B) hidden, H(A|B'), H(B'|A'), H(A'|B), in that order.
inline constexpr Term kTerms[4] = {
    {0, 2, false, true},
    {0, 3, false, false},
    {1, 3, true, false},
    {1, 2, false, false},
};

inline bool IsSel(const OutcomeRecord& o, int col) {
  return Index(o.mask.a_side) == static_cast<std::size_t>(col) ||
         Index(o.mask.b_side) == static_cast<std::size_t>(col);
}

inline bool PairCounted(const OutcomeRecord& o, const Term& t, bool pseudo) {
  if (!pseudo) return true;
  if (t.use_hidden) return !IsSel(o, t.x_col) && !IsSel(o, t.y_col);
  return IsSel(o, t.x_col) && IsSel(o, t.y_col);
}

struct OracleTerms {
  double h[4] = {0, 0, 0, 0};
  double deficit = 0;
};

// pseudo = true: hidden pairs for the (a, b) term, selected pairs elsewhere;
// a conditioning value's count gathers every outcome whose conditioning cell
// enters any counted pair; the weight denominator is the number of counted
// pairs. pseudo = false: every outcome counted once per pair, which reduces
// to the textbook plug-in H(X|Y) over whole columns.
inline OracleTerms Deficit(const std::vector<OutcomeRecord>& outcomes,
                           bool pseudo) {
  // Every pair the table can hold: (x_col, y_col, hidden?).
  const Term all_pairs[4] = {kTerms[0], kTerms[1], kTerms[2], kTerms[3]};
  double pairs = 0;
  for (const auto& o : outcomes) {
    for (const Term& t : all_pairs) pairs += PairCounted(o, t, pseudo);
  }
  if (!pseudo) pairs /= 4.0;

  OracleTerms out;
  if (pairs == 0) return out;
  for (int i = 0; i < 4; ++i) {
    const Term& t = kTerms[i];
    const int cond = t.given_x ? t.x_col : t.y_col;
    std::map<std::pair<int, int>, double> joint;
    std::map<int, double> cond_count;
    for (const auto& o : outcomes) {
      bool feeds = false;
      for (const Term& u : all_pairs) {
        if ((u.x_col == cond || u.y_col == cond) && PairCounted(o, u, pseudo)) {
          feeds = true;
        }
      }
      if (feeds) cond_count[o.values[cond]] += 1;
      if (PairCounted(o, t, pseudo)) {
        joint[{o.values[t.x_col], o.values[t.y_col]}] += 1;
      }
    }
    double h = 0;
    for (const auto& [xy, count] : joint) {
      const int c = t.given_x ? xy.first : xy.second;
      h -= (count / pairs) * std::log2(count / cond_count[c]);
    }
    out.h[i] = h;
  }
  out.deficit = out.h[0] - (out.h[1] + out.h[2] + out.h[3]);
  return out;
}

// H(X|Y) as H(X,Y) - H(Y) over whole columns.
inline double ChainRuleConditional(const std::vector<OutcomeRecord>& outcomes,
                                   int x_col, int y_col) {
  const double n = static_cast<double>(outcomes.size());
  double joint[2][2] = {{0, 0}, {0, 0}};
  for (const auto& o : outcomes) joint[o.values[x_col]][o.values[y_col]] += 1;
  double h_xy = 0, h_y = 0;
  for (int y = 0; y < 2; ++y) {
    for (int x = 0; x < 2; ++x) h_xy -= Xlog2(joint[x][y] / n);
    h_y -= Xlog2((joint[0][y] + joint[1][y]) / n);
  }
  return h_xy - h_y;
}

// Singlet agreement probability written with cosine.
inline double SingletDeficit(double theta_degrees) {
  const double pi = std::acos(-1.0);
  auto h = [&](double deg) {
    return H2((1.0 - std::cos(deg * pi / 180.0)) / 2.0);
  };
  return h(theta_degrees) - 3.0 * h(theta_degrees / 3.0);
}

inline long double Choose(std::uint64_t n, std::uint64_t k) {
  long double c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

inline long double Pmf(std::uint64_t k, std::uint64_t n, long double p) {
  return Choose(n, k) * std::pow(p, static_cast<long double>(k)) *
         std::pow(1 - p, static_cast<long double>(n - k));
}

// P(k > k0).
inline long double Upper(std::uint64_t k0, std::uint64_t n, long double p) {
  long double s = 0;
  for (std::uint64_t k = k0 + 1; k <= n; ++k) s += Pmf(k, n, p);
  return s;
}

struct Plan {
  std::uint64_t n_req;
  std::uint64_t k0;
};

// Tries every (N, k0) in order.
inline std::optional<Plan> FindPlan(double p0, double p1, double alpha,
                                    double gamma, std::uint64_t n_max) {
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    for (std::uint64_t k0 = 0; k0 <= n; ++k0) {
      if (Upper(k0, n, p0) < alpha && Upper(k0, n, p1) >= gamma) {
        return Plan{n, k0};
      }
    }
  }
  return std::nullopt;
}

inline std::vector<SelectionMask> Masks(bool four) {
  std::vector<SelectionMask> m = {
      {Column::kA, Column::kBPrime},
      {Column::kAPrime, Column::kBPrime},
      {Column::kAPrime, Column::kB},
  };
  if (four) m.push_back({Column::kA, Column::kB});
  return m;
}

// Every equiprobable single-outcome state of a generator, built from the
// case definitions rather than from the library's state decoder.
inline std::vector<OutcomeRecord> States(CaseKind kind, bool four) {
  std::vector<OutcomeRecord> out;
  for (const SelectionMask& mask : Masks(four)) {
    if (kind == CaseKind::kStochastic) {
      for (int bits = 0; bits < 16; ++bits) {
        OutcomeRecord o;
        for (int c = 0; c < 4; ++c) o.values[c] = (bits >> c) & 1;
        o.mask = mask;
        out.push_back(o);
      }
    } else {
      for (int sel = 0; sel < 2; ++sel) {
        for (int hid_a = 0; hid_a < 2; ++hid_a) {
          for (int hid_b = 0; hid_b < 2; ++hid_b) {
            OutcomeRecord o;
            o.mask = mask;
            const int sa = static_cast<int>(Index(mask.a_side));
            const int sb = static_cast<int>(Index(mask.b_side));
            o.values[sa] = sel;
            o.values[sb] = 1 - sel;
            o.values[sa == 0 ? 1 : 0] = hid_a;
            o.values[sb == 2 ? 3 : 2] = hid_b;
            out.push_back(o);
          }
        }
      }
    }
  }
  return out;
}

struct Distribution {
  std::uint64_t total = 0;
  std::uint64_t positive = 0;
  std::uint64_t zero = 0;
  std::uint64_t negative = 0;
  double max = -1e300;
  double min = 1e300;
};

// Full Cartesian product: states^n matrices.
inline Distribution Enumerate(CaseKind kind, int n, bool four, bool pseudo) {
  const auto states = States(kind, four);
  const std::size_t k = states.size();
  Distribution d;
  std::vector<std::size_t> idx(n, 0);
  std::vector<OutcomeRecord> m(n);
  while (true) {
    for (int i = 0; i < n; ++i) m[i] = states[idx[i]];
    const double v = Deficit(m, pseudo).deficit;
    ++d.total;
    if (v > 1e-12) {
      ++d.positive;
    } else if (v < -1e-12) {
      ++d.negative;
    } else {
      ++d.zero;
    }
    d.max = std::max(d.max, v);
    d.min = std::min(d.min, v);
    int pos = 0;
    while (pos < n && ++idx[pos] == k) idx[pos++] = 0;
    if (pos == n) break;
  }
  return d;
}

}  // namespace qcoin::oracle

#endif  // QCOIN_TESTS_ORACLE_H_
