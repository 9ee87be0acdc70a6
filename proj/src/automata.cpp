#include "betashift/automata.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <utility>

#include "betashift/errors.hpp"

namespace betashift {

namespace {

constexpr std::size_t kBlockVertexCap = 1u << 21;
constexpr std::size_t kForbiddenRoundCap = 4096;
constexpr long kPowerIterationCap = 20000;

std::size_t effective_length(const EventuallyPeriodicWord& w) {
  return w.preperiod_length() + w.period_length();
}

// All length-L factors, by depth-first extension of surviving prefixes.
std::vector<FiniteWord> collect_factors(const ConstraintMachine& m,
                                        std::size_t L) {
  std::vector<FiniteWord> out;
  std::vector<Bit> word;
  struct Frame {
    std::uint32_t state;
    Bit next_bit;
  };
  std::vector<Frame> stack{{m.initial_state(), 0}};
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next_bit > 1) {
      stack.pop_back();
      if (!word.empty()) word.pop_back();
      continue;
    }
    const Bit c = f.next_bit++;
    const auto t = m.transition(f.state, c);
    if (!t) continue;
    word.push_back(c);
    if (word.size() == L) {
      if (m.alive(*t)) {
        out.emplace_back(word);
        if (out.size() > kBlockVertexCap) {
          throw EscalationFailed("block automaton vertex cap exceeded");
        }
      }
      word.pop_back();
      continue;
    }
    stack.push_back({*t, 0});
  }
  std::sort(out.begin(), out.end());
  return out;
}

void trim_to_biinfinite(SubshiftAutomaton& aut) {
  const std::size_t n = aut.state_count();
  std::vector<bool> keep(n, true);
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<int> indeg(n, 0);
    for (std::size_t v = 0; v < n; ++v) {
      if (!keep[v]) continue;
      for (const Bit c : {Bit{0}, Bit{1}}) {
        const std::int64_t t = aut.next[v][c];
        if (t >= 0 && keep[static_cast<std::size_t>(t)]) {
          ++indeg[static_cast<std::size_t>(t)];
        }
      }
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (!keep[v]) continue;
      bool has_out = false;
      for (const Bit c : {Bit{0}, Bit{1}}) {
        const std::int64_t t = aut.next[v][c];
        if (t >= 0 && keep[static_cast<std::size_t>(t)]) has_out = true;
      }
      if (!has_out || indeg[v] == 0) {
        keep[v] = false;
        changed = true;
      }
    }
  }
  // Renumber the kept vertices.
  std::vector<std::int64_t> remap(n, -1);
  std::int64_t next_id = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (keep[v]) remap[v] = next_id++;
  }
  SubshiftAutomaton trimmed;
  trimmed.kind = aut.kind;
  trimmed.window = aut.window;
  for (std::size_t v = 0; v < n; ++v) {
    if (!keep[v]) continue;
    trimmed.labels.push_back(aut.labels[v]);
    std::array<std::int64_t, 2> row{-1, -1};
    for (const Bit c : {Bit{0}, Bit{1}}) {
      const std::int64_t t = aut.next[v][c];
      if (t >= 0 && keep[static_cast<std::size_t>(t)]) {
        row[c] = remap[static_cast<std::size_t>(t)];
      }
    }
    trimmed.next.push_back(row);
  }
  aut = std::move(trimmed);
}

// Iterative Tarjan decomposition; returns component index per vertex.
std::vector<int> strongly_connected_components(const SubshiftAutomaton& aut,
                                               int& component_count) {
  const std::size_t n = aut.state_count();
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  struct Frame {
    std::size_t v;
    int edge;
  };
  std::vector<Frame> frames;
  int counter = 0;
  component_count = 0;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    frames.push_back({root, 0});
    while (!frames.empty()) {
      Frame& f = frames.back();
      const std::size_t v = f.v;
      if (f.edge == 0) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
      }
      bool descended = false;
      while (f.edge < 2) {
        const std::int64_t t64 = aut.next[v][f.edge++];
        if (t64 < 0) continue;
        const auto t = static_cast<std::size_t>(t64);
        if (index[t] == -1) {
          frames.push_back({t, 0});
          descended = true;
          break;
        }
        if (on_stack[t]) low[v] = std::min(low[v], index[t]);
      }
      if (descended) continue;
      if (low[v] == index[v]) {
        while (true) {
          const std::size_t w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = component_count;
          if (w == v) break;
        }
        ++component_count;
      }
      frames.pop_back();
      if (!frames.empty()) {
        low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      }
    }
  }
  return comp;
}

Real max_enclosure(const Real& a, const Real& b) {
  const Real lo =
      a.lower().certainly_less(b.lower()) ? b.lower() : a.lower();
  const Real hi =
      a.upper().certainly_less(b.upper()) ? b.upper() : a.upper();
  return Real::span(lo, hi);
}

// Two-sided Perron bounds for one strongly connected component, given as
// adjacency lists with multiplicities.  For irreducible nonnegative M and
// any positive vector v, min_i (Mv)_i/v_i <= perron(M) <= max_i (Mv)_i/v_i;
// iterating v <- (M+I)v tightens both sides.
Real perron_bounds_irreducible(
    const std::vector<std::vector<std::pair<int, int>>>& edges, Bits bits) {
  const std::size_t s = edges.size();
  std::vector<mpz_class> v(s, 1), w(s);
  const Real one = Real::integer(1, bits);
  Real best = Real::span(Real(bits), Real::integer(4, bits));
  const double target = std::ldexp(1.0, -static_cast<int>(bits / 2));
  for (long iter = 0; iter < kPowerIterationCap; ++iter) {
    for (std::size_t i = 0; i < s; ++i) {
      w[i] = v[i];
      for (const auto& [j, mult] : edges[i]) {
        w[i] += mult == 1 ? v[static_cast<std::size_t>(j)]
                          : mpz_class(2) * v[static_cast<std::size_t>(j)];
      }
    }
    if (iter % 8 == 7 || iter == kPowerIterationCap - 1) {
      Real lo = Real::from_mpz(w[0], bits) / Real::from_mpz(v[0], bits);
      Real hi = lo;
      for (std::size_t i = 1; i < s; ++i) {
        const Real r =
            Real::from_mpz(w[i], bits) / Real::from_mpz(v[i], bits);
        if (r.lower().certainly_less(lo.lower())) lo = r;
        if (hi.upper().certainly_less(r.upper())) hi = r;
      }
      const Real estimate = Real::span(lo.lower(), hi.upper()) - one;
      best = intersect(best, estimate);
      if (best.width() <= target) return best;
    }
    std::swap(v, w);
    // Renormalize by a common right shift; the bounds hold for any positive
    // vector, so truncation only perturbs the convergence direction.  The
    // kept headroom scales with the requested precision so that the
    // perturbation stays far below the target enclosure width.
    std::size_t min_bits = mpz_sizeinbase(v[0].get_mpz_t(), 2);
    for (const auto& x : v) {
      min_bits = std::min(min_bits, mpz_sizeinbase(x.get_mpz_t(), 2));
    }
    if (min_bits > bits + 300) {
      const auto shift = static_cast<mp_bitcnt_t>(min_bits - (bits + 64));
      for (auto& x : v) x >>= shift;
    }
  }
  throw PrecisionExhausted("eigenvalue bounds did not reach target width");
}

struct AhoCorasick {
  struct Node {
    std::array<int, 2> child{-1, -1};
    std::array<int, 2> go{-1, -1};
    int fail = 0;
    bool dead = false;
  };
  std::vector<Node> nodes;

  explicit AhoCorasick(const std::vector<FiniteWord>& patterns) {
    nodes.emplace_back();
    for (const FiniteWord& p : patterns) {
      int cur = 0;
      for (const Bit c : p.bits) {
        if (nodes[static_cast<std::size_t>(cur)].child[c] == -1) {
          nodes[static_cast<std::size_t>(cur)].child[c] =
              static_cast<int>(nodes.size());
          nodes.emplace_back();
        }
        cur = nodes[static_cast<std::size_t>(cur)].child[c];
      }
      nodes[static_cast<std::size_t>(cur)].dead = true;
    }
    std::deque<int> queue;
    for (const Bit c : {Bit{0}, Bit{1}}) {
      const int child = nodes[0].child[c];
      if (child == -1) {
        nodes[0].go[c] = 0;
      } else {
        nodes[0].go[c] = child;
        nodes[static_cast<std::size_t>(child)].fail = 0;
        queue.push_back(child);
      }
    }
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      auto& nu = nodes[static_cast<std::size_t>(u)];
      nu.dead = nu.dead || nodes[static_cast<std::size_t>(nu.fail)].dead;
      for (const Bit c : {Bit{0}, Bit{1}}) {
        const int child = nu.child[c];
        const int via_fail = nodes[static_cast<std::size_t>(nu.fail)].go[c];
        if (child == -1) {
          nodes[static_cast<std::size_t>(u)].go[c] = via_fail;
        } else {
          nodes[static_cast<std::size_t>(u)].go[c] = child;
          nodes[static_cast<std::size_t>(child)].fail = via_fail;
          queue.push_back(child);
        }
      }
    }
  }
};

FiniteWord drop_first(const FiniteWord& w) {
  return FiniteWord(std::vector<Bit>(w.bits.begin() + 1, w.bits.end()));
}

FiniteWord drop_last(const FiniteWord& w) {
  return FiniteWord(std::vector<Bit>(w.bits.begin(), w.bits.end() - 1));
}

// Shrinks a non-factor until both maximal proper factors are factors.
FiniteWord minimalize_non_factor(const ConstraintMachine& m, FiniteWord w) {
  while (w.size() >= 2) {
    if (!m.is_factor(drop_first(w))) {
      w = drop_first(w);
    } else if (!m.is_factor(drop_last(w))) {
      w = drop_last(w);
    } else {
      break;
    }
  }
  return w;
}

// Shortest word avoiding all patterns that is not a factor of the machine's
// language; nullopt when the avoid-language equals the factor language.
std::optional<FiniteWord> find_missing_forbidden(
    const ConstraintMachine& m, const std::vector<FiniteWord>& patterns) {
  const AhoCorasick ac(patterns);
  if (ac.nodes[0].dead) return std::nullopt;  // avoid-language is empty
  struct Item {
    int ac_state;
    std::uint32_t machine_state;
  };
  std::deque<Item> queue{{0, m.initial_state()}};
  std::set<std::pair<int, std::uint32_t>> seen{{0, m.initial_state()}};
  // Breadth-first layers stay small because both automata are; storing the
  // witness prefix per visited state keeps reconstruction trivial.
  std::map<std::pair<int, std::uint32_t>, std::vector<Bit>> path;
  path[{0, m.initial_state()}] = {};
  while (!queue.empty()) {
    const Item it = queue.front();
    queue.pop_front();
    const std::vector<Bit> cur = path[{it.ac_state, it.machine_state}];
    for (const Bit c : {Bit{0}, Bit{1}}) {
      const int ac_next =
          ac.nodes[static_cast<std::size_t>(it.ac_state)].go[c];
      if (ac.nodes[static_cast<std::size_t>(ac_next)].dead) continue;
      const auto t = m.transition(it.machine_state, c);
      if (!t || !m.alive(*t)) {
        std::vector<Bit> bits = cur;
        bits.push_back(c);
        return FiniteWord(std::move(bits));
      }
      const std::pair<int, std::uint32_t> key{ac_next, *t};
      if (seen.insert(key).second) {
        std::vector<Bit> bits = cur;
        bits.push_back(c);
        path[key] = std::move(bits);
        queue.push_back({ac_next, *t});
      }
    }
  }
  return std::nullopt;
}

}  // namespace

SubshiftAutomaton follower_automaton(const ConstraintMachine& machine) {
  SubshiftAutomaton aut;
  aut.kind = SubshiftAutomaton::Kind::Follower;
  if (machine.language_empty()) return aut;
  const std::size_t n = machine.state_count();
  std::vector<std::int64_t> remap(n, -1);
  std::int64_t next_id = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (machine.alive(static_cast<std::uint32_t>(s))) remap[s] = next_id++;
  }
  for (std::size_t s = 0; s < n; ++s) {
    if (remap[s] < 0) continue;
    std::array<std::int64_t, 2> row{-1, -1};
    for (const Bit c : {Bit{0}, Bit{1}}) {
      const auto t = machine.transition(static_cast<std::uint32_t>(s), c);
      if (t && machine.alive(*t)) row[c] = remap[*t];
    }
    aut.next.push_back(row);
  }
  aut.start = static_cast<std::uint32_t>(remap[machine.initial_state()]);
  return aut;
}

SubshiftAutomaton build_automaton(const WordPair& pair) {
  const ConstraintMachine machine(pair);
  const std::size_t p = effective_length(pair.lower);
  const std::size_t q = effective_length(pair.upper);
  const std::size_t first = std::max(p, q) + 1;
  const std::size_t cap = 4 * (p + q);
  for (std::size_t L = first; L <= cap; ++L) {
    const std::vector<FiniteWord> vertices = collect_factors(machine, L);
    std::map<FiniteWord, std::int64_t> ids;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      ids.emplace(vertices[i], static_cast<std::int64_t>(i));
    }
    SubshiftAutomaton aut;
    aut.kind = SubshiftAutomaton::Kind::HigherBlock;
    aut.window = L;
    aut.labels = vertices;
    aut.next.assign(vertices.size(), {-1, -1});
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      for (const Bit c : {Bit{0}, Bit{1}}) {
        std::vector<Bit> extended = vertices[i].bits;
        extended.push_back(c);
        if (!machine.is_factor(FiniteWord(extended))) continue;
        const FiniteWord target(
            std::vector<Bit>(extended.begin() + 1, extended.end()));
        const auto it = ids.find(target);
        if (it == ids.end()) {
          throw InternalError("factor language not closed under suffixes");
        }
        aut.next[i][c] = it->second;
      }
    }
    trim_to_biinfinite(aut);
    bool verified = true;
    for (std::size_t n = 1; n <= 2 * L + 2 && verified; ++n) {
      verified = (count_words_matrix(aut, n) == machine.count_factors(n));
    }
    if (verified) return aut;
  }
  throw EscalationFailed("block automaton did not stabilize by length " +
                         std::to_string(cap));
}

mpz_class count_words_matrix(const SubshiftAutomaton& aut, std::size_t n) {
  const std::size_t s = aut.state_count();
  if (s == 0) return 0;
  if (aut.kind == SubshiftAutomaton::Kind::HigherBlock && n < aut.window) {
    std::set<std::vector<Bit>> prefixes;
    for (const FiniteWord& label : aut.labels) {
      prefixes.emplace(label.bits.begin(),
                       label.bits.begin() + static_cast<std::ptrdiff_t>(n));
    }
    return static_cast<long>(prefixes.size());
  }
  std::vector<mpz_class> cur(s), next(s);
  std::size_t steps = n;
  if (aut.kind == SubshiftAutomaton::Kind::HigherBlock) {
    for (auto& x : cur) x = 1;
    steps = n - aut.window;
  } else {
    cur[aut.start] = 1;
  }
  for (std::size_t k = 0; k < steps; ++k) {
    for (auto& x : next) x = 0;
    for (std::size_t v = 0; v < s; ++v) {
      if (cur[v] == 0) continue;
      for (const Bit c : {Bit{0}, Bit{1}}) {
        const std::int64_t t = aut.next[v][c];
        if (t >= 0) next[static_cast<std::size_t>(t)] += cur[v];
      }
    }
    std::swap(cur, next);
  }
  mpz_class total = 0;
  for (const auto& x : cur) total += x;
  return total;
}

Real spectral_radius(const SubshiftAutomaton& aut, Bits bits) {
  const std::size_t n = aut.state_count();
  Real radius(bits);  // exact zero
  if (n == 0) return radius;
  int ncomp = 0;
  const std::vector<int> comp = strongly_connected_components(aut, ncomp);
  std::vector<std::vector<std::size_t>> members(
      static_cast<std::size_t>(ncomp));
  for (std::size_t v = 0; v < n; ++v) {
    members[static_cast<std::size_t>(comp[v])].push_back(v);
  }
  const Real one = Real::integer(1, bits);
  for (const auto& scc : members) {
    std::vector<int> local(n, -1);
    for (std::size_t i = 0; i < scc.size(); ++i) {
      local[scc[i]] = static_cast<int>(i);
    }
    // Intra-component adjacency with edge multiplicities.
    std::vector<std::vector<std::pair<int, int>>> edges(scc.size());
    std::size_t edge_total = 0;
    for (std::size_t i = 0; i < scc.size(); ++i) {
      std::array<int, 2> targets{-1, -1};
      int count = 0;
      for (const Bit c : {Bit{0}, Bit{1}}) {
        const std::int64_t t = aut.next[scc[i]][c];
        if (t >= 0 && local[static_cast<std::size_t>(t)] >= 0) {
          targets[static_cast<std::size_t>(count++)] =
              local[static_cast<std::size_t>(t)];
        }
      }
      if (count == 2 && targets[0] == targets[1]) {
        edges[i].emplace_back(targets[0], 2);
      } else {
        for (int k = 0; k < count; ++k) edges[i].emplace_back(targets[k], 1);
      }
      edge_total += static_cast<std::size_t>(count);
    }
    if (scc.size() == 1 && edges[0].empty()) continue;  // transient vertex
    if (edge_total == scc.size()) {
      // One intra-component edge per vertex: the component is one cycle.
      bool simple = true;
      for (const auto& e : edges) {
        if (e.size() != 1 || e[0].second != 1) simple = false;
      }
      if (simple) {
        radius = max_enclosure(radius, one);
        continue;
      }
    }
    radius = max_enclosure(radius, perron_bounds_irreducible(edges, bits));
  }
  return radius;
}

Real growth_rate(const SubshiftAutomaton& aut, Bits bits) {
  const Real zero(bits);
  if (aut.state_count() == 0) return zero;
  const Real one = Real::integer(1, bits);
  const Real radius = spectral_radius(aut, bits);
  if (compare_decide(radius, one) == Decision::Equal) return zero;
  if (!radius.certainly_greater(one)) {
    // A cycle always exists in a live automaton, so the radius is at least
    // 1; clamp the enclosure before taking the logarithm.
    return log(intersect(Real::span(one, radius.upper()), radius));
  }
  return log(radius);
}

SftCertificate forbidden_words(const SubshiftAutomaton& aut,
                               const WordPair& pair, Bits bits) {
  const ConstraintMachine machine(pair);
  std::set<std::vector<Bit>> found;
  struct BoundRole {
    EventuallyPeriodicWord word;
    bool is_upper;  // upper bounds are escaped by flipping 0 -> 1
  };
  const BoundRole bounds[] = {
      {shift_word(pair.upper), false},
      {pair.lower, true},
      {pair.upper, false},
      {shift_word(pair.lower), true},
  };
  for (const BoundRole& b : bounds) {
    const std::size_t horizon = effective_length(b.word) * 2 + 2;
    for (std::size_t m = 1; m <= horizon; ++m) {
      const Bit at = b.word.at(m - 1);
      if (b.is_upper ? (at != 0) : (at != 1)) continue;
      std::vector<Bit> bits_vec(m);
      for (std::size_t i = 0; i + 1 < m; ++i) bits_vec[i] = b.word.at(i);
      bits_vec[m - 1] = b.is_upper ? 1 : 0;
      const FiniteWord w(bits_vec);
      if (machine.is_factor(w)) continue;
      if (w.size() >= 2 && !machine.is_factor(drop_first(w))) continue;
      if (w.size() >= 2 && !machine.is_factor(drop_last(w))) continue;
      found.insert(w.bits);
    }
  }
  std::vector<FiniteWord> forbidden;
  for (const auto& bits_vec : found) forbidden.emplace_back(bits_vec);
  for (std::size_t round = 0;; ++round) {
    if (round > kForbiddenRoundCap) {
      throw EscalationFailed(
          "forbidden word set does not close; language is not of finite "
          "type");
    }
    const auto missing = find_missing_forbidden(machine, forbidden);
    if (!missing) break;
    const FiniteWord w = minimalize_non_factor(machine, *missing);
    if (!found.insert(w.bits).second) {
      throw InternalError("forbidden word completion repeated a word");
    }
    forbidden.emplace_back(w.bits);
  }
  std::sort(forbidden.begin(), forbidden.end(),
            [](const FiniteWord& a, const FiniteWord& b) {
              return a.size() != b.size() ? a.size() < b.size()
                                          : a.bits < b.bits;
            });
  std::size_t memory = 0;
  for (const FiniteWord& w : forbidden) memory = std::max(memory, w.size());
  return SftCertificate{pair, std::move(forbidden), memory,
                        growth_rate(aut, bits)};
}

}  // namespace betashift
