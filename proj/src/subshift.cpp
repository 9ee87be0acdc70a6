#include "betashift/subshift.hpp"

#include <algorithm>
#include <cstring>
#include <deque>

#include "betashift/errors.hpp"

namespace betashift {

namespace {

// Guards against pathological blow-up; well-formed pairs stay far below.
constexpr std::size_t kStateCap = 2'000'000;

std::string id_key(const std::vector<std::uint32_t>& ids) {
  std::string key(ids.size() * sizeof(std::uint32_t), '\0');
  if (!ids.empty()) {
    std::memcpy(key.data(), ids.data(), key.size());
  }
  return key;
}

}  // namespace

ConstraintMachine::ConstraintMachine(WordPair pair) : pair_(std::move(pair)) {
  const auto low_a = shift_word(pair_.upper);
  const auto high_b = shift_word(pair_.lower);
  window_a_ = Mode{static_cast<std::int32_t>(intern_word(low_a)),
                   static_cast<std::int32_t>(intern_word(pair_.lower))};
  window_b_ = Mode{static_cast<std::int32_t>(intern_word(pair_.upper)),
                   static_cast<std::int32_t>(intern_word(high_b))};
  init_ = intern_key({}, state_ids_, states_);
  trans_.push_back({kDeadState, kDeadState});
  explore();
  compute_alive();
}

std::uint32_t ConstraintMachine::intern_word(const EventuallyPeriodicWord& w) {
  const std::string key = w.str();
  if (const auto it = word_ids_.find(key); it != word_ids_.end()) {
    return it->second;
  }
  const auto id = static_cast<std::uint32_t>(words_.size());
  words_.push_back(WordEntry{w, w.at(0), -2});
  word_ids_.emplace(key, id);
  return id;
}

std::int32_t ConstraintMachine::shifted(std::int32_t word_id) {
  auto& entry = words_[static_cast<std::size_t>(word_id)];
  if (entry.shifted == -2) {
    const EventuallyPeriodicWord s = shift_word(entry.word);
    words_[static_cast<std::size_t>(word_id)].shifted =
        static_cast<std::int32_t>(intern_word(s));
  }
  return words_[static_cast<std::size_t>(word_id)].shifted;
}

std::uint32_t ConstraintMachine::intern_mode(const Mode& m) {
  const std::uint64_t key =
      (static_cast<std::uint64_t>(static_cast<std::uint32_t>(m.low + 1))
       << 32) |
      static_cast<std::uint32_t>(m.high + 1);
  if (const auto it = mode_ids_.find(key); it != mode_ids_.end()) {
    return it->second;
  }
  const auto id = static_cast<std::uint32_t>(modes_.size());
  modes_.push_back(m);
  mode_ids_.emplace(key, id);
  return id;
}

std::uint32_t ConstraintMachine::intern_key(
    std::vector<std::uint32_t> ids,
    std::unordered_map<std::string, std::uint32_t>& map,
    std::vector<std::vector<std::uint32_t>>& table) {
  const std::string key = id_key(ids);
  if (const auto it = map.find(key); it != map.end()) {
    return it->second;
  }
  const auto id = static_cast<std::uint32_t>(table.size());
  table.push_back(std::move(ids));
  map.emplace(key, id);
  return id;
}

ConstraintMachine::Advanced ConstraintMachine::advance(const Mode& m, Bit c) {
  Advanced out;
  Mode next{kPassed, kPassed};
  if (m.low != kPassed) {
    const WordEntry& low = words_[static_cast<std::size_t>(m.low)];
    if (c < low.head) {
      out.dead = true;
      return out;
    }
    if (c == low.head) next.low = shifted(m.low);
  }
  if (m.high != kPassed) {
    const WordEntry& high = words_[static_cast<std::size_t>(m.high)];
    if (c > high.head) {
      out.dead = true;
      return out;
    }
    if (c == high.head) next.high = shifted(m.high);
  }
  out.mode = next;
  out.satisfied = (next.low == kPassed && next.high == kPassed);
  return out;
}

std::uint32_t ConstraintMachine::step(std::uint32_t state, Bit c) {
  std::vector<std::uint32_t> next_constraints;
  for (const std::uint32_t cid : states_[state]) {
    std::vector<std::uint32_t> next_modes;
    bool satisfied = false;
    for (const std::uint32_t mid : constraints_[cid]) {
      const Advanced a = advance(modes_[mid], c);
      if (a.dead) continue;
      if (a.satisfied) {
        satisfied = true;
        break;
      }
      next_modes.push_back(intern_mode(a.mode));
    }
    if (satisfied) continue;
    if (next_modes.empty()) return kDeadState;
    std::sort(next_modes.begin(), next_modes.end());
    next_modes.erase(std::unique(next_modes.begin(), next_modes.end()),
                     next_modes.end());
    next_constraints.push_back(
        intern_key(std::move(next_modes), constraint_ids_, constraints_));
  }
  // The suffix starting at this letter joins as a fresh position.
  {
    std::vector<std::uint32_t> next_modes;
    bool satisfied = false;
    for (const Mode& w : {window_a_, window_b_}) {
      const Advanced a = advance(w, c);
      if (a.dead) continue;
      if (a.satisfied) {
        satisfied = true;
        break;
      }
      next_modes.push_back(intern_mode(a.mode));
    }
    if (!satisfied) {
      if (next_modes.empty()) return kDeadState;
      std::sort(next_modes.begin(), next_modes.end());
      next_modes.erase(std::unique(next_modes.begin(), next_modes.end()),
                       next_modes.end());
      next_constraints.push_back(
          intern_key(std::move(next_modes), constraint_ids_, constraints_));
    }
  }
  std::sort(next_constraints.begin(), next_constraints.end());
  next_constraints.erase(
      std::unique(next_constraints.begin(), next_constraints.end()),
      next_constraints.end());
  const std::uint32_t id =
      intern_key(std::move(next_constraints), state_ids_, states_);
  if (id >= trans_.size()) trans_.push_back({kDeadState, kDeadState});
  return id;
}

void ConstraintMachine::explore() {
  std::deque<std::uint32_t> queue{init_};
  std::vector<bool> seen(1, true);
  while (!queue.empty()) {
    const std::uint32_t s = queue.front();
    queue.pop_front();
    for (const Bit c : {Bit{0}, Bit{1}}) {
      const std::uint32_t t = step(s, c);
      trans_[s][c] = t;
      if (t == kDeadState) continue;
      if (t >= seen.size()) seen.resize(t + 1, false);
      if (!seen[t]) {
        seen[t] = true;
        queue.push_back(t);
      }
    }
    if (states_.size() > kStateCap) {
      throw EscalationFailed("constraint machine exceeded state cap");
    }
  }
}

void ConstraintMachine::compute_alive() {
  alive_.assign(states_.size(), true);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t s = 0; s < states_.size(); ++s) {
      if (!alive_[s]) continue;
      bool has_live_successor = false;
      for (const Bit c : {Bit{0}, Bit{1}}) {
        const std::uint32_t t = trans_[s][c];
        if (t != kDeadState && alive_[t]) {
          has_live_successor = true;
          break;
        }
      }
      if (!has_live_successor) {
        alive_[s] = false;
        changed = true;
      }
    }
  }
}

std::optional<std::uint32_t> ConstraintMachine::transition(std::uint32_t state,
                                                           Bit c) const {
  const std::uint32_t t = trans_.at(state)[c];
  if (t == kDeadState) return std::nullopt;
  return t;
}

mpz_class ConstraintMachine::count(std::size_t n, bool factors_only) const {
  std::vector<mpz_class> cur(states_.size()), next(states_.size());
  cur[init_] = 1;
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& v : next) v = 0;
    for (std::size_t s = 0; s < states_.size(); ++s) {
      if (cur[s] == 0) continue;
      for (const Bit c : {Bit{0}, Bit{1}}) {
        const std::uint32_t t = trans_[s][c];
        if (t == kDeadState) continue;
        if (factors_only && !alive_[t]) continue;
        next[t] += cur[s];
      }
    }
    std::swap(cur, next);
  }
  mpz_class total = 0;
  for (std::size_t s = 0; s < states_.size(); ++s) {
    if (factors_only && !alive_[s]) continue;
    total += cur[s];
  }
  return total;
}

bool ConstraintMachine::is_factor(const FiniteWord& w) const {
  std::uint32_t s = init_;
  for (const Bit c : w.bits) {
    const std::uint32_t t = trans_[s][c];
    if (t == kDeadState) return false;
    s = t;
  }
  return alive_[s];
}

mpz_class ConstraintMachine::count_surviving(std::size_t n) const {
  return count(n, false);
}

mpz_class ConstraintMachine::count_factors(std::size_t n) const {
  // Paths never leave the alive subgraph and re-enter it, so pruning at
  // every step equals pruning at the end.
  return count(n, true);
}

mpz_class count_words_bruteforce(const WordPair& pair, std::size_t n) {
  return ConstraintMachine(pair).count_factors(n);
}

}  // namespace betashift
