#include "betashift/words.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace betashift {

namespace {

std::vector<Bit> parse_bits(std::string_view text, std::string_view what) {
  std::vector<Bit> out;
  out.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw DomainError(std::string(what) + ": invalid letter '" + c +
                        "' in \"" + std::string(text) + "\"");
    }
    out.push_back(static_cast<Bit>(c - '0'));
  }
  return out;
}

void check_bits(const std::vector<Bit>& bits, std::string_view what) {
  for (Bit b : bits) {
    if (b > 1) {
      throw DomainError(std::string(what) + ": letters must be 0 or 1");
    }
  }
}

std::string bits_to_string(const std::vector<Bit>& bits) {
  std::string s;
  s.reserve(bits.size());
  for (Bit b : bits) s.push_back(static_cast<char>('0' + b));
  return s;
}

// Shortest d with d | size such that the word is d-periodic.
std::size_t primitive_length(const std::vector<Bit>& word) {
  const std::size_t m = word.size();
  for (std::size_t d = 1; d < m; ++d) {
    if (m % d != 0) continue;
    bool ok = true;
    for (std::size_t i = d; i < m && ok; ++i) ok = (word[i] == word[i - d]);
    if (ok) return d;
  }
  return m;
}

}  // namespace

FiniteWord::FiniteWord(std::vector<Bit> b) : bits(std::move(b)) {
  check_bits(bits, "FiniteWord");
}

FiniteWord FiniteWord::parse(std::string_view text) {
  return FiniteWord(parse_bits(text, "FiniteWord"));
}

std::string FiniteWord::str() const { return bits_to_string(bits); }

EventuallyPeriodicWord::EventuallyPeriodicWord(std::vector<Bit> preperiod,
                                               std::vector<Bit> period)
    : pre_(std::move(preperiod)), per_(std::move(period)) {
  if (per_.empty()) {
    throw DomainError("EventuallyPeriodicWord: period must be non-empty");
  }
  check_bits(pre_, "EventuallyPeriodicWord");
  check_bits(per_, "EventuallyPeriodicWord");
  per_.resize(primitive_length(per_));
  // Absorbing a trailing preperiod letter equal to the last period letter
  // rotates the period; conjugates of a primitive word stay primitive.
  while (!pre_.empty() && pre_.back() == per_.back()) {
    pre_.pop_back();
    std::rotate(per_.rbegin(), per_.rbegin() + 1, per_.rend());
  }
}

EventuallyPeriodicWord EventuallyPeriodicWord::parse(std::string_view text) {
  const std::size_t open = text.find('(');
  if (open == std::string_view::npos) {
    throw DomainError(
        "EventuallyPeriodicWord: missing period; write e.g. \"01(10)\" or "
        "\"(01)\", got \"" +
        std::string(text) + "\"");
  }
  if (text.empty() || text.back() != ')' || text.find(')') + 1 != text.size()) {
    throw DomainError("EventuallyPeriodicWord: malformed \"" +
                      std::string(text) + "\"");
  }
  auto pre = parse_bits(text.substr(0, open), "EventuallyPeriodicWord");
  auto per = parse_bits(text.substr(open + 1, text.size() - open - 2),
                        "EventuallyPeriodicWord");
  return EventuallyPeriodicWord(std::move(pre), std::move(per));
}

std::string EventuallyPeriodicWord::str() const {
  return bits_to_string(pre_) + "(" + bits_to_string(per_) + ")";
}

EventuallyPeriodicWord shift_word(const EventuallyPeriodicWord& w,
                                  std::size_t k) {
  const auto& pre = w.preperiod();
  const auto& per = w.period();
  if (k < pre.size()) {
    return EventuallyPeriodicWord(
        std::vector<Bit>(pre.begin() + static_cast<std::ptrdiff_t>(k),
                         pre.end()),
        per);
  }
  const std::size_t r = (k - pre.size()) % per.size();
  std::vector<Bit> rotated(per.begin() + static_cast<std::ptrdiff_t>(r),
                           per.end());
  rotated.insert(rotated.end(), per.begin(),
                 per.begin() + static_cast<std::ptrdiff_t>(r));
  return EventuallyPeriodicWord({}, std::move(rotated));
}

EventuallyPeriodicWord complement(const EventuallyPeriodicWord& w) {
  std::vector<Bit> pre = w.preperiod();
  std::vector<Bit> per = w.period();
  for (Bit& b : pre) b ^= 1;
  for (Bit& b : per) b ^= 1;
  return EventuallyPeriodicWord(std::move(pre), std::move(per));
}

FiniteWord complement(const FiniteWord& w) {
  std::vector<Bit> bits = w.bits;
  for (Bit& b : bits) b ^= 1;
  return FiniteWord(std::move(bits));
}

EventuallyPeriodicWord concat(const FiniteWord& head,
                              const EventuallyPeriodicWord& tail) {
  std::vector<Bit> pre = head.bits;
  pre.insert(pre.end(), tail.preperiod().begin(), tail.preperiod().end());
  return EventuallyPeriodicWord(std::move(pre), tail.period());
}

FiniteWord prefix(const EventuallyPeriodicWord& w, std::size_t n) {
  std::vector<Bit> bits(n);
  for (std::size_t i = 0; i < n; ++i) bits[i] = w.at(i);
  return FiniteWord(std::move(bits));
}

namespace {

// Once both words are past their preperiods, the pair of letters repeats
// with period lcm(|perA|, |perB|); one extra full cycle decides equality.
std::size_t compare_horizon(const EventuallyPeriodicWord& a,
                            const EventuallyPeriodicWord& b) {
  return std::max(a.preperiod_length(), b.preperiod_length()) +
         std::lcm(a.period_length(), b.period_length());
}

}  // namespace

Ordering lex_compare(const EventuallyPeriodicWord& a,
                     const EventuallyPeriodicWord& b) {
  const std::size_t horizon = compare_horizon(a, b);
  for (std::size_t i = 0; i < horizon; ++i) {
    const Bit x = a.at(i), y = b.at(i);
    if (x != y) return x <=> y;
  }
  return Ordering::equal;
}

std::size_t first_difference(const EventuallyPeriodicWord& a,
                             const EventuallyPeriodicWord& b) {
  const std::size_t horizon = compare_horizon(a, b);
  for (std::size_t i = 0; i < horizon; ++i) {
    if (a.at(i) != b.at(i)) return i + 1;
  }
  return 0;
}

double word_metric(const EventuallyPeriodicWord& a,
                   const EventuallyPeriodicWord& b) {
  const std::size_t m = first_difference(a, b);
  if (m == 0) return 0.0;
  return std::ldexp(1.0, 1 - static_cast<int>(m));
}

}  // namespace betashift
