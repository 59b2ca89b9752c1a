#include "popsize/genome.hpp"

#include <bit>

#include "popsize/errors.hpp"
#include "popsize/rng.hpp"

namespace popsize {

namespace {
constexpr std::size_t kWordBits = 64;

constexpr std::uint64_t bit_mask(std::size_t i) {
  return std::uint64_t{1} << (kWordBits - 1 - i % kWordBits);
}
}  // namespace

Genome::Genome(std::size_t length)
    : length_(length), words_((length + kWordBits - 1) / kWordBits, 0) {}

Genome Genome::from_string(std::string_view text) {
  Genome g(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '1') {
      g.set(i, true);
    } else if (text[i] != '0') {
      throw InvalidGenome("genome text may only contain '0' and '1': " + std::string(text));
    }
  }
  return g;
}

std::string Genome::to_string() const {
  std::string s(length_, '0');
  for (std::size_t i = 0; i < length_; ++i)
    if (get(i)) s[i] = '1';
  return s;
}

bool Genome::get(std::size_t i) const { return (words_[i / kWordBits] & bit_mask(i)) != 0; }

void Genome::set(std::size_t i, bool value) {
  auto& w = words_[i / kWordBits];
  if (value)
    w |= bit_mask(i);
  else
    w &= ~bit_mask(i);
}

std::uint32_t Genome::get_block(std::size_t pos, unsigned len) const {
  const std::size_t word = pos / kWordBits;
  const unsigned offset = static_cast<unsigned>(pos % kWordBits);
  if (offset + len <= kWordBits) {
    const std::uint64_t w = words_[word] << offset;
    return static_cast<std::uint32_t>(w >> (kWordBits - len));
  }
  std::uint32_t v = 0;
  for (unsigned j = 0; j < len; ++j) v = (v << 1) | static_cast<std::uint32_t>(get(pos + j));
  return v;
}

void Genome::set_block(std::size_t pos, unsigned len, std::uint32_t value) {
  const std::size_t word = pos / kWordBits;
  const unsigned offset = static_cast<unsigned>(pos % kWordBits);
  if (offset + len <= kWordBits) {
    const unsigned shift = static_cast<unsigned>(kWordBits) - offset - len;
    const std::uint64_t mask = ((len == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << len) - 1)) << shift;
    words_[word] = (words_[word] & ~mask) | ((static_cast<std::uint64_t>(value) << shift) & mask);
    return;
  }
  for (unsigned j = 0; j < len; ++j) set(pos + j, ((value >> (len - 1 - j)) & 1U) != 0);
}

std::size_t Genome::count_ones() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::size_t Genome::hash() const {
  std::uint64_t h = mix64(length_);
  for (auto w : words_) h = mix64(h ^ w);
  return static_cast<std::size_t>(h);
}

void Genome::clear_tail() {
  const std::size_t rem = length_ % kWordBits;
  if (rem != 0 && !words_.empty()) words_.back() &= ~std::uint64_t{0} << (kWordBits - rem);
}

}  // namespace popsize
